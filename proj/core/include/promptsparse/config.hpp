#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>

#include "promptsparse/backend.hpp"
#include "promptsparse/oracle.hpp"
#include "promptsparse/pipeline.hpp"

namespace promptsparse {

// Oracle spec file:
//   {"mode": "perfect" | "density_peaked" | "erosion_proportional",
//    "peak_density": 4, "falloff": 0.1, "rate": 0.05, "encoder_grid": 16}
struct OracleFile {
  OracleSpec spec;
  int encoder_grid = 16;
};
OracleFile parse_oracle_file(const std::string& text);
OracleFile load_oracle_file(const std::filesystem::path& path);

struct BackendConfig {
  enum class Kind { Oracle, Remote, Replay };

  Kind kind = Kind::Oracle;
  // Oracle: optional spec file (perfect oracle with a 16x16 grid otherwise).
  std::optional<std::filesystem::path> oracle_spec;
  // Remote.
  std::string base_url;
  int retries = 3;
  std::optional<std::filesystem::path> record_dir;
  // Replay.
  std::filesystem::path replay_dir;
  // Remote / replay capability declarations.
  EncoderCapabilities encoder;
  SegmenterCapabilities segmenter;

  // "oracle", "oracle:<spec.json>", "remote" or "replay:<dir>".
  static BackendConfig parse(const std::string& text);
};

// Config file schema (every key optional):
//   {"backend": {"kind": "oracle"|"remote"|"replay", "spec", "base_url",
//                "retries", "record_dir", "replay_dir",
//                "encoder": {"input_resolution", "grid_h", "grid_w", "dim"},
//                "segmenter": {"input_resolution", "max_in_flight"}},
//    "pipeline": {"match": {"similarity_threshold", "max_points",
//                           "use_background_negatives"},
//                 "candidates": [2, 4, ...],
//                 "kernel": {"shape": "square"|"disk", "radius"},
//                 "toggles": {"pruning", "sparsification", "refinement"},
//                 "min_keep"},
//    "jobs": 1, "manifest": path, "out": path}
// Relative paths resolve against `base_dir`.
struct CliConfig {
  BackendConfig backend;
  PipelineConfig pipeline;
  std::size_t jobs = 1;
  std::optional<std::filesystem::path> manifest;
  std::optional<std::filesystem::path> out;
};

CliConfig parse_cli_config(const std::string& text, const std::filesystem::path& base_dir);
CliConfig load_cli_config(const std::filesystem::path& path);

std::string pipeline_json(const PipelineConfig& cfg);

}  // namespace promptsparse
