#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "promptsparse/backend.hpp"
#include "promptsparse/pipeline.hpp"
#include "promptsparse/types.hpp"

namespace promptsparse {

// {"episodes": [{"id", "class", "references": [{"image", "mask"}],
//                "target": {"image", "mask" | null}}]}
// Relative paths resolve against the manifest's directory.
struct ManifestEntry {
  struct Pair {
    std::filesystem::path image;
    std::filesystem::path mask;
  };

  std::string id;
  std::string class_name;
  std::vector<Pair> references;
  std::filesystem::path target_image;
  std::optional<std::filesystem::path> target_mask;
};

struct Manifest {
  std::vector<ManifestEntry> episodes;
};

// Error(Io) when unreadable, Error(Decode) when malformed.
Manifest load_manifest(const std::filesystem::path& path);
Manifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir);
// Paths are written relative to `base_dir` when they live under it.
std::string manifest_json(const Manifest& manifest, const std::filesystem::path& base_dir);

Episode load_episode(const ManifestEntry& entry);

struct LabeledEpisode {
  std::string id;
  std::string class_name;
  Episode episode;
};

struct EpisodeOutcome {
  std::string id;
  std::string class_name;
  std::optional<EpisodeResult> result;
  // Set when run_episode threw.
  std::optional<std::string> error;
};

// Runs every episode, `jobs` at a time. Episode failures are captured in
// the outcome, never thrown. Outcomes are sorted by id.
std::vector<EpisodeOutcome> run_episodes(const std::vector<LabeledEpisode>& episodes,
                                         const PipelineConfig& cfg, const EncoderBackend& enc,
                                         const SegmenterBackend& seg, std::size_t jobs = 1);

struct DatasetReport {
  std::vector<EpisodeOutcome> outcomes;
  // Percent mIoU per class and over all episodes. A failed episode counts
  // as IoU 0.
  std::map<std::string, double> class_miou;
  std::map<std::string, std::size_t> class_count;
  double miou = 0.0;
  std::size_t failures = 0;
};

// Error(InvalidArgument) naming every episode without target ground truth.
DatasetReport evaluate_dataset(const std::vector<LabeledEpisode>& episodes,
                               const PipelineConfig& cfg, const EncoderBackend& enc,
                               const SegmenterBackend& seg, std::size_t jobs = 1);

DatasetReport summarize(std::vector<EpisodeOutcome> outcomes);

// episode_id,class,selected_density,n_matched,n_pruned,n_sparse,iou
std::string results_csv(const std::vector<EpisodeOutcome>& outcomes);
// class,n_episodes,miou (last row: class "ALL")
std::string summary_csv(const DatasetReport& report);

// Per-episode trace document (stage log, counts, density verdict, IoU).
std::string trace_json(const EpisodeOutcome& outcome);

}  // namespace promptsparse
