#include "cli_app.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "promptsparse/config.hpp"
#include "promptsparse/dataset.hpp"
#include "promptsparse/image_io.hpp"
#include "promptsparse/oracle.hpp"
#include "promptsparse/pipeline.hpp"
#include "promptsparse/refine.hpp"
#include "promptsparse/remote.hpp"
#include "promptsparse/replay.hpp"

namespace promptsparse::cli {

namespace fs = std::filesystem;

namespace {

// Raised for conditions that map straight onto an exit code.
struct ExitError {
  int code;
  std::string message;
};

// Command-line values; unset options leave the config file (or defaults)
// alone.
struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> manifest;
  std::optional<std::string> backend;
  std::optional<std::string> base_url;
  std::optional<std::string> densities;
  std::optional<int> kernel_radius;
  std::optional<std::string> kernel_shape;
  bool no_prune = false;
  std::optional<std::string> sparsify;
  bool no_refine = false;
  std::optional<std::size_t> jobs;
  std::optional<std::string> out;
  std::optional<std::string> in;
  std::optional<std::string> image;
  std::optional<std::string> mask;
};

std::vector<int> parse_densities(const std::string& text) {
  std::vector<int> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      values.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad density list \"" + text + "\"");
    }
  }
  return values;
}

CliConfig resolve_config(const Flags& f) {
  CliConfig cfg = f.config ? load_cli_config(*f.config) : CliConfig{};
  if (f.backend) {
    const auto parsed = BackendConfig::parse(*f.backend);
    cfg.backend.kind = parsed.kind;
    if (parsed.oracle_spec) cfg.backend.oracle_spec = parsed.oracle_spec;
    if (parsed.kind == BackendConfig::Kind::Replay) cfg.backend.replay_dir = parsed.replay_dir;
  }
  if (f.base_url) cfg.backend.base_url = *f.base_url;
  if (f.densities) cfg.pipeline.candidates = DensityCandidates(parse_densities(*f.densities));
  if (f.kernel_radius) cfg.pipeline.kernel.radius = *f.kernel_radius;
  if (f.kernel_shape) {
    if (*f.kernel_shape == "square") {
      cfg.pipeline.kernel.shape = StructuringElement::Shape::Square;
    } else if (*f.kernel_shape == "disk") {
      cfg.pipeline.kernel.shape = StructuringElement::Shape::Disk;
    } else {
      throw Error(ErrorCode::InvalidArgument, "--kernel-shape must be square or disk");
    }
  }
  if (f.no_prune) cfg.pipeline.toggles.pruning = false;
  if (f.sparsify) cfg.pipeline.toggles.sparsification = SparsifyMode::parse(*f.sparsify);
  if (f.no_refine) cfg.pipeline.toggles.refinement = false;
  if (f.jobs) cfg.jobs = *f.jobs;
  if (f.manifest) cfg.manifest = *f.manifest;
  if (f.out) cfg.out = *f.out;
  cfg.pipeline.validate();
  return cfg;
}

// Owns whichever backend objects the config asks for.
struct Backends {
  std::unique_ptr<EncoderBackend> encoder_owner;
  std::unique_ptr<OracleSegmenter> oracle;
  std::unique_ptr<RemoteBackend> remote;
  std::unique_ptr<ReplayBackend> replay;
  std::unique_ptr<RecordingBackend> recorder;
  const EncoderBackend* encoder = nullptr;
  const SegmenterBackend* segmenter = nullptr;
  std::string description;
};

Backends make_backends(const BackendConfig& cfg, std::ostream& out) {
  Backends b;
  switch (cfg.kind) {
    case BackendConfig::Kind::Oracle: {
      OracleFile file;
      if (cfg.oracle_spec) {
        try {
          file = load_oracle_file(*cfg.oracle_spec);
        } catch (const Error& e) {
          throw ExitError{kInputError, e.what()};
        }
      }
      b.encoder_owner = std::make_unique<PatchStatsEncoder>(file.encoder_grid, file.encoder_grid);
      b.oracle = std::make_unique<OracleSegmenter>(file.spec);
      b.encoder = b.encoder_owner.get();
      b.segmenter = b.oracle.get();
      b.description = std::string("oracle (") + to_string(file.spec.mode) + ")";
      break;
    }
    case BackendConfig::Kind::Remote: {
      RemoteOptions opts;
      opts.base_url = cfg.base_url;
      opts.retries = cfg.retries;
      opts.encoder = cfg.encoder;
      opts.segmenter = cfg.segmenter;
      try {
        validate_base_url(cfg.base_url);
      } catch (const Error& e) {
        throw ExitError{kInputError, e.what()};
      }
      b.remote = std::make_unique<RemoteBackend>(opts);
      try {
        const auto health = b.remote->health();
        b.remote->adopt(health);
        out << "backend " << cfg.base_url << ": encoder " << health.encoder << ", segmenter "
            << health.segmenter << "\n";
      } catch (const Error& e) {
        throw ExitError{kBackendError, std::string("health check failed: ") + e.what()};
      }
      b.encoder = b.remote.get();
      b.segmenter = b.remote.get();
      b.description = "remote " + cfg.base_url;
      if (cfg.record_dir) {
        b.recorder = std::make_unique<RecordingBackend>(*b.encoder, *b.segmenter, *cfg.record_dir);
        b.encoder = b.recorder.get();
        b.segmenter = b.recorder.get();
        b.description += " (recording to " + cfg.record_dir->string() + ")";
      }
      break;
    }
    case BackendConfig::Kind::Replay: {
      try {
        b.replay = std::make_unique<ReplayBackend>(cfg.replay_dir, cfg.encoder, cfg.segmenter);
      } catch (const Error& e) {
        throw ExitError{kInputError, e.what()};
      }
      b.encoder = b.replay.get();
      b.segmenter = b.replay.get();
      b.description = "replay " + cfg.replay_dir.string();
      break;
    }
  }
  return b;
}

std::string now_string() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[64];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int cmd_episodes(const Flags& flags, bool evaluate, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  Manifest manifest;
  try {
    cfg = resolve_config(flags);
    if (!cfg.manifest) throw ExitError{kInputError, "--manifest is required"};
    if (!cfg.out) throw ExitError{kInputError, "--out is required"};
    manifest = load_manifest(*cfg.manifest);
  } catch (const Error& e) {
    throw ExitError{kInputError, e.what()};
  }

  const auto started = std::chrono::steady_clock::now();
  Backends backends = make_backends(cfg.backend, out);

  std::vector<LabeledEpisode> episodes;
  std::vector<EpisodeOutcome> load_failures;
  for (const auto& entry : manifest.episodes) {
    try {
      episodes.push_back({entry.id, entry.class_name, load_episode(entry)});
    } catch (const Error& e) {
      load_failures.push_back({entry.id, entry.class_name, std::nullopt,
                               std::string(to_string(e.code())) + ": " + e.what()});
    }
  }
  if (evaluate) {
    std::string missing;
    for (const auto& e : episodes) {
      if (!e.episode.target_gt) missing += (missing.empty() ? "" : ", ") + e.id;
    }
    if (!missing.empty()) {
      throw ExitError{kInputError, "eval needs target ground truth; missing for: " + missing};
    }
  }
  if (backends.oracle) {
    for (const auto& e : episodes) backends.oracle->register_episode(e.episode);
  }

  auto outcomes =
      run_episodes(episodes, cfg.pipeline, *backends.encoder, *backends.segmenter, cfg.jobs);
  outcomes.insert(outcomes.end(), load_failures.begin(), load_failures.end());
  std::stable_sort(outcomes.begin(), outcomes.end(),
                   [](const EpisodeOutcome& a, const EpisodeOutcome& b) { return a.id < b.id; });

  const fs::path out_dir = *cfg.out;
  try {
    fs::create_directories(out_dir / "masks");
    fs::create_directories(out_dir / "traces");
    for (const auto& o : outcomes) {
      if (o.result) write_mask(out_dir / "masks" / (o.id + ".png"), o.result->mask);
      write_file_atomic(out_dir / "traces" / (o.id + ".json"), trace_json(o));
    }
    write_file_atomic(out_dir / "results.csv", results_csv(outcomes));
  } catch (const std::exception& e) {
    throw ExitError{kInputError, std::string("cannot write outputs: ") + e.what()};
  }

  std::size_t failures = 0;
  std::ostringstream log;
  log << "started_utc " << now_string() << "\n"
      << "backend " << backends.description << "\n"
      << "manifest " << cfg.manifest->string() << "\n"
      << "jobs " << cfg.jobs << "\n"
      << "pipeline " << pipeline_json(cfg.pipeline);
  for (const auto& o : outcomes) {
    if (o.error) {
      ++failures;
      err << "episode " << o.id << ": " << *o.error << "\n";
      log << "failed " << o.id << ": " << *o.error << "\n";
    }
  }

  if (evaluate) {
    const auto report = summarize(outcomes);
    write_file_atomic(out_dir / "summary.csv", summary_csv(report));
    out << "class             episodes   mIoU\n";
    for (const auto& [cls, miou] : report.class_miou) {
      char line[128];
      std::snprintf(line, sizeof(line), "%-16s %9zu %7.2f\n", cls.c_str(),
                    report.class_count.at(cls), miou);
      out << line;
    }
    char line[128];
    std::snprintf(line, sizeof(line), "%-16s %9zu %7.2f\n", "ALL", report.outcomes.size(),
                  report.miou);
    out << line;
  }

  const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started);
  log << "episodes " << outcomes.size() << " failures " << failures << "\n"
      << "elapsed_s " << elapsed.count() << "\n";
  write_file_atomic(out_dir / "run.log", log.str());

  out << outcomes.size() - failures << "/" << outcomes.size() << " episodes ok, results in "
      << (out_dir / "results.csv").string() << "\n";
  return failures == 0 ? kOk : kEpisodeFailures;
}

int cmd_density_study(const Flags& flags, std::ostream& out) {
  CliConfig cfg;
  Image image;
  BinaryMask mask;
  try {
    cfg = resolve_config(flags);
    if (!flags.image || !flags.mask) throw ExitError{kInputError, "--image and --mask are required"};
    image = read_image(*flags.image);
    mask = read_mask(*flags.mask);
    if (mask.width() != image.width() || mask.height() != image.height()) {
      throw ExitError{kInputError, "mask does not match image dimensions"};
    }
  } catch (const Error& e) {
    throw ExitError{kInputError, e.what()};
  }
  Backends backends = make_backends(cfg.backend, out);
  if (backends.oracle) backends.oracle->add_truth(image, mask);

  std::vector<DensityStudyRow> rows;
  try {
    rows = density_sensitivity_study(image, mask, cfg.pipeline.candidates, *backends.segmenter);
  } catch (const Error& e) {
    throw ExitError{kBackendError, e.what()};
  }
  const auto csv = density_study_csv(rows);
  if (cfg.out) {
    write_file_atomic(*cfg.out, csv);
  } else {
    out << csv;
  }
  return kOk;
}

int cmd_refine(const Flags& flags, std::ostream& out) {
  StructuringElement kernel;
  BinaryMask mask;
  try {
    kernel = resolve_config(flags).pipeline.kernel;
    if (!flags.in || !flags.out) throw ExitError{kInputError, "--in and --out are required"};
    mask = read_mask(*flags.in);
  } catch (const Error& e) {
    throw ExitError{kInputError, e.what()};
  }
  const auto refined = refine_mask(mask, kernel);
  write_mask(*flags.out, refined);
  out << "refined " << *flags.in << " -> " << *flags.out << " (" << mask.count() << " -> "
      << refined.count() << " foreground pixels)\n";
  return kOk;
}

int cmd_health(const Flags& flags, std::ostream& out) {
  CliConfig cfg;
  try {
    cfg = resolve_config(flags);
  } catch (const Error& e) {
    throw ExitError{kInputError, e.what()};
  }
  if (cfg.backend.kind != BackendConfig::Kind::Remote) {
    Backends b = make_backends(cfg.backend, out);
    out << "status ok (" << b.description << ")\n";
    return kOk;
  }
  make_backends(cfg.backend, out);
  out << "status ok\n";
  return kOk;
}

void add_backend_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON config file (flags override it)");
  cmd->add_option("--backend", f.backend, "oracle[:spec.json] | remote | replay:<dir>");
  cmd->add_option("--base-url", f.base_url, "Model service URL for the remote backend");
}

void add_pipeline_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--densities", f.densities, "Candidate densities, e.g. 2,4,8");
  cmd->add_option("--kernel-radius", f.kernel_radius, "Refinement structuring element radius");
  cmd->add_option("--kernel-shape", f.kernel_shape, "square | disk");
  cmd->add_flag("--no-prune", f.no_prune, "Skip convex-hull boundary pruning");
  cmd->add_option("--sparsify", f.sparsify, "off | fixed:<D> | adaptive");
  cmd->add_flag("--no-refine", f.no_refine, "Skip morphological refinement");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse point prompting for few-shot segmentation"};
  app.require_subcommand(1);
  Flags f;

  auto* run = app.add_subcommand("run", "Run episodes from a manifest");
  auto* eval = app.add_subcommand("eval", "Run episodes and report per-class mIoU");
  for (auto* cmd : {run, eval}) {
    cmd->add_option("--manifest", f.manifest, "Episode manifest (JSON)");
    cmd->add_option("--out", f.out, "Output directory");
    cmd->add_option("--jobs", f.jobs, "Episodes processed in parallel");
    add_backend_flags(cmd, f);
    add_pipeline_flags(cmd, f);
  }

  auto* study = app.add_subcommand("density-study", "IoU of lattice prompts per density");
  study->add_option("--image", f.image, "Image (PNG)");
  study->add_option("--mask", f.mask, "Ground-truth mask (PNG)");
  study->add_option("--densities", f.densities, "Densities, e.g. 2,4,8");
  study->add_option("--out", f.out, "CSV output (stdout when omitted)");
  add_backend_flags(study, f);

  auto* refine = app.add_subcommand("refine", "Open-close a mask");
  refine->add_option("--in", f.in, "Input mask (PNG)");
  refine->add_option("--out", f.out, "Output mask (PNG)");
  refine->add_option("--kernel-radius", f.kernel_radius, "Structuring element radius");
  refine->add_option("--kernel-shape", f.kernel_shape, "square | disk");
  refine->add_option("--config", f.config, "JSON config file");

  auto* health = app.add_subcommand("health", "Check a backend");
  add_backend_flags(health, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    if (run->parsed()) return cmd_episodes(f, false, out, err);
    if (eval->parsed()) return cmd_episodes(f, true, out, err);
    if (study->parsed()) return cmd_density_study(f, out);
    if (refine->parsed()) return cmd_refine(f, out);
    if (health->parsed()) return cmd_health(f, out);
  } catch (const ExitError& e) {
    err << "error: " << e.message << "\n";
    return e.code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    const bool backend = e.code() == ErrorCode::Backend || e.code() == ErrorCode::Transport;
    return backend ? kBackendError : kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace promptsparse::cli
