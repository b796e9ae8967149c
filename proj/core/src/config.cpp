#include "promptsparse/config.hpp"

#include "json.hpp"
#include "promptsparse/image_io.hpp"

namespace promptsparse {

using nlohmann::json;

namespace {

json parse_object(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false, true);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::Decode, std::string(what) + " must be a JSON object");
  }
  return j;
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::Decode, std::string("config key \"") + key + "\" has the wrong type");
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

OracleSpec::Mode parse_mode(const std::string& s) {
  if (s == "perfect") return OracleSpec::Mode::Perfect;
  if (s == "density_peaked") return OracleSpec::Mode::DensityPeaked;
  if (s == "erosion_proportional") return OracleSpec::Mode::ErosionProportional;
  throw Error(ErrorCode::Decode, "unknown oracle mode \"" + s + "\"");
}

StructuringElement::Shape parse_shape(const std::string& s) {
  if (s == "square") return StructuringElement::Shape::Square;
  if (s == "disk") return StructuringElement::Shape::Disk;
  throw Error(ErrorCode::Decode, "kernel shape must be square or disk, got \"" + s + "\"");
}

void read_pipeline(const json& j, PipelineConfig& cfg) {
  if (const auto m = j.find("match"); m != j.end()) {
    read(*m, "similarity_threshold", cfg.match.similarity_threshold);
    read(*m, "max_points", cfg.match.max_points);
    read(*m, "use_background_negatives", cfg.match.use_background_negatives);
  }
  if (j.contains("candidates")) {
    std::vector<int> values;
    read(j, "candidates", values);
    cfg.candidates = DensityCandidates(std::move(values));
  }
  if (const auto k = j.find("kernel"); k != j.end()) {
    std::string shape;
    read(*k, "shape", shape);
    if (!shape.empty()) cfg.kernel.shape = parse_shape(shape);
    read(*k, "radius", cfg.kernel.radius);
  }
  if (const auto t = j.find("toggles"); t != j.end()) {
    read(*t, "pruning", cfg.toggles.pruning);
    read(*t, "refinement", cfg.toggles.refinement);
    std::string mode;
    read(*t, "sparsification", mode);
    if (!mode.empty()) cfg.toggles.sparsification = SparsifyMode::parse(mode);
  }
  read(j, "min_keep", cfg.min_keep);
}

}  // namespace

OracleFile parse_oracle_file(const std::string& text) {
  const json j = parse_object(text, "oracle spec");
  OracleFile f;
  std::string mode = "perfect";
  read(j, "mode", mode);
  f.spec.mode = parse_mode(mode);
  read(j, "peak_density", f.spec.peak_density);
  read(j, "falloff", f.spec.falloff);
  read(j, "rate", f.spec.rate);
  read(j, "encoder_grid", f.encoder_grid);
  f.spec.validate();
  if (f.encoder_grid < 1) {
    throw Error(ErrorCode::Decode, "encoder_grid must be >= 1");
  }
  return f;
}

OracleFile load_oracle_file(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  try {
    return parse_oracle_file(std::string(bytes.begin(), bytes.end()));
  } catch (const Error& e) {
    throw e.with_context(path.string());
  }
}

BackendConfig BackendConfig::parse(const std::string& text) {
  BackendConfig b;
  if (text == "oracle") {
    b.kind = Kind::Oracle;
  } else if (text.rfind("oracle:", 0) == 0 && text.size() > 7) {
    b.kind = Kind::Oracle;
    b.oracle_spec = text.substr(7);
  } else if (text == "remote") {
    b.kind = Kind::Remote;
  } else if (text.rfind("replay:", 0) == 0 && text.size() > 7) {
    b.kind = Kind::Replay;
    b.replay_dir = text.substr(7);
  } else {
    throw Error(ErrorCode::InvalidArgument,
                "backend must be oracle[:spec.json], remote or replay:<dir>, got \"" + text + "\"");
  }
  return b;
}

CliConfig parse_cli_config(const std::string& text, const std::filesystem::path& base_dir) {
  const json j = parse_object(text, "config");
  CliConfig cfg;
  if (const auto b = j.find("backend"); b != j.end()) {
    std::string kind = "oracle";
    read(*b, "kind", kind);
    if (kind == "oracle") {
      cfg.backend.kind = BackendConfig::Kind::Oracle;
    } else if (kind == "remote") {
      cfg.backend.kind = BackendConfig::Kind::Remote;
    } else if (kind == "replay") {
      cfg.backend.kind = BackendConfig::Kind::Replay;
    } else {
      throw Error(ErrorCode::Decode, "unknown backend kind \"" + kind + "\"");
    }
    std::string path;
    read(*b, "spec", path);
    if (!path.empty()) cfg.backend.oracle_spec = resolve(base_dir, path);
    read(*b, "base_url", cfg.backend.base_url);
    read(*b, "retries", cfg.backend.retries);
    path.clear();
    read(*b, "record_dir", path);
    if (!path.empty()) cfg.backend.record_dir = resolve(base_dir, path);
    path.clear();
    read(*b, "replay_dir", path);
    if (!path.empty()) cfg.backend.replay_dir = resolve(base_dir, path);
    if (const auto e = b->find("encoder"); e != b->end()) {
      read(*e, "input_resolution", cfg.backend.encoder.input_resolution);
      read(*e, "grid_h", cfg.backend.encoder.grid_h);
      read(*e, "grid_w", cfg.backend.encoder.grid_w);
      read(*e, "dim", cfg.backend.encoder.dim);
    }
    if (const auto s = b->find("segmenter"); s != b->end()) {
      read(*s, "input_resolution", cfg.backend.segmenter.input_resolution);
      read(*s, "max_in_flight", cfg.backend.segmenter.max_in_flight);
    }
  }
  if (const auto p = j.find("pipeline"); p != j.end()) {
    try {
      read_pipeline(*p, cfg.pipeline);
    } catch (const Error& e) {
      throw Error(ErrorCode::Decode, e.what());
    }
  }
  read(j, "jobs", cfg.jobs);
  std::string path;
  read(j, "manifest", path);
  if (!path.empty()) cfg.manifest = resolve(base_dir, path);
  path.clear();
  read(j, "out", path);
  if (!path.empty()) cfg.out = resolve(base_dir, path);
  return cfg;
}

CliConfig load_cli_config(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  try {
    return parse_cli_config(std::string(bytes.begin(), bytes.end()), path.parent_path());
  } catch (const Error& e) {
    throw e.with_context(path.string());
  }
}

std::string pipeline_json(const PipelineConfig& cfg) {
  json j{
      {"match",
       {{"similarity_threshold", cfg.match.similarity_threshold},
        {"max_points", cfg.match.max_points},
        {"use_background_negatives", cfg.match.use_background_negatives}}},
      {"candidates", cfg.candidates.values()},
      {"kernel",
       {{"shape", cfg.kernel.shape == StructuringElement::Shape::Square ? "square" : "disk"},
        {"radius", cfg.kernel.radius}}},
      {"toggles",
       {{"pruning", cfg.toggles.pruning},
        {"sparsification", cfg.toggles.sparsification.to_string()},
        {"refinement", cfg.toggles.refinement}}},
      {"min_keep", cfg.min_keep},
  };
  return j.dump(2) + "\n";
}

}  // namespace promptsparse
