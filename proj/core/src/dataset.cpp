#include "promptsparse/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <thread>

#include "json.hpp"
#include "promptsparse/image_io.hpp"

namespace promptsparse {

using nlohmann::json;

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::string relative_to(const std::filesystem::path& p, const std::filesystem::path& base) {
  const auto rel = p.lexically_relative(base);
  if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
  return p.generic_string();
}

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

Manifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir) {
  const json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("episodes") ||
      !j["episodes"].is_array()) {
    throw Error(ErrorCode::Decode, "manifest must be an object with an \"episodes\" array");
  }
  Manifest m;
  std::size_t index = 0;
  for (const auto& e : j["episodes"]) {
    const std::string where = "manifest episode " + std::to_string(index++);
    try {
      ManifestEntry entry;
      entry.id = e.at("id").get<std::string>();
      entry.class_name = e.contains("class") && !e["class"].is_null()
                             ? e["class"].get<std::string>()
                             : std::string();
      for (const auto& r : e.at("references")) {
        entry.references.push_back({resolve(base_dir, r.at("image").get<std::string>()),
                                    resolve(base_dir, r.at("mask").get<std::string>())});
      }
      if (entry.references.empty()) {
        throw Error(ErrorCode::Decode, where + ": no references");
      }
      const auto& t = e.at("target");
      entry.target_image = resolve(base_dir, t.at("image").get<std::string>());
      if (t.contains("mask") && !t["mask"].is_null()) {
        entry.target_mask = resolve(base_dir, t["mask"].get<std::string>());
      }
      m.episodes.push_back(std::move(entry));
    } catch (const json::exception& ex) {
      throw Error(ErrorCode::Decode, where + ": " + ex.what());
    }
  }
  return m;
}

Manifest load_manifest(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  try {
    return parse_manifest(std::string(bytes.begin(), bytes.end()), path.parent_path());
  } catch (const Error& e) {
    throw e.with_context(path.string());
  }
}

std::string manifest_json(const Manifest& manifest, const std::filesystem::path& base_dir) {
  json episodes = json::array();
  for (const auto& e : manifest.episodes) {
    json refs = json::array();
    for (const auto& r : e.references) {
      refs.push_back({{"image", relative_to(r.image, base_dir)},
                      {"mask", relative_to(r.mask, base_dir)}});
    }
    json target{{"image", relative_to(e.target_image, base_dir)}, {"mask", nullptr}};
    if (e.target_mask) target["mask"] = relative_to(*e.target_mask, base_dir);
    episodes.push_back(
        {{"id", e.id}, {"class", e.class_name}, {"references", refs}, {"target", target}});
  }
  return json{{"episodes", episodes}}.dump(2) + "\n";
}

Episode load_episode(const ManifestEntry& entry) {
  Episode ep;
  for (const auto& r : entry.references) {
    ep.references.push_back({read_image(r.image), read_mask(r.mask)});
  }
  ep.target = read_image(entry.target_image);
  if (entry.target_mask) ep.target_gt = read_mask(*entry.target_mask);
  ep.validate();
  return ep;
}

std::vector<EpisodeOutcome> run_episodes(const std::vector<LabeledEpisode>& episodes,
                                         const PipelineConfig& cfg, const EncoderBackend& enc,
                                         const SegmenterBackend& seg, std::size_t jobs) {
  std::vector<EpisodeOutcome> outcomes(episodes.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < episodes.size(); i = next++) {
      auto& out = outcomes[i];
      out.id = episodes[i].id;
      out.class_name = episodes[i].class_name;
      try {
        out.result = run_episode(episodes[i].episode, cfg, enc, seg);
      } catch (const Error& e) {
        out.error = std::string(to_string(e.code())) + ": " + e.what();
      } catch (const std::exception& e) {
        out.error = e.what();
      }
    }
  };
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(episodes.size(), 1));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  std::stable_sort(outcomes.begin(), outcomes.end(),
                   [](const EpisodeOutcome& a, const EpisodeOutcome& b) { return a.id < b.id; });
  return outcomes;
}

DatasetReport summarize(std::vector<EpisodeOutcome> outcomes) {
  DatasetReport report;
  std::map<std::string, double> sums;
  double total = 0.0;
  for (const auto& o : outcomes) {
    double v = 0.0;
    if (o.result && o.result->iou_vs_gt) {
      v = *o.result->iou_vs_gt;
    } else {
      ++report.failures;
    }
    sums[o.class_name] += v;
    ++report.class_count[o.class_name];
    total += v;
  }
  for (const auto& [cls, sum] : sums) {
    report.class_miou[cls] = 100.0 * sum / static_cast<double>(report.class_count[cls]);
  }
  report.miou = outcomes.empty() ? 0.0 : 100.0 * total / static_cast<double>(outcomes.size());
  report.outcomes = std::move(outcomes);
  return report;
}

DatasetReport evaluate_dataset(const std::vector<LabeledEpisode>& episodes,
                               const PipelineConfig& cfg, const EncoderBackend& enc,
                               const SegmenterBackend& seg, std::size_t jobs) {
  std::string missing;
  for (const auto& e : episodes) {
    if (!e.episode.target_gt) missing += (missing.empty() ? "" : ", ") + e.id;
  }
  if (!missing.empty()) {
    throw Error(ErrorCode::InvalidArgument, "episodes without target ground truth: " + missing);
  }
  return summarize(run_episodes(episodes, cfg, enc, seg, jobs));
}

std::string results_csv(const std::vector<EpisodeOutcome>& outcomes) {
  std::string out = "episode_id,class,selected_density,n_matched,n_pruned,n_sparse,iou\n";
  for (const auto& o : outcomes) {
    out += o.id + "," + o.class_name + ",";
    if (o.result) {
      const auto& t = o.result->trace;
      out += (t.selected_density ? std::to_string(*t.selected_density) : "") + ",";
      out += std::to_string(t.n_matched) + "," + std::to_string(t.n_pruned) + "," +
             std::to_string(t.n_sparse) + ",";
      out += o.result->iou_vs_gt ? fmt6(*o.result->iou_vs_gt) : "";
    } else {
      out += ",,,,";
    }
    out += "\n";
  }
  return out;
}

std::string summary_csv(const DatasetReport& report) {
  std::string out = "class,n_episodes,miou\n";
  for (const auto& [cls, miou] : report.class_miou) {
    out += cls + "," + std::to_string(report.class_count.at(cls)) + "," + fmt6(miou) + "\n";
  }
  out += "ALL," + std::to_string(report.outcomes.size()) + "," + fmt6(report.miou) + "\n";
  return out;
}

std::string trace_json(const EpisodeOutcome& outcome) {
  json j{{"id", outcome.id}, {"class", outcome.class_name}};
  if (outcome.error) {
    j["error"] = *outcome.error;
    return j.dump(2) + "\n";
  }
  const auto& r = *outcome.result;
  json stages = json::array();
  for (const auto& s : r.trace.stages) {
    stages.push_back({{"stage", to_string(s.stage)}, {"count", s.count}});
  }
  j["stages"] = stages;
  j["n_matched"] = r.trace.n_matched;
  j["n_pruned"] = r.trace.n_pruned;
  j["n_sparse"] = r.trace.n_sparse;
  j["selected_density"] =
      r.trace.selected_density ? json(*r.trace.selected_density) : json(nullptr);
  if (r.verdict) {
    json scores = json::object();
    for (std::size_t i = 0; i < r.verdict->densities.size(); ++i) {
      scores[std::to_string(r.verdict->densities[i])] = r.verdict->scores[i];
    }
    j["verdict"] = {{"selected", r.verdict->selected},
                    {"scores", scores},
                    {"per_reference", r.verdict->per_reference}};
  }
  json prompts = json::array();
  for (const auto& p : r.prompts) prompts.push_back({p.x, p.y});
  j["prompts"] = prompts;
  j["iou"] = r.iou_vs_gt ? json(*r.iou_vs_gt) : json(nullptr);
  return j.dump(2) + "\n";
}

}  // namespace promptsparse
