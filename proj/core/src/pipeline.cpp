#include "promptsparse/pipeline.hpp"

#include <charconv>
#include <cstdio>

#include "promptsparse/geometry.hpp"
#include "promptsparse/metrics.hpp"

namespace promptsparse {

SparsifyMode SparsifyMode::parse(const std::string& text) {
  if (text == "off") return off();
  if (text == "adaptive") return adaptive();
  if (text.rfind("fixed:", 0) == 0) {
    int d = 0;
    const char* first = text.data() + 6;
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, d);
    if (ec == std::errc() && ptr == last && first != last && d >= 1) return fixed(d);
  }
  throw Error(ErrorCode::InvalidArgument,
              "sparsification must be off, adaptive or fixed:<D>, got \"" + text + "\"");
}

std::string SparsifyMode::to_string() const {
  switch (kind) {
    case Kind::Off: return "off";
    case Kind::Adaptive: return "adaptive";
    case Kind::Fixed: return "fixed:" + std::to_string(density);
  }
  return "off";
}

void PipelineConfig::validate() const {
  match.validate();
  kernel.validate();
  if (toggles.sparsification.kind == SparsifyMode::Kind::Fixed &&
      toggles.sparsification.density < 1) {
    throw Error(ErrorCode::InvalidArgument, "fixed sparsification density must be >= 1");
  }
}

const char* to_string(Stage stage) {
  switch (stage) {
    case Stage::Encode: return "encode";
    case Stage::Match: return "match";
    case Stage::Project: return "project";
    case Stage::Prune: return "prune";
    case Stage::Lookup: return "lookup";
    case Stage::Sparsify: return "sparsify";
    case Stage::Segment: return "segment";
    case Stage::Refine: return "refine";
  }
  return "unknown";
}

namespace {

template <typename F>
auto staged(Stage stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw e.with_context(std::string("stage ") + to_string(stage));
  }
}

}  // namespace

EpisodeResult run_episode(const Episode& ep, const PipelineConfig& cfg, const EncoderBackend& enc,
                          const SegmenterBackend& seg) {
  ep.validate();
  cfg.validate();
  EpisodeResult result;
  Trace& trace = result.trace;

  const FeatureMap f_tgt = staged(Stage::Encode, [&] { return enc.encode(ep.target); });
  std::vector<FeatureMap> f_refs;
  f_refs.reserve(ep.references.size());
  for (const auto& r : ep.references) {
    f_refs.push_back(staged(Stage::Encode, [&] { return enc.encode(r.image); }));
  }
  trace.stages.push_back({Stage::Encode, ep.references.size() + 1});

  // K-shot: union of the per-reference matches, first occurrence wins.
  const PointSet matched = staged(Stage::Match, [&] {
    std::vector<Point> all;
    for (std::size_t k = 0; k < ep.references.size(); ++k) {
      try {
        const auto m = match_points(f_refs[k], ep.references[k].mask, f_tgt, cfg.match);
        all.insert(all.end(), m.begin(), m.end());
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoCandidatePoints) {
          throw e.with_context("reference " + std::to_string(k));
        }
      }
    }
    if (all.empty()) {
      throw Error(ErrorCode::NoCandidatePoints, "no candidate points");
    }
    return PointSet::deduplicated(std::move(all),
                                  PointSpace::feature_grid(f_tgt.grid_h(), f_tgt.grid_w()));
  });
  trace.n_matched = matched.size();
  trace.stages.push_back({Stage::Match, matched.size()});

  PointSet points = staged(Stage::Project, [&] {
    return project_to_image(matched, ep.target.height(), ep.target.width());
  });
  trace.stages.push_back({Stage::Project, points.size()});

  if (cfg.toggles.pruning) {
    points = staged(Stage::Prune, [&] { return prune_boundary(points, cfg.min_keep); });
    trace.stages.push_back({Stage::Prune, points.size()});
  }
  trace.n_pruned = points.size();

  std::optional<int> density;
  switch (cfg.toggles.sparsification.kind) {
    case SparsifyMode::Kind::Off:
      break;
    case SparsifyMode::Kind::Fixed:
      density = cfg.toggles.sparsification.density;
      break;
    case SparsifyMode::Kind::Adaptive:
      result.verdict = staged(Stage::Lookup, [&] {
        return lookup_reference_density(ep.references, cfg.candidates, seg);
      });
      density = result.verdict->selected;
      trace.stages.push_back({Stage::Lookup, static_cast<std::size_t>(*density)});
      break;
  }
  trace.selected_density = density;

  if (density) {
    points = staged(Stage::Sparsify, [&] { return sparsify(points, *density); });
    trace.stages.push_back({Stage::Sparsify, points.size()});
  }
  trace.n_sparse = points.size();

  BinaryMask mask = staged(Stage::Segment, [&] { return seg.segment(ep.target, points); });
  trace.stages.push_back({Stage::Segment, mask.count()});

  if (cfg.toggles.refinement) {
    mask = refine_mask(mask, cfg.kernel);
    trace.stages.push_back({Stage::Refine, mask.count()});
  }

  if (ep.target_gt) result.iou_vs_gt = iou(mask, *ep.target_gt);
  result.mask = std::move(mask);
  result.prompts = std::move(points);
  return result;
}

double point_accuracy(const PointSet& points, const BinaryMask& gt) {
  if (points.empty()) {
    throw Error(ErrorCode::InvalidArgument, "point_accuracy: empty point set");
  }
  std::size_t inside = 0;
  for (const auto& p : points) inside += point_in_mask(p, gt) ? 1 : 0;
  return static_cast<double>(inside) / static_cast<double>(points.size());
}

std::vector<DensityStudyRow> density_sensitivity_study(const Image& image, const BinaryMask& gt,
                                                       const DensityCandidates& densities,
                                                       const SegmenterBackend& seg) {
  if (gt.width() != image.width() || gt.height() != image.height()) {
    throw Error(ErrorCode::DimensionMismatch, "density study: mask does not match image");
  }
  std::vector<DensityStudyRow> rows;
  for (const int d : densities.values()) {
    const auto prompts = filter_foreground(sample_reference_grid(image.height(), image.width(), d), gt);
    DensityStudyRow row{d, prompts.size(), 0.0};
    if (!prompts.empty()) {
      try {
        row.iou = iou(seg.segment(image, prompts), gt);
      } catch (const Error& e) {
        throw e.with_context("density " + std::to_string(d));
      }
    }
    rows.push_back(row);
  }
  return rows;
}

std::string density_study_csv(const std::vector<DensityStudyRow>& rows) {
  std::string out = "density,n_prompts,iou\n";
  char buf[64];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%zu,%.6f\n", r.density, r.n_prompts, r.iou);
    out += buf;
  }
  return out;
}

}  // namespace promptsparse
