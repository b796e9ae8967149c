#include "promptsparse/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "promptsparse/image_io.hpp"
#include "promptsparse/refine.hpp"

namespace promptsparse {

namespace {

// std::*_distribution output is implementation-defined; draw straight from
// the engine so datasets are identical on every standard library.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  int integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 engine_;
};

struct ShapeClass {
  const char* name;
  std::array<int, 3> colour;
};

constexpr std::array<ShapeClass, 4> kClasses{{
    {"disk", {220, 70, 60}},
    {"square", {60, 200, 80}},
    {"ellipse", {230, 200, 60}},
    {"diamond", {200, 80, 210}},
}};

BinaryMask draw_shape(std::size_t cls, int size, Draw& draw) {
  const double c = size / 2.0;
  const double cx = c + draw.uniform(-0.06, 0.06) * size;
  const double cy = c + draw.uniform(-0.06, 0.06) * size;
  const double r = draw.uniform(0.22, 0.38) * size;
  const double r2 = draw.uniform(0.22, 0.38) * size;
  BinaryMask m(size, size);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double dx = x + 0.5 - cx;
      const double dy = y + 0.5 - cy;
      bool in = false;
      switch (cls) {
        case 0: in = dx * dx + dy * dy <= r * r; break;
        case 1: in = std::abs(dx) <= r && std::abs(dy) <= r; break;
        case 2: in = (dx * dx) / (r * r) + (dy * dy) / (r2 * r2) <= 1.0; break;
        default: in = std::abs(dx) + std::abs(dy) <= r; break;
      }
      m.set(x, y, in);
    }
  }
  // Fixed point of the default refinement.
  return refine_mask(m, StructuringElement{});
}

Image paint(const BinaryMask& m, const std::array<int, 3>& fg, Draw& draw) {
  const std::array<int, 3> bg{draw.integer(30, 70), draw.integer(40, 90), draw.integer(120, 180)};
  Image img(m.width(), m.height(), 3);
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      const auto& base = m.at(x, y) ? fg : bg;
      for (int ch = 0; ch < 3; ++ch) {
        const int v = base[ch] + draw.integer(-12, 12);
        img.at(x, y, ch) = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
      }
    }
  }
  return img;
}

std::string episode_id(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "ep%03zu", i);
  return buf;
}

}  // namespace

std::vector<LabeledEpisode> make_synthetic_episodes(const SyntheticOptions& options) {
  if (options.shots < 1 || options.size < 16) {
    throw Error(ErrorCode::InvalidArgument, "synthetic episodes need shots >= 1 and size >= 16");
  }
  Draw draw(options.seed);
  std::vector<LabeledEpisode> out;
  for (std::size_t i = 0; i < options.episodes; ++i) {
    const std::size_t cls = i % kClasses.size();
    LabeledEpisode le;
    le.id = episode_id(i);
    le.class_name = kClasses[cls].name;
    for (int k = 0; k < options.shots; ++k) {
      auto mask = draw_shape(cls, options.size, draw);
      auto image = paint(mask, kClasses[cls].colour, draw);
      le.episode.references.push_back({std::move(image), std::move(mask)});
    }
    auto gt = draw_shape(cls, options.size, draw);
    le.episode.target = paint(gt, kClasses[cls].colour, draw);
    le.episode.target_gt = std::move(gt);
    out.push_back(std::move(le));
  }
  return out;
}

std::filesystem::path write_synthetic_dataset(const std::filesystem::path& dir,
                                              const SyntheticOptions& options) {
  std::filesystem::create_directories(dir / "images");
  std::filesystem::create_directories(dir / "masks");
  Manifest manifest;
  for (const auto& le : make_synthetic_episodes(options)) {
    ManifestEntry entry;
    entry.id = le.id;
    entry.class_name = le.class_name;
    for (std::size_t k = 0; k < le.episode.references.size(); ++k) {
      const std::string stem = le.id + "_ref" + std::to_string(k) + ".png";
      const auto& r = le.episode.references[k];
      write_image(dir / "images" / stem, r.image);
      write_mask(dir / "masks" / stem, r.mask);
      entry.references.push_back({dir / "images" / stem, dir / "masks" / stem});
    }
    const std::string stem = le.id + "_target.png";
    write_image(dir / "images" / stem, le.episode.target);
    write_mask(dir / "masks" / stem, *le.episode.target_gt);
    entry.target_image = dir / "images" / stem;
    entry.target_mask = dir / "masks" / stem;
    manifest.episodes.push_back(std::move(entry));
  }
  const auto path = dir / "manifest.json";
  write_file_atomic(path, manifest_json(manifest, dir));
  return path;
}

}  // namespace promptsparse
