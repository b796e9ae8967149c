#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "promptsparse/dataset.hpp"

namespace promptsparse {

// Colour-coded single-object episodes for desk-scale runs: every image
// holds one shape of its class colour on a dark noisy background, and every
// shape covers the image centre. Shapes are fixed points of refine_mask
// with the default structuring element.
struct SyntheticOptions {
  std::size_t episodes = 24;
  int shots = 1;
  int size = 64;
  std::uint64_t seed = 7;
};

std::vector<LabeledEpisode> make_synthetic_episodes(const SyntheticOptions& options);

// Writes images/, masks/ and manifest.json under `dir`; returns the path of
// the manifest.
std::filesystem::path write_synthetic_dataset(const std::filesystem::path& dir,
                                              const SyntheticOptions& options);

}  // namespace promptsparse
