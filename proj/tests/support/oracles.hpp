#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "promptsparse/refine.hpp"
#include "promptsparse/types.hpp"

namespace promptsparse::testing {

// A point is a hull vertex iff no triangle or segment of the other points
// contains it. Exact for integer-valued coordinates.
std::vector<Point> brute_force_hull_vertices(const std::vector<Point>& pts);

// Per-cell linear scan over all points, distances to the centroid of the
// whole set, first point wins ties. Cells are visited row-major.
std::vector<Point> brute_force_sparsify(const std::vector<Point>& pts, int image_h, int image_w,
                                        int density);

// Direct pixel-by-pixel morphology: out-of-raster pixels are foreground for
// erosion and background for dilation.
BinaryMask naive_erode(const BinaryMask& m, const StructuringElement& k);
BinaryMask naive_dilate(const BinaryMask& m, const StructuringElement& k);

bool subset(const BinaryMask& a, const BinaryMask& b);

// Random masks: a few filled ellipses plus salt noise.
BinaryMask random_blob_mask(std::mt19937_64& rng, int width, int height);
// Independent coin per pixel with probability p.
BinaryMask random_noise_mask(std::mt19937_64& rng, int width, int height, double p);
// One large ellipse covering the image centre.
BinaryMask random_central_mask(std::mt19937_64& rng, int width, int height);

// Distinct integer points in [0, extent]^2.
std::vector<Point> random_integer_points(std::mt19937_64& rng, std::size_t n, int extent);

Image flat_image(int width, int height, std::uint8_t value);
// Image whose pixels encode the mask colour-wise: fg red, bg dark blue,
// optionally salted with a per-image tag so images stay distinct.
Image painted_image(const BinaryMask& m, int tag = 0);

}  // namespace promptsparse::testing
