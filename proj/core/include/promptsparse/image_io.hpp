#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "promptsparse/types.hpp"

namespace promptsparse {

// 8-bit PNG codec. Gray+alpha and RGBA inputs are flattened to gray / RGB;
// 16-bit inputs are reduced to 8 bits. Errors: Error(Decode) / Error(Io).
Image decode_png(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_png(const Image& image);

Image read_image(const std::filesystem::path& path);
void write_image(const std::filesystem::path& path, const Image& image);

// Mask files are single-channel PNGs: 0 = background, anything else =
// foreground. Multi-channel inputs are reduced through their first channel.
BinaryMask decode_mask_png(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_mask_png(const BinaryMask& mask);

BinaryMask read_mask(const std::filesystem::path& path);
// Writes 0/255. The file appears atomically (temp file + rename).
void write_mask(const std::filesystem::path& path, const BinaryMask& mask);

Image mask_to_image(const BinaryMask& mask);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
// Writes through a sibling temp file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace promptsparse
