#include "promptsparse/image_io.hpp"

#include <png.h>
#include <unistd.h>

#include <atomic>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <system_error>

namespace promptsparse {

namespace {

struct PngImage {
  png_image img{};

  PngImage() {
    img.version = PNG_IMAGE_VERSION;
  }
  ~PngImage() { png_image_free(&img); }
  PngImage(const PngImage&) = delete;
  PngImage& operator=(const PngImage&) = delete;
};

}  // namespace

Image decode_png(std::span<const std::uint8_t> bytes) {
  PngImage png;
  if (!png_image_begin_read_from_memory(&png.img, bytes.data(), bytes.size())) {
    throw Error(ErrorCode::Decode, std::string("png: ") + png.img.message);
  }
  const bool color = (png.img.format & PNG_FORMAT_FLAG_COLOR) != 0;
  png.img.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const int channels = color ? 3 : 1;
  const int width = static_cast<int>(png.img.width);
  const int height = static_cast<int>(png.img.height);
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::Decode, "png: empty image");
  }
  std::vector<std::uint8_t> data(PNG_IMAGE_SIZE(png.img));
  png_color black{0, 0, 0};
  if (!png_image_finish_read(&png.img, &black, data.data(), 0, nullptr)) {
    throw Error(ErrorCode::Decode, std::string("png: ") + png.img.message);
  }
  return Image(width, height, channels, std::move(data));
}

std::vector<std::uint8_t> encode_png(const Image& image) {
  PngImage png;
  png.img.width = static_cast<png_uint_32>(image.width());
  png.img.height = static_cast<png_uint_32>(image.height());
  png.img.format = image.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;

  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&png.img, nullptr, &size, 0, image.data().data(), 0,
                                 nullptr)) {
    throw Error(ErrorCode::Io, std::string("png encode: ") + png.img.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&png.img, out.data(), &size, 0, image.data().data(), 0,
                                 nullptr)) {
    throw Error(ErrorCode::Io, std::string("png encode: ") + png.img.message);
  }
  out.resize(size);
  return out;
}

Image read_image(const std::filesystem::path& path) {
  try {
    return decode_png(read_file(path));
  } catch (const Error& e) {
    throw e.with_context(path.string());
  }
}

void write_image(const std::filesystem::path& path, const Image& image) {
  write_file_atomic(path, encode_png(image));
}

BinaryMask decode_mask_png(std::span<const std::uint8_t> bytes) {
  const Image img = decode_png(bytes);
  std::vector<std::uint8_t> data(static_cast<std::size_t>(img.width()) * img.height());
  const auto src = img.data();
  const auto c = static_cast<std::size_t>(img.channels());
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::uint8_t any = 0;
    for (std::size_t k = 0; k < c; ++k) any |= src[i * c + k];
    data[i] = any ? 1 : 0;
  }
  return BinaryMask(img.width(), img.height(), std::move(data));
}

Image mask_to_image(const BinaryMask& mask) {
  std::vector<std::uint8_t> data(mask.size());
  const auto src = mask.data();
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = src[i] ? 255 : 0;
  return Image(mask.width(), mask.height(), 1, std::move(data));
}

std::vector<std::uint8_t> encode_mask_png(const BinaryMask& mask) {
  return encode_png(mask_to_image(mask));
}

BinaryMask read_mask(const std::filesystem::path& path) {
  try {
    return decode_mask_png(read_file(path));
  } catch (const Error& e) {
    throw e.with_context(path.string());
  }
}

void write_mask(const std::filesystem::path& path, const BinaryMask& mask) {
  write_file_atomic(path, encode_mask_png(mask));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot open " + path.string());
  }
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  static std::atomic<unsigned> counter{0};
  auto tmp = path;
  tmp += ".tmp" + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      throw Error(ErrorCode::Io, "short write to " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::Io, "cannot rename into " + path.string());
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
  write_file_atomic(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                                    text.size()));
}

}  // namespace promptsparse
