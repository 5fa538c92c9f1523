#include "io/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

#include "common/errors.hpp"

namespace facekit {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

std::uint8_t quantize(double v) {
  const double c = std::clamp(v, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::lround(c * 255.0));
}

void write_png_bytes(const std::string& path, int w, int h, int channels,
                     const std::vector<std::uint8_t>& bytes) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw DataError("cannot open for write: " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw DataError("png write failed: " + path);
  }
  png_init_io(png, fp.get());
  const int color = channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
  png_set_IHDR(png, info, w, h, 8, color, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y) {
    rows[y] = const_cast<png_bytep>(bytes.data() + static_cast<size_t>(y) * w * channels);
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

void read_png_bytes(const std::string& path, int& w, int& h, int& channels,
                    std::vector<std::uint8_t>& bytes) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw DataError("cannot open: " + path);
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DataError("png read failed: " + path);
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);
  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const int color = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (depth == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if ((color & PNG_COLOR_MASK_ALPHA) != 0) png_set_strip_alpha(png);
  png_read_update_info(png, info);
  channels = static_cast<int>(png_get_channels(png, info));
  w = static_cast<int>(width);
  h = static_cast<int>(height);
  bytes.resize(static_cast<size_t>(w) * h * channels);
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y) {
    rows[y] = bytes.data() + static_cast<size_t>(y) * w * channels;
  }
  png_read_image(png, rows.data());
  png_destroy_read_struct(&png, &info, nullptr);
}

}  // namespace

void write_png(const std::string& path, const Image& img) {
  require(img.channels == 1 || img.channels == 3, "write_png: need 1 or 3 channels");
  std::vector<std::uint8_t> bytes(img.size());
  for (size_t i = 0; i < img.size(); ++i) bytes[i] = quantize(img.data[i]);
  write_png_bytes(path, img.width, img.height, img.channels, bytes);
}

void write_label_png(const std::string& path, const LabelImage& img) {
  std::vector<std::uint8_t> bytes(img.data.begin(), img.data.end());
  write_png_bytes(path, img.width, img.height, 1, bytes);
}

Image read_png(const std::string& path) {
  int w = 0, h = 0, ch = 0;
  std::vector<std::uint8_t> bytes;
  read_png_bytes(path, w, h, ch, bytes);
  Image img(w, h, ch);
  for (size_t i = 0; i < bytes.size(); ++i) img.data[i] = bytes[i] / 255.0;
  return img;
}

LabelImage read_label_png(const std::string& path) {
  int w = 0, h = 0, ch = 0;
  std::vector<std::uint8_t> bytes;
  read_png_bytes(path, w, h, ch, bytes);
  if (ch != 1) throw DataError("label png must be single channel: " + path);
  LabelImage img(w, h);
  img.data.assign(bytes.begin(), bytes.end());
  return img;
}

void write_pfm(const std::string& path, const Image& img) {
  require(img.channels == 1 || img.channels == 3, "write_pfm: need 1 or 3 channels");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open for write: " + path);
  os << (img.channels == 3 ? "PF" : "Pf") << "\n"
     << img.width << " " << img.height << "\n"
     << "-1.0\n";
  std::vector<float> row(static_cast<size_t>(img.width) * img.channels);
  for (int y = img.height - 1; y >= 0; --y) {
    const double* src = img.data.data() + static_cast<size_t>(y) * img.width * img.channels;
    for (size_t i = 0; i < row.size(); ++i) row[i] = static_cast<float>(src[i]);
    os.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
  if (!os) throw DataError("pfm write failed: " + path);
}

Image read_pfm(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open: " + path);
  std::string magic;
  int w = 0, h = 0;
  double scale = 0.0;
  is >> magic >> w >> h >> scale;
  if (magic != "PF" && magic != "Pf") throw DataError("not a pfm file: " + path);
  if (scale >= 0.0) throw DataError("big-endian pfm unsupported: " + path);
  is.get();  // single whitespace after the header
  const int ch = magic == "PF" ? 3 : 1;
  Image img(w, h, ch);
  std::vector<float> row(static_cast<size_t>(w) * ch);
  for (int y = h - 1; y >= 0; --y) {
    is.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(float)));
    if (!is) throw DataError("truncated pfm: " + path);
    double* dst = img.data.data() + static_cast<size_t>(y) * w * ch;
    for (size_t i = 0; i < row.size(); ++i) dst[i] = row[i];
  }
  return img;
}

}  // namespace facekit
