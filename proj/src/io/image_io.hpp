#pragma once

#include <string>

#include "core/types.hpp"

namespace facekit {

// 8-bit PNG, clamped to [0,1] and quantized. Gray label PNGs store the raw
// label byte (0/1/2) so masks round-trip exactly.
void write_png(const std::string& path, const Image& img);
void write_label_png(const std::string& path, const LabelImage& img);
Image read_png(const std::string& path);
LabelImage read_label_png(const std::string& path);

// PFM float dumps for bit-exact comparisons. Standard convention: little
// endian (negative scale), rows bottom-to-top. 1 or 3 channels.
void write_pfm(const std::string& path, const Image& img);
Image read_pfm(const std::string& path);

}  // namespace facekit
