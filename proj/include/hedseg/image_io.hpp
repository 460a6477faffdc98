#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hedseg/image.hpp"

namespace hedseg {

/// Decodes a PNG or JPEG file (sniffed by magic bytes) into 8-bit RGB.
/// Grayscale and palette inputs are expanded; 16-bit channels are reduced.
RgbImage load_image(const std::string& path);

/// Decodes a mask image: any pixel with a nonzero channel is foreground.
BinaryMask load_mask(const std::string& path);

void save_png(const std::string& path, const RgbImage& img);

/// 16-bit grayscale PNG; used for label images.
void save_png_gray16(const std::string& path, int width, int height,
                     const std::vector<uint16_t>& values);
std::vector<uint16_t> load_png_gray16(const std::string& path, int* width, int* height);

/// 8-bit grayscale PNG with foreground = 255.
void save_png_mask(const std::string& path, const BinaryMask& mask);

}  // namespace hedseg
