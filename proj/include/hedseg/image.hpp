#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace hedseg {

struct Rgb {
  uint8_t r = 0;
  uint8_t g = 0;
  uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// H x W raster of 8-bit RGB triples, stored row-major. Pixel (x, y) maps to
/// node id y * width + x everywhere in this library.
class RgbImage {
 public:
  RgbImage() = default;

  RgbImage(int width, int height, Rgb fill = {})
      : width_(width), height_(height) {
    check_dims(width, height);
    pixels_.assign(static_cast<size_t>(width) * height, fill);
  }

  RgbImage(int width, int height, std::vector<Rgb> pixels)
      : width_(width), height_(height), pixels_(std::move(pixels)) {
    check_dims(width, height);
    if (pixels_.size() != static_cast<size_t>(width) * height)
      throw std::invalid_argument("RgbImage: pixel count does not match dimensions");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  size_t pixel_count() const { return pixels_.size(); }

  Rgb& at(int x, int y) { return pixels_[static_cast<size_t>(y) * width_ + x]; }
  const Rgb& at(int x, int y) const { return pixels_[static_cast<size_t>(y) * width_ + x]; }

  const std::vector<Rgb>& pixels() const { return pixels_; }

 private:
  static void check_dims(int width, int height) {
    if (width < 1 || height < 1)
      throw std::invalid_argument("RgbImage: dimensions must be at least 1x1");
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<Rgb> pixels_;
};

/// Per-pixel boundary strength in [0,1], same grid as the source image.
class EdgeMap {
 public:
  EdgeMap() = default;

  EdgeMap(int width, int height, double fill = 0.0)
      : width_(width), height_(height) {
    if (width < 1 || height < 1)
      throw std::invalid_argument("EdgeMap: dimensions must be at least 1x1");
    values_.assign(static_cast<size_t>(width) * height, fill);
  }

  int width() const { return width_; }
  int height() const { return height_; }

  double& at(int x, int y) { return values_[static_cast<size_t>(y) * width_ + x]; }
  double at(int x, int y) const { return values_[static_cast<size_t>(y) * width_ + x]; }

  const std::vector<double>& values() const { return values_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

/// Row-major boolean mask; used both for ground truth and projected predictions.
class BinaryMask {
 public:
  BinaryMask() = default;

  BinaryMask(int width, int height, bool fill = false)
      : width_(width), height_(height) {
    if (width < 1 || height < 1)
      throw std::invalid_argument("BinaryMask: dimensions must be at least 1x1");
    bits_.assign(static_cast<size_t>(width) * height, fill ? 1 : 0);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  size_t size() const { return bits_.size(); }

  void set(int x, int y, bool v) { bits_[static_cast<size_t>(y) * width_ + x] = v ? 1 : 0; }
  bool at(int x, int y) const { return bits_[static_cast<size_t>(y) * width_ + x] != 0; }
  bool at(size_t idx) const { return bits_[idx] != 0; }

  /// Number of foreground pixels.
  int64_t count() const {
    int64_t n = 0;
    for (uint8_t b : bits_) n += b;
    return n;
  }

  const std::vector<uint8_t>& bits() const { return bits_; }
  std::vector<uint8_t>& bits() { return bits_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<uint8_t> bits_;
};

}  // namespace hedseg
