#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "hedseg/pixelgraph.hpp"

namespace hedseg {

namespace {

constexpr double kPi = 3.14159265358979323846;

int clamp_coord(int v, int hi) { return std::clamp(v, 0, hi - 1); }

std::vector<double> luminance(const RgbImage& img) {
  std::vector<double> lum(img.pixel_count());
  const auto& px = img.pixels();
  for (size_t i = 0; i < px.size(); ++i)
    lum[i] = 0.299 * px[i].r + 0.587 * px[i].g + 0.114 * px[i].b;
  return lum;
}

// Separable 5-tap Gaussian, borders replicated.
std::vector<double> gaussian_blur5(const std::vector<double>& src, int w, int h, double sigma) {
  std::array<double, 5> k;
  double sum = 0.0;
  for (int i = -2; i <= 2; ++i) {
    k[i + 2] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    sum += k[i + 2];
  }
  for (double& v : k) v /= sum;

  std::vector<double> tmp(src.size()), out(src.size());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -2; i <= 2; ++i) acc += k[i + 2] * src[y * w + clamp_coord(x + i, w)];
      tmp[y * w + x] = acc;
    }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -2; i <= 2; ++i) acc += k[i + 2] * tmp[clamp_coord(y + i, h) * w + x];
      out[y * w + x] = acc;
    }
  return out;
}

}  // namespace

EdgeMap compute_edge_map(const RgbImage& img, const GraphParams& params) {
  params.validate();
  const int w = img.width(), h = img.height();
  EdgeMap map(w, h, 0.0);
  if (w < 3 || h < 3) return map;  // too small for a 3x3 gradient

  const std::vector<double> smooth = gaussian_blur5(luminance(img), w, h, params.blur_sigma);

  // Sobel gradient, replicated borders.
  std::vector<double> mag(smooth.size(), 0.0), dir(smooth.size(), 0.0);
  const auto at = [&](int x, int y) { return smooth[clamp_coord(y, h) * w + clamp_coord(x, w)]; };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double gx = (at(x + 1, y - 1) + 2.0 * at(x + 1, y) + at(x + 1, y + 1)) -
                        (at(x - 1, y - 1) + 2.0 * at(x - 1, y) + at(x - 1, y + 1));
      const double gy = (at(x - 1, y + 1) + 2.0 * at(x, y + 1) + at(x + 1, y + 1)) -
                        (at(x - 1, y - 1) + 2.0 * at(x, y - 1) + at(x + 1, y - 1));
      mag[y * w + x] = std::sqrt(gx * gx + gy * gy);
      dir[y * w + x] = std::atan2(gy, gx);
    }
  }

  // Non-maximum suppression along the quantized gradient direction.
  std::vector<double> thin(smooth.size(), 0.0);
  static constexpr int kStep[4][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double m = mag[y * w + x];
      if (m == 0.0) continue;
      double angle = dir[y * w + x];
      if (angle < 0.0) angle += kPi;
      const int bucket = static_cast<int>(std::floor((angle + kPi / 8.0) / (kPi / 4.0))) % 4;
      const int dx = kStep[bucket][0], dy = kStep[bucket][1];
      const double m1 = mag[clamp_coord(y + dy, h) * w + clamp_coord(x + dx, w)];
      const double m2 = mag[clamp_coord(y - dy, h) * w + clamp_coord(x - dx, w)];
      if (m >= m1 && m >= m2) thin[y * w + x] = m;
    }
  }

  // Hysteresis: keep strong pixels and weak pixels 8-connected to them.
  std::vector<uint8_t> state(smooth.size(), 0);  // 0 none, 1 weak, 2 strong
  std::vector<size_t> stack;
  for (size_t i = 0; i < thin.size(); ++i) {
    if (thin[i] >= params.canny_high) {
      state[i] = 2;
      stack.push_back(i);
    } else if (thin[i] >= params.canny_low) {
      state[i] = 1;
    }
  }
  while (!stack.empty()) {
    const size_t i = stack.back();
    stack.pop_back();
    const int x = static_cast<int>(i % w), y = static_cast<int>(i / w);
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = x + dx, ny = y + dy;
        if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
        const size_t j = static_cast<size_t>(ny) * w + nx;
        if (state[j] == 1) {
          state[j] = 2;
          stack.push_back(j);
        }
      }
  }

  // Binary response; dividing by the maximum is an identity here and an
  // all-zero map stays all-zero.
  for (size_t i = 0; i < state.size(); ++i)
    if (state[i] == 2) map.at(static_cast<int>(i % w), static_cast<int>(i / w)) = 1.0;
  return map;
}

}  // namespace hedseg
