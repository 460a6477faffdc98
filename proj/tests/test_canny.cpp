#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "hedseg/pixelgraph.hpp"

using namespace hedseg;

namespace {

// Test-side gradient oracle: blurred luminance and a plain central-difference
// column scan, independent of the detector implementation.
int strongest_gradient_column(const RgbImage& img, double sigma) {
  const int w = img.width(), h = img.height();
  std::vector<double> lum(static_cast<size_t>(w) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const Rgb p = img.at(x, y);
      lum[y * w + x] = 0.299 * p.r + 0.587 * p.g + 0.114 * p.b;
    }
  std::vector<double> blurred(lum.size(), 0.0);
  double norm = 0.0;
  std::vector<double> k;
  for (int i = -2; i <= 2; ++i) {
    k.push_back(std::exp(-i * i / (2.0 * sigma * sigma)));
    norm += k.back();
  }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -2; i <= 2; ++i)
        acc += k[i + 2] * lum[y * w + std::clamp(x + i, 0, w - 1)];
      blurred[y * w + x] = acc / norm;
    }
  double best = -1.0;
  int best_col = 0;
  for (int x = 1; x + 1 < w; ++x) {
    const double grad = std::fabs(blurred[(h / 2) * w + (x + 1)] - blurred[(h / 2) * w + (x - 1)]);
    if (grad > best) {
      best = grad;
      best_col = x;
    }
  }
  return best_col;
}

}  // namespace

TEST_CASE("constant image has an all-zero edge map") {
  const RgbImage img(8, 8, {130, 60, 200});
  const EdgeMap map = compute_edge_map(img, GraphParams{});
  for (double v : map.values()) CHECK(v == 0.0);
}

TEST_CASE("tiny images have an all-zero edge map") {
  const EdgeMap tiny = compute_edge_map(RgbImage(1, 1, {255, 0, 0}), GraphParams{});
  CHECK(tiny.values() == std::vector<double>{0.0});
  const EdgeMap small = compute_edge_map(RgbImage(2, 2, {10, 10, 10}), GraphParams{});
  for (double v : small.values()) CHECK(v == 0.0);
}

TEST_CASE("vertical step edge fires on the step column only") {
  const int n = 8;
  RgbImage img(n, n, {0, 0, 0});
  for (int y = 0; y < n; ++y)
    for (int x = n / 2; x < n; ++x) img.at(x, y) = {255, 255, 255};

  const GraphParams params;
  const EdgeMap map = compute_edge_map(img, params);
  const int step_col = strongest_gradient_column(img, params.blur_sigma);

  bool any = false;
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      const double v = map.at(x, y);
      CHECK((v == 0.0 || v == 1.0));
      if (v > 0.0) {
        any = true;
        CHECK(std::abs(x - step_col) <= 1);  // concentrated on the step
      }
    }
  CHECK(any);
}

TEST_CASE("edge map values stay within [0,1]") {
  RgbImage img(9, 9);
  for (int y = 0; y < 9; ++y)
    for (int x = 0; x < 9; ++x)
      img.at(x, y) = {static_cast<uint8_t>(x * 28), static_cast<uint8_t>(y * 28),
                      static_cast<uint8_t>((x + y) * 14)};
  const EdgeMap map = compute_edge_map(img, GraphParams{});
  for (double v : map.values()) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("threshold precondition is enforced") {
  GraphParams p;
  p.canny_low = 150.0;
  p.canny_high = 150.0;
  CHECK_THROWS(compute_edge_map(RgbImage(4, 4), p));
}
