#pragma once

#include <string>
#include <vector>

#include "hedseg/image.hpp"
#include "hedseg/rng.hpp"

namespace hedseg::testfix {

/// One synthetic benchmark image: a multi-part foreground object on a
/// textured background, plus its exact foreground mask.
struct FixtureImage {
  RgbImage image;
  BinaryMask gt;
};

/// Deterministic synthetic image. The part count and the contrast scales
/// vary with `index`, so a small set spans cohesive through fragmented
/// behavior.
FixtureImage make_fixture_image(int index, int width, int height, uint64_t seed);

/// 3x3 morphological passes used to derive annotator-style mask variants.
BinaryMask dilate(const BinaryMask& mask);
BinaryMask erode(const BinaryMask& mask);

struct FixtureSpec {
  int width = 40;
  int height = 40;
  int images = 10;
  uint64_t seed = 20240801;
};

/// Resolution grid used by the fixture protocol. The asynchronous node
/// dynamics on a 40x40 pixel graph respond to gamma in roughly [1e-3, 0.1],
/// so the grid extends below the CLI default's c = 9 to cover the full
/// cohesive-to-fragmented transition (gamma here spans ~5e-8 to ~0.05).
std::vector<double> fixture_c_grid();

/// Grid point at which the initialization-robustness comparison runs; both
/// initializations are past their freezing/cascade thresholds there.
double fixture_operating_c();

/// Writes a dataset tree compatible with the default loader patterns:
/// <root>/img_NN/src_color/img_NN.png with three masks under human_seg/.
void write_fixture_dataset(const std::string& root, const FixtureSpec& spec = {});

}  // namespace hedseg::testfix
