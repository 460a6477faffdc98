#include "support/fixture.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <vector>

#include "hedseg/image_io.hpp"

namespace fs = std::filesystem;

namespace hedseg::testfix {

namespace {

uint8_t clamp_channel(double v) {
  return static_cast<uint8_t>(std::clamp(v, 0.0, 255.0));
}

Rgb shade(const Rgb& base, double dr, double dg, double db) {
  return {clamp_channel(base.r + dr), clamp_channel(base.g + dg), clamp_channel(base.b + db)};
}

}  // namespace

FixtureImage make_fixture_image(int index, int width, int height, uint64_t seed) {
  Rng rng(seed + static_cast<uint64_t>(index) * 7919);

  const double noise = 0.6 + 0.2 * (index % 3);
  const Rgb background{clamp_channel(150.0 + rng.next_range(-15, 15)),
                       clamp_channel(160.0 + rng.next_range(-15, 15)),
                       clamp_channel(170.0 + rng.next_range(-15, 15))};

  // One compact dark rectangle with a slight radial shading; the contrast to
  // the background is strong enough to sever the boundary affinities.
  const int obj_w = 5 + index % 2;
  const int obj_h = 6 + index % 3;
  const int obj_x = 2 + static_cast<int>(rng.next_below(width - obj_w - 4));
  const int obj_y = 2 + static_cast<int>(rng.next_below(height - obj_h - 4));
  const double obj_cx = obj_x + obj_w / 2.0;
  const double obj_cy = obj_y + obj_h / 2.0;
  const Rgb object{clamp_channel(40.0 + rng.next_range(-10, 10)),
                   clamp_channel(55.0 + rng.next_range(-10, 10)),
                   clamp_channel(75.0 + rng.next_range(-10, 10))};

  // Two mild background rectangles give the background its own coarse
  // substructure without severing it from the base region.
  struct Patch {
    int x, y, w, h;
    Rgb color;
  };
  std::vector<Patch> patches;
  for (int p = 0; p < 2; ++p) {
    const int pw = width / 4 + static_cast<int>(rng.next_below(width / 4));
    const int ph = height / 4 + static_cast<int>(rng.next_below(height / 4));
    patches.push_back({static_cast<int>(rng.next_below(width - pw)),
                       static_cast<int>(rng.next_below(height - ph)), pw, ph,
                       shade(background, 18.0 + 5.0 * p, -16.0, 11.0 - 4.0 * p)});
  }

  RgbImage image(width, height);
  BinaryMask gt(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      Rgb color = background;
      for (const Patch& patch : patches)
        if (x >= patch.x && x < patch.x + patch.w && y >= patch.y && y < patch.y + patch.h)
          color = patch.color;
      if (x >= obj_x && x < obj_x + obj_w && y >= obj_y && y < obj_y + obj_h) {
        gt.set(x, y, true);
        const double r2 = (x - obj_cx) * (x - obj_cx) + (y - obj_cy) * (y - obj_cy);
        color = shade(object, 0.3 * r2, 0.3 * r2, 0.3 * r2);
      }
      const auto jitter = [&]() { return noise * (2.0 * rng.next_u01() - 1.0); };
      image.at(x, y) = shade(color, jitter(), jitter(), jitter());
    }
  }
  return {std::move(image), std::move(gt)};
}

BinaryMask dilate(const BinaryMask& mask) {
  BinaryMask out(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x) {
      bool any = false;
      for (int dy = -1; dy <= 1 && !any; ++dy)
        for (int dx = -1; dx <= 1 && !any; ++dx) {
          const int nx = x + dx, ny = y + dy;
          if (nx >= 0 && nx < mask.width() && ny >= 0 && ny < mask.height() && mask.at(nx, ny))
            any = true;
        }
      out.set(x, y, any);
    }
  return out;
}

BinaryMask erode(const BinaryMask& mask) {
  BinaryMask out(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x) {
      bool all = true;
      for (int dy = -1; dy <= 1 && all; ++dy)
        for (int dx = -1; dx <= 1 && all; ++dx) {
          const int nx = x + dx, ny = y + dy;
          if (nx < 0 || nx >= mask.width() || ny < 0 || ny >= mask.height() || !mask.at(nx, ny))
            all = false;
        }
      out.set(x, y, all);
    }
  return out;
}

std::vector<double> fixture_c_grid() {
  return {9e4, 9e3, 900.0, 90.0, 9.0, 3.0, 0.9, 0.3, 0.09, 0.03};
}

double fixture_operating_c() { return 0.09; }

void write_fixture_dataset(const std::string& root, const FixtureSpec& spec) {
  for (int i = 0; i < spec.images; ++i) {
    char id[32];
    std::snprintf(id, sizeof(id), "img_%02d", i);
    const fs::path dir = fs::path(root) / id;
    fs::create_directories(dir / "src_color");
    fs::create_directories(dir / "human_seg");

    const FixtureImage fixture = make_fixture_image(i, spec.width, spec.height, spec.seed);
    save_png((dir / "src_color" / (std::string(id) + ".png")).string(), fixture.image);
    save_png_mask((dir / "human_seg" / "gt_0.png").string(), fixture.gt);
    save_png_mask((dir / "human_seg" / "gt_1.png").string(), dilate(fixture.gt));
    save_png_mask((dir / "human_seg" / "gt_2.png").string(), erode(fixture.gt));
  }
}

}  // namespace hedseg::testfix
