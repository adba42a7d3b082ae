#include "signforge/dataio/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "signforge/numcore/rng.hpp"
#include "signforge/util/error.hpp"

namespace signforge::dataio {

using numcore::Rng;
using numcore::Tensor;
using numcore::mix_seed;

namespace {

struct Rgb {
  double r, g, b;
};

// Golden-ratio hue walk keeps colors far apart for any class count.
Rgb class_color(std::size_t cls) {
  double hue = std::fmod(0.61803398875 * static_cast<double>(cls) + 0.12, 1.0) * 360.0;
  double s = 0.85, v = 0.9;
  double c = v * s;
  double x = c * (1.0 - std::abs(std::fmod(hue / 60.0, 2.0) - 1.0));
  double m = v - c;
  double r = 0, g = 0, b = 0;
  if (hue < 60) { r = c; g = x; }
  else if (hue < 120) { r = x; g = c; }
  else if (hue < 180) { g = c; b = x; }
  else if (hue < 240) { g = x; b = c; }
  else if (hue < 300) { r = x; b = c; }
  else { r = c; b = x; }
  return {r + m, g + m, b + m};
}

bool inside_glyph(std::size_t shape, double dy, double dx, double radius) {
  double ay = std::abs(dy), ax = std::abs(dx);
  double rr = dy * dy + dx * dx;
  switch (shape % 6) {
    case 0: return rr <= radius * radius;                          // disk
    case 1: return std::max(ay, ax) <= radius * 0.8;               // square
    case 2:                                                        // triangle
      return dy >= -radius && dy <= radius * 0.7 && ax <= (dy + radius) * 0.55;
    case 3:                                                        // ring
      return rr <= radius * radius && rr >= radius * radius * 0.3;
    case 4:                                                        // plus
      return std::max(ay, ax) <= radius && std::min(ay, ax) <= radius * 0.35;
    default:                                                       // diamond
      return ay + ax <= radius * 1.1;
  }
}

LabeledImage make_sample(std::size_t cls, std::size_t index, std::uint64_t seed) {
  Rng rng(mix_seed(mix_seed(seed, 0x53594e + cls), index));
  Rgb color = class_color(cls);

  double base = 0.3 + rng.uniform(-0.08, 0.08);
  double cy = 15.5 + rng.uniform(-3.0, 3.0);
  double cx = 15.5 + rng.uniform(-3.0, 3.0);
  double radius = 9.0 + rng.uniform(-1.5, 1.5);
  double brightness = 0.85 + rng.uniform(0.0, 0.15);

  LabeledImage img;
  img.pixels = Tensor({kImageHeight, kImageWidth, kImageChannels});
  img.label = cls;
  img.origin = SampleOrigin::Synthetic;
  img.source_id = "syn:c" + std::to_string(cls) + ":s" + std::to_string(index);

  for (std::size_t y = 0; y < kImageHeight; ++y) {
    for (std::size_t x = 0; x < kImageWidth; ++x) {
      double noise = rng.uniform(-0.08, 0.08);
      double px[3] = {base + noise, base + noise, base + noise};
      if (inside_glyph(cls, double(y) - cy, double(x) - cx, radius)) {
        px[0] = color.r * brightness;
        px[1] = color.g * brightness;
        px[2] = color.b * brightness;
      }
      for (std::size_t ch = 0; ch < 3; ++ch) {
        img.pixels(y, x, ch) = std::clamp(px[ch], 0.0, 1.0);
      }
    }
  }
  return img;
}

}  // namespace

std::pair<Dataset, Dataset> generate_synthetic(std::size_t num_classes, std::size_t per_class,
                                               std::uint64_t seed) {
  if (num_classes < 2 || num_classes > 43) {
    throw ParamError("synthetic num_classes must be in [2, 43]");
  }
  if (per_class < 5) throw ParamError("synthetic per_class must be >= 5");

  Dataset train, test;
  train.split = Split::Train;
  test.split = Split::Test;
  train.num_classes = test.num_classes = num_classes;

  std::size_t test_count = per_class / 5;  // 80/20
  std::size_t train_count = per_class - test_count;

  for (std::size_t cls = 0; cls < num_classes; ++cls) {
    // seeded thinning factor creates the class imbalance
    Rng imbalance_rng(mix_seed(seed, 0x494d42 + cls));
    double factor = cls == 0 ? 1.0 : imbalance_rng.uniform(0.3, 1.0);
    auto kept = std::max<std::size_t>(
        3, static_cast<std::size_t>(std::llround(factor * double(train_count))));
    kept = std::min(kept, train_count);

    for (std::size_t i = 0; i < kept; ++i) train.samples.push_back(make_sample(cls, i, seed));
    for (std::size_t i = train_count; i < per_class; ++i) {
      test.samples.push_back(make_sample(cls, i, seed));
    }
  }
  return {std::move(train), std::move(test)};
}

}  // namespace signforge::dataio
