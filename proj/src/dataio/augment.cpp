#include "signforge/dataio/augment.hpp"

#include <algorithm>
#include <cmath>

#include "signforge/util/error.hpp"

namespace signforge::dataio {

using numcore::Rng;
using numcore::Tensor;

AffineTransform AffineTransform::from_points(
    const std::array<std::pair<double, double>, 3>& src,
    const std::array<std::pair<double, double>, 3>& dst) {
  // A * (src_i - src_0) = dst_i - dst_0 for i in {1,2}; solve the 2x2 system
  double ux = src[1].first - src[0].first, uy = src[1].second - src[0].second;
  double vx = src[2].first - src[0].first, vy = src[2].second - src[0].second;
  double det = ux * vy - vx * uy;
  if (std::abs(det) <= 1e-9) throw ParamError("degenerate source triangle");

  double pu_x = dst[1].first - dst[0].first, pu_y = dst[1].second - dst[0].second;
  double pv_x = dst[2].first - dst[0].first, pv_y = dst[2].second - dst[0].second;

  AffineTransform m;
  m.a00 = (pu_x * vy - pv_x * uy) / det;
  m.a01 = (pv_x * ux - pu_x * vx) / det;
  m.a10 = (pu_y * vy - pv_y * uy) / det;
  m.a11 = (pv_y * ux - pu_y * vx) / det;
  m.b0 = dst[0].first - (m.a00 * src[0].first + m.a01 * src[0].second);
  m.b1 = dst[0].second - (m.a10 * src[0].first + m.a11 * src[0].second);
  return m;
}

AffineTransform AffineTransform::inverse() const {
  double d = det();
  if (std::abs(d) <= 1e-6) throw ParamError("affine transform is not invertible");
  AffineTransform inv;
  inv.a00 = a11 / d;
  inv.a01 = -a01 / d;
  inv.a10 = -a10 / d;
  inv.a11 = a00 / d;
  inv.b0 = -(inv.a00 * b0 + inv.a01 * b1);
  inv.b1 = -(inv.a10 * b0 + inv.a11 * b1);
  return inv;
}

Tensor warp_affine(const Tensor& image, const AffineTransform& m) {
  const std::size_t h = image.dim(0), w = image.dim(1), c = image.dim(2);
  AffineTransform inv = m.inverse();
  Tensor out({h, w, c});

  auto sample = [&](long yi, long xi, std::size_t ch) -> double {
    if (yi < 0 || xi < 0 || yi >= long(h) || xi >= long(w)) return 0.0;
    return image(std::size_t(yi), std::size_t(xi), ch);
  };

  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      auto [sx, sy] = inv.apply(double(x), double(y));
      double fx = std::floor(sx), fy = std::floor(sy);
      double wx = sx - fx, wy = sy - fy;
      long x0 = long(fx), y0 = long(fy);
      for (std::size_t ch = 0; ch < c; ++ch) {
        double v00 = sample(y0, x0, ch);
        double v01 = sample(y0, x0 + 1, ch);
        double v10 = sample(y0 + 1, x0, ch);
        double v11 = sample(y0 + 1, x0 + 1, ch);
        double top = v00 * (1.0 - wx) + v01 * wx;
        double bot = v10 * (1.0 - wx) + v11 * wx;
        out(y, x, ch) = std::clamp(top * (1.0 - wy) + bot * wy, 0.0, 1.0);
      }
    }
  }
  return out;
}

LabeledImage random_affine(const LabeledImage& image, Rng& rng, double max_jitter) {
  static constexpr std::array<std::pair<double, double>, 3> kBasePoints = {
      {{4.0, 4.0}, {28.0, 4.0}, {4.0, 28.0}}};

  constexpr int kMaxRedraws = 16;
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    std::array<std::pair<double, double>, 3> jittered;
    for (std::size_t i = 0; i < 3; ++i) {
      jittered[i] = {kBasePoints[i].first + rng.uniform(-max_jitter, max_jitter),
                     kBasePoints[i].second + rng.uniform(-max_jitter, max_jitter)};
    }
    AffineTransform m = AffineTransform::from_points(kBasePoints, jittered);
    if (std::abs(m.det()) <= 1e-6) continue;

    LabeledImage out;
    out.pixels = warp_affine(image.pixels, m);
    out.label = image.label;
    out.origin = SampleOrigin::Augmented;
    out.source_id = image.source_id;
    return out;
  }
  throw ParamError("random_affine: degenerate transform after bounded redraws");
}

Dataset rebalance(const Dataset& train, Rng& rng) {
  if (train.empty()) throw DataError("rebalance: empty dataset");
  auto counts = train.class_histogram();
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) {
      throw DataError("rebalance: class " + std::to_string(c) + " has no samples");
    }
  }
  double mean = double(train.size()) / double(train.num_classes);

  bool balanced = std::all_of(counts.begin(), counts.end(),
                              [&](std::size_t n) { return double(n) >= mean; });
  if (balanced) return train;

  // index snapshot per class; augmented copies are drawn from originals only
  std::vector<std::vector<std::size_t>> members(train.num_classes);
  for (std::size_t i = 0; i < train.samples.size(); ++i) {
    members[train.samples[i].label].push_back(i);
  }

  Dataset out = train;
  for (std::size_t cls = 0; cls < counts.size(); ++cls) {
    std::size_t added = 0;
    while (double(counts[cls] + added) < mean) {
      const auto& parent = train.samples[members[cls][rng.index(members[cls].size())]];
      LabeledImage copy = random_affine(parent, rng);
      copy.source_id = parent.source_id + "#aug" + std::to_string(added);
      out.samples.push_back(std::move(copy));
      ++added;
    }
  }
  return out;
}

}  // namespace signforge::dataio
