#pragma once

#include <array>
#include <utility>

#include "signforge/dataio/dataset.hpp"
#include "signforge/numcore/rng.hpp"

namespace signforge::dataio {

/// 2x3 affine map [A | B] acting on (x, y) column vectors.
struct AffineTransform {
  double a00 = 1.0, a01 = 0.0, b0 = 0.0;
  double a10 = 0.0, a11 = 1.0, b1 = 0.0;

  static AffineTransform identity() { return {}; }

  /// Least-squares-free exact solve from three point correspondences.
  /// Throws ParamError when the source triangle is degenerate.
  static AffineTransform from_points(const std::array<std::pair<double, double>, 3>& src,
                                     const std::array<std::pair<double, double>, 3>& dst);

  double det() const { return a00 * a11 - a01 * a10; }

  /// Throws ParamError when |det| <= 1e-6.
  AffineTransform inverse() const;

  std::pair<double, double> apply(double x, double y) const {
    return {a00 * x + a01 * y + b0, a10 * x + a11 * y + b1};
  }
};

/// Inverse-mapped warp with bilinear sampling; out-of-bounds reads are zero,
/// results clamped to [0,1]. Exact pass-through for the identity transform.
numcore::Tensor warp_affine(const numcore::Tensor& image, const AffineTransform& m);

/// Jitters the three base points (4,4), (28,4), (4,28) by up to
/// +-max_jitter px, builds the affine map, and warps. Degenerate draws are
/// redrawn a bounded number of times. Output is tagged origin=Augmented.
LabeledImage random_affine(const LabeledImage& image, numcore::Rng& rng,
                           double max_jitter = 2.0);

/// Pads every class below the mean count with random_affine copies of
/// uniformly drawn members until it reaches the mean. Original samples are
/// never dropped; an already-balanced set is returned unchanged.
Dataset rebalance(const Dataset& train, numcore::Rng& rng);

}  // namespace signforge::dataio
