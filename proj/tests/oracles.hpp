// Independent reference implementations used only by tests. These stay
// deliberately naive (nested loops, no caching) so they cannot share bugs
// with the library code they check.
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "signforge/numcore/tensor.hpp"

namespace oracles {

using signforge::numcore::Tensor;

// Direct convolution: pad with zeros (top/left as given), then six nested
// loops over output position, kernel window, and channels.
inline Tensor direct_conv2d(const Tensor& input, const Tensor& kernel, const Tensor& bias,
                            std::size_t stride_y, std::size_t stride_x, std::size_t pad_top,
                            std::size_t pad_bottom, std::size_t pad_left,
                            std::size_t pad_right) {
  const std::size_t h = input.dim(0), w = input.dim(1), c = input.dim(2);
  const std::size_t kh = kernel.dim(0), kw = kernel.dim(1), f_count = kernel.dim(3);
  const std::size_t ph = h + pad_top + pad_bottom;
  const std::size_t pw = w + pad_left + pad_right;
  const std::size_t out_h = (ph - kh) / stride_y + 1;
  const std::size_t out_w = (pw - kw) / stride_x + 1;

  auto padded_at = [&](std::size_t y, std::size_t x, std::size_t ch) -> double {
    if (y < pad_top || x < pad_left) return 0.0;
    std::size_t iy = y - pad_top, ix = x - pad_left;
    if (iy >= h || ix >= w) return 0.0;
    return input(iy, ix, ch);
  };

  Tensor out({out_h, out_w, f_count});
  for (std::size_t oy = 0; oy < out_h; ++oy)
    for (std::size_t ox = 0; ox < out_w; ++ox)
      for (std::size_t f = 0; f < f_count; ++f) {
        double acc = bias[f];
        for (std::size_t ky = 0; ky < kh; ++ky)
          for (std::size_t kx = 0; kx < kw; ++kx)
            for (std::size_t ch = 0; ch < c; ++ch)
              acc += padded_at(oy * stride_y + ky, ox * stride_x + kx, ch) *
                     kernel(ky, kx, ch, f);
        out(oy, ox, f) = acc;
      }
  return out;
}

// Central finite difference of a scalar function with respect to one slot
// of a tensor owned by the caller.
inline double central_difference(const std::function<double()>& f, double& slot,
                                 double step = 1e-5) {
  const double saved = slot;
  slot = saved + step;
  const double up = f();
  slot = saved - step;
  const double down = f();
  slot = saved;
  return (up - down) / (2.0 * step);
}

// Relative error with an absolute floor for near-zero gradients.
inline double grad_error(double analytic, double numeric) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
  return std::abs(analytic - numeric) / denom;
}

}  // namespace oracles
