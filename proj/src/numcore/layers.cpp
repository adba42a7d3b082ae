#include "signforge/numcore/layers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "signforge/util/error.hpp"

namespace signforge::numcore {

const char* layer_kind_name(LayerKind kind) {
  switch (kind) {
    case LayerKind::Conv2D: return "Conv2D";
    case LayerKind::ReLU: return "ReLU";
    case LayerKind::MaxPool2D: return "MaxPool2D";
    case LayerKind::Dropout: return "Dropout";
    case LayerKind::Dense: return "Dense";
    case LayerKind::Flatten: return "Flatten";
    case LayerKind::TemperatureScale: return "TemperatureScale";
  }
  return "?";
}

LayerSpec LayerSpec::conv2d(std::size_t kh, std::size_t kw, std::size_t filters,
                            std::size_t stride, Padding padding) {
  LayerSpec s;
  s.kind = LayerKind::Conv2D;
  s.kernel_h = kh;
  s.kernel_w = kw;
  s.filters = filters;
  s.stride_y = stride;
  s.stride_x = stride;
  s.padding = padding;
  s.validate();
  return s;
}

LayerSpec LayerSpec::relu() {
  LayerSpec s;
  s.kind = LayerKind::ReLU;
  return s;
}

LayerSpec LayerSpec::max_pool(std::size_t window, std::size_t stride) {
  LayerSpec s;
  s.kind = LayerKind::MaxPool2D;
  s.pool_h = window;
  s.pool_w = window;
  s.stride_y = stride;
  s.stride_x = stride;
  s.validate();
  return s;
}

LayerSpec LayerSpec::dropout(double prob) {
  LayerSpec s;
  s.kind = LayerKind::Dropout;
  s.drop_prob = prob;
  s.validate();
  return s;
}

LayerSpec LayerSpec::dense(std::size_t units) {
  LayerSpec s;
  s.kind = LayerKind::Dense;
  s.units = units;
  s.validate();
  return s;
}

LayerSpec LayerSpec::flatten() {
  LayerSpec s;
  s.kind = LayerKind::Flatten;
  return s;
}

LayerSpec LayerSpec::temperature_scale(double t) {
  LayerSpec s;
  s.kind = LayerKind::TemperatureScale;
  s.temperature = t;
  s.validate();
  return s;
}

void LayerSpec::validate() const {
  switch (kind) {
    case LayerKind::Conv2D:
      if (kernel_h == 0 || kernel_w == 0) throw ParamError("conv kernel size must be positive");
      if (filters == 0) throw ParamError("conv filter count must be positive");
      if (stride_y < 1 || stride_x < 1) throw ParamError("conv stride must be >= 1");
      break;
    case LayerKind::MaxPool2D:
      if (pool_h == 0 || pool_w == 0) throw ParamError("pool window must be positive");
      if (stride_y < 1 || stride_x < 1) throw ParamError("pool stride must be >= 1");
      break;
    case LayerKind::Dropout:
      if (!(drop_prob >= 0.0 && drop_prob < 1.0)) {
        throw ParamError("dropout probability must be in [0,1)");
      }
      break;
    case LayerKind::Dense:
      if (units == 0) throw ParamError("dense node count must be positive");
      break;
    case LayerKind::TemperatureScale:
      if (!(temperature > 0.0)) throw ParamError("temperature must be > 0");
      break;
    default:
      break;
  }
}

std::string LayerSpec::describe() const {
  std::string s = layer_kind_name(kind);
  switch (kind) {
    case LayerKind::Conv2D:
      s += " " + std::to_string(kernel_h) + "x" + std::to_string(kernel_w) + "x" +
           std::to_string(filters) + " s" + std::to_string(stride_y) +
           (padding == Padding::SameZero ? " same" : " valid");
      break;
    case LayerKind::MaxPool2D:
      s += " " + std::to_string(pool_h) + "x" + std::to_string(pool_w) + " s" +
           std::to_string(stride_y);
      break;
    case LayerKind::Dropout:
      s += " p=" + std::to_string(drop_prob);
      break;
    case LayerKind::Dense:
      s += " " + std::to_string(units);
      break;
    case LayerKind::TemperatureScale:
      s += " T=" + std::to_string(temperature);
      break;
    default:
      break;
  }
  return s;
}

void Layer::zero_grads() {
  for (Tensor* g : grads()) g->fill(0.0);
}

std::unique_ptr<Layer> make_layer(const LayerSpec& spec,
                                  const std::vector<std::size_t>& input_shape) {
  spec.validate();
  switch (spec.kind) {
    case LayerKind::Conv2D: {
      if (input_shape.size() != 3) {
        throw ShapeError("Conv2D expects HxWxC input, got " + shape_to_string(input_shape));
      }
      return std::make_unique<Conv2dLayer>(spec, input_shape[2]);
    }
    case LayerKind::ReLU:
      return std::make_unique<ReluLayer>();
    case LayerKind::MaxPool2D:
      return std::make_unique<MaxPool2dLayer>(spec);
    case LayerKind::Dropout:
      return std::make_unique<DropoutLayer>(spec);
    case LayerKind::Dense: {
      if (input_shape.size() != 1) {
        throw ShapeError("Dense expects flat input, got " + shape_to_string(input_shape));
      }
      return std::make_unique<DenseLayer>(spec, input_shape[0]);
    }
    case LayerKind::Flatten:
      return std::make_unique<FlattenLayer>();
    case LayerKind::TemperatureScale:
      return std::make_unique<TemperatureScaleLayer>(spec);
  }
  throw ParamError("unknown layer kind");
}

// ---------------------------------------------------------------- Conv2D

Conv2dLayer::Conv2dLayer(const LayerSpec& spec, std::size_t in_channels)
    : spec_(spec),
      in_channels_(in_channels),
      kernel_({spec.kernel_h, spec.kernel_w, in_channels, spec.filters}),
      bias_({spec.filters}),
      grad_kernel_(kernel_.shape()),
      grad_bias_(bias_.shape()) {}

LayerSpec Conv2dLayer::spec() const { return spec_; }

// TF-style "same" padding: output = ceil(H / stride), zeros split evenly
// with the extra row/column at the bottom/right.
void Conv2dLayer::pad_amounts(std::size_t h, std::size_t w, std::size_t& top,
                              std::size_t& left, std::size_t& padded_h,
                              std::size_t& padded_w) const {
  if (spec_.padding == Padding::Valid) {
    top = left = 0;
    padded_h = h;
    padded_w = w;
    return;
  }
  std::size_t out_h = (h + spec_.stride_y - 1) / spec_.stride_y;
  std::size_t out_w = (w + spec_.stride_x - 1) / spec_.stride_x;
  std::size_t need_h = (out_h - 1) * spec_.stride_y + spec_.kernel_h;
  std::size_t need_w = (out_w - 1) * spec_.stride_x + spec_.kernel_w;
  std::size_t pad_h = need_h > h ? need_h - h : 0;
  std::size_t pad_w = need_w > w ? need_w - w : 0;
  top = pad_h / 2;
  left = pad_w / 2;
  padded_h = h + pad_h;
  padded_w = w + pad_w;
}

std::vector<std::size_t> Conv2dLayer::output_shape(
    const std::vector<std::size_t>& input) const {
  if (input.size() != 3) {
    throw ShapeError("Conv2D expects HxWxC input, got " + shape_to_string(input));
  }
  if (input[2] != in_channels_) {
    throw ShapeError("Conv2D channel axis (2): expected " + std::to_string(in_channels_) +
                     ", got " + std::to_string(input[2]));
  }
  std::size_t top, left, ph, pw;
  pad_amounts(input[0], input[1], top, left, ph, pw);
  if (spec_.kernel_h > ph) {
    throw ShapeError("Conv2D kernel height " + std::to_string(spec_.kernel_h) +
                     " exceeds padded input height " + std::to_string(ph) + " (axis 0)");
  }
  if (spec_.kernel_w > pw) {
    throw ShapeError("Conv2D kernel width " + std::to_string(spec_.kernel_w) +
                     " exceeds padded input width " + std::to_string(pw) + " (axis 1)");
  }
  std::size_t out_h = (ph - spec_.kernel_h) / spec_.stride_y + 1;
  std::size_t out_w = (pw - spec_.kernel_w) / spec_.stride_x + 1;
  return {out_h, out_w, spec_.filters};
}

Tensor Conv2dLayer::forward(const Tensor& input, const LayerContext&) {
  auto out_shape = output_shape(input.shape());
  std::size_t h = input.dim(0), w = input.dim(1), c = input.dim(2);
  std::size_t top, left, ph, pw;
  pad_amounts(h, w, top, left, ph, pw);

  Tensor padded({ph, pw, c});
  for (std::size_t y = 0; y < h; ++y) {
    const double* src = input.data() + y * w * c;
    double* dst = padded.data() + ((y + top) * pw + left) * c;
    std::copy(src, src + w * c, dst);
  }

  std::size_t out_h = out_shape[0], out_w = out_shape[1], f_count = out_shape[2];
  std::size_t kh = spec_.kernel_h, kw = spec_.kernel_w;
  Tensor out(out_shape);
  for (std::size_t oy = 0; oy < out_h; ++oy) {
    for (std::size_t ox = 0; ox < out_w; ++ox) {
      double* out_px = out.data() + (oy * out_w + ox) * f_count;
      for (std::size_t f = 0; f < f_count; ++f) out_px[f] = bias_[f];
      std::size_t iy0 = oy * spec_.stride_y;
      std::size_t ix0 = ox * spec_.stride_x;
      for (std::size_t ky = 0; ky < kh; ++ky) {
        for (std::size_t kx = 0; kx < kw; ++kx) {
          const double* in_px = padded.data() + ((iy0 + ky) * pw + (ix0 + kx)) * c;
          const double* k_px = kernel_.data() + ((ky * kw + kx) * c) * f_count;
          for (std::size_t ch = 0; ch < c; ++ch) {
            double v = in_px[ch];
            if (v == 0.0) continue;
            const double* k_ch = k_px + ch * f_count;
            for (std::size_t f = 0; f < f_count; ++f) out_px[f] += v * k_ch[f];
          }
        }
      }
    }
  }

  cached_padded_ = std::move(padded);
  cached_h_ = h;
  cached_w_ = w;
  cached_top_ = top;
  cached_left_ = left;
  return out;
}

Tensor Conv2dLayer::backward(const Tensor& grad_output) {
  std::size_t c = in_channels_;
  std::size_t ph = cached_padded_.dim(0), pw = cached_padded_.dim(1);
  std::size_t kh = spec_.kernel_h, kw = spec_.kernel_w;
  std::size_t f_count = spec_.filters;
  std::size_t out_h = grad_output.dim(0), out_w = grad_output.dim(1);
  if (grad_output.dim(2) != f_count) {
    throw ShapeError("conv backward: filter axis (2) expected " + std::to_string(f_count) +
                     ", got " + std::to_string(grad_output.dim(2)));
  }

  Tensor grad_padded({ph, pw, c});
  for (std::size_t oy = 0; oy < out_h; ++oy) {
    for (std::size_t ox = 0; ox < out_w; ++ox) {
      const double* g_px = grad_output.data() + (oy * out_w + ox) * f_count;
      for (std::size_t f = 0; f < f_count; ++f) grad_bias_[f] += g_px[f];
      std::size_t iy0 = oy * spec_.stride_y;
      std::size_t ix0 = ox * spec_.stride_x;
      for (std::size_t ky = 0; ky < kh; ++ky) {
        for (std::size_t kx = 0; kx < kw; ++kx) {
          const double* in_px = cached_padded_.data() + ((iy0 + ky) * pw + (ix0 + kx)) * c;
          double* gin_px = grad_padded.data() + ((iy0 + ky) * pw + (ix0 + kx)) * c;
          double* gk_px = grad_kernel_.data() + ((ky * kw + kx) * c) * f_count;
          const double* k_px = kernel_.data() + ((ky * kw + kx) * c) * f_count;
          for (std::size_t ch = 0; ch < c; ++ch) {
            double in_v = in_px[ch];
            double acc = 0.0;
            double* gk_ch = gk_px + ch * f_count;
            const double* k_ch = k_px + ch * f_count;
            for (std::size_t f = 0; f < f_count; ++f) {
              double g = g_px[f];
              gk_ch[f] += in_v * g;
              acc += k_ch[f] * g;
            }
            gin_px[ch] += acc;
          }
        }
      }
    }
  }

  Tensor grad_input({cached_h_, cached_w_, c});
  for (std::size_t y = 0; y < cached_h_; ++y) {
    const double* src = grad_padded.data() + ((y + cached_top_) * pw + cached_left_) * c;
    double* dst = grad_input.data() + y * cached_w_ * c;
    std::copy(src, src + cached_w_ * c, dst);
  }
  return grad_input;
}

// ---------------------------------------------------------------- ReLU

Tensor ReluLayer::forward(const Tensor& input, const LayerContext&) {
  cached_input_ = input;
  Tensor out(input.shape());
  for (std::size_t i = 0; i < input.size(); ++i) out[i] = input[i] > 0.0 ? input[i] : 0.0;
  return out;
}

Tensor ReluLayer::backward(const Tensor& grad_output) {
  if (!grad_output.same_shape(cached_input_)) {
    throw ShapeError("relu backward shape " + shape_to_string(grad_output.shape()) +
                     " != forward shape " + shape_to_string(cached_input_.shape()));
  }
  Tensor grad(grad_output.shape());
  for (std::size_t i = 0; i < grad.size(); ++i) {
    grad[i] = cached_input_[i] > 0.0 ? grad_output[i] : 0.0;
  }
  return grad;
}

// ---------------------------------------------------------------- MaxPool2D

MaxPool2dLayer::MaxPool2dLayer(const LayerSpec& spec) : spec_(spec) {}

std::vector<std::size_t> MaxPool2dLayer::output_shape(
    const std::vector<std::size_t>& input) const {
  if (input.size() != 3) {
    throw ShapeError("MaxPool2D expects HxWxC input, got " + shape_to_string(input));
  }
  if (spec_.pool_h > input[0]) {
    throw ShapeError("pool window height " + std::to_string(spec_.pool_h) +
                     " exceeds input height " + std::to_string(input[0]) + " (axis 0)");
  }
  if (spec_.pool_w > input[1]) {
    throw ShapeError("pool window width " + std::to_string(spec_.pool_w) +
                     " exceeds input width " + std::to_string(input[1]) + " (axis 1)");
  }
  return {(input[0] - spec_.pool_h) / spec_.stride_y + 1,
          (input[1] - spec_.pool_w) / spec_.stride_x + 1, input[2]};
}

Tensor MaxPool2dLayer::forward(const Tensor& input, const LayerContext&) {
  auto out_shape = output_shape(input.shape());
  std::size_t w = input.dim(1), c = input.dim(2);
  std::size_t out_h = out_shape[0], out_w = out_shape[1];
  Tensor out(out_shape);
  cached_argmax_.assign(out.size(), 0);
  cached_input_shape_ = input.shape();

  for (std::size_t oy = 0; oy < out_h; ++oy) {
    for (std::size_t ox = 0; ox < out_w; ++ox) {
      for (std::size_t ch = 0; ch < c; ++ch) {
        double best = -std::numeric_limits<double>::infinity();
        std::size_t best_idx = 0;
        // ties keep the first candidate in row-major scan order
        for (std::size_t py = 0; py < spec_.pool_h; ++py) {
          for (std::size_t px = 0; px < spec_.pool_w; ++px) {
            std::size_t iy = oy * spec_.stride_y + py;
            std::size_t ix = ox * spec_.stride_x + px;
            std::size_t idx = (iy * w + ix) * c + ch;
            if (input[idx] > best) {
              best = input[idx];
              best_idx = idx;
            }
          }
        }
        std::size_t out_idx = (oy * out_w + ox) * c + ch;
        out[out_idx] = best;
        cached_argmax_[out_idx] = best_idx;
      }
    }
  }
  return out;
}

Tensor MaxPool2dLayer::backward(const Tensor& grad_output) {
  if (grad_output.size() != cached_argmax_.size()) {
    throw ShapeError("maxpool backward size mismatch");
  }
  Tensor grad(cached_input_shape_);
  for (std::size_t i = 0; i < grad_output.size(); ++i) {
    grad[cached_argmax_[i]] += grad_output[i];
  }
  return grad;
}

// ---------------------------------------------------------------- Dropout

DropoutLayer::DropoutLayer(const LayerSpec& spec) : spec_(spec) {}

Tensor DropoutLayer::forward(const Tensor& input, const LayerContext& ctx) {
  if (!ctx.training || spec_.drop_prob == 0.0) {
    mask_active_ = false;
    return input;
  }
  if (ctx.rng == nullptr) {
    throw ParamError("dropout in training mode requires an RNG handle");
  }
  double keep = 1.0 - spec_.drop_prob;
  cached_mask_ = Tensor(input.shape());
  Tensor out(input.shape());
  for (std::size_t i = 0; i < input.size(); ++i) {
    double m = ctx.rng->uniform(0.0, 1.0) < spec_.drop_prob ? 0.0 : 1.0 / keep;
    cached_mask_[i] = m;
    out[i] = input[i] * m;
  }
  mask_active_ = true;
  return out;
}

Tensor DropoutLayer::backward(const Tensor& grad_output) {
  if (!mask_active_) return grad_output;
  if (!grad_output.same_shape(cached_mask_)) {
    throw ShapeError("dropout backward shape mismatch");
  }
  Tensor grad(grad_output.shape());
  for (std::size_t i = 0; i < grad.size(); ++i) grad[i] = grad_output[i] * cached_mask_[i];
  return grad;
}

// ---------------------------------------------------------------- Dense

DenseLayer::DenseLayer(const LayerSpec& spec, std::size_t input_width)
    : spec_(spec),
      input_width_(input_width),
      weights_({input_width, spec.units}),
      bias_({spec.units}),
      grad_weights_(weights_.shape()),
      grad_bias_(bias_.shape()) {}

std::vector<std::size_t> DenseLayer::output_shape(
    const std::vector<std::size_t>& input) const {
  if (input.size() != 1) {
    throw ShapeError("Dense expects flat input, got " + shape_to_string(input));
  }
  if (input[0] != input_width_) {
    throw ShapeError("Dense input axis (0): expected " + std::to_string(input_width_) +
                     ", got " + std::to_string(input[0]));
  }
  return {spec_.units};
}

Tensor DenseLayer::forward(const Tensor& input, const LayerContext&) {
  output_shape(input.shape());
  cached_input_ = input;
  std::size_t n_out = spec_.units;
  Tensor out({n_out});
  for (std::size_t j = 0; j < n_out; ++j) out[j] = bias_[j];
  for (std::size_t i = 0; i < input_width_; ++i) {
    double v = input[i];
    if (v == 0.0) continue;
    const double* w_row = weights_.data() + i * n_out;
    for (std::size_t j = 0; j < n_out; ++j) out[j] += v * w_row[j];
  }
  return out;
}

Tensor DenseLayer::backward(const Tensor& grad_output) {
  if (grad_output.size() != spec_.units) {
    throw ShapeError("dense backward: expected " + std::to_string(spec_.units) +
                     " gradients, got " + std::to_string(grad_output.size()));
  }
  for (std::size_t j = 0; j < spec_.units; ++j) grad_bias_[j] += grad_output[j];
  Tensor grad_in({input_width_});
  for (std::size_t i = 0; i < input_width_; ++i) {
    double in_v = cached_input_[i];
    const double* w_row = weights_.data() + i * spec_.units;
    double* gw_row = grad_weights_.data() + i * spec_.units;
    double acc = 0.0;
    for (std::size_t j = 0; j < spec_.units; ++j) {
      gw_row[j] += in_v * grad_output[j];
      acc += w_row[j] * grad_output[j];
    }
    grad_in[i] = acc;
  }
  return grad_in;
}

// ---------------------------------------------------------------- Flatten

Tensor FlattenLayer::forward(const Tensor& input, const LayerContext&) {
  cached_input_shape_ = input.shape();
  return input.reshaped({input.size()});
}

Tensor FlattenLayer::backward(const Tensor& grad_output) {
  return grad_output.reshaped(cached_input_shape_);
}

std::vector<std::size_t> FlattenLayer::output_shape(
    const std::vector<std::size_t>& input) const {
  std::size_t n = 1;
  for (std::size_t d : input) n *= d;
  return {n};
}

// ------------------------------------------------------- TemperatureScale

TemperatureScaleLayer::TemperatureScaleLayer(const LayerSpec& spec) : spec_(spec) {
  spec_.validate();
}

Tensor TemperatureScaleLayer::forward(const Tensor& input, const LayerContext&) {
  Tensor out(input.shape());
  for (std::size_t i = 0; i < input.size(); ++i) out[i] = input[i] / spec_.temperature;
  return out;
}

Tensor TemperatureScaleLayer::backward(const Tensor& grad_output) {
  Tensor grad(grad_output.shape());
  for (std::size_t i = 0; i < grad.size(); ++i) grad[i] = grad_output[i] / spec_.temperature;
  return grad;
}

}  // namespace signforge::numcore
