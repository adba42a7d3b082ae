#pragma once

#include <memory>
#include <string>
#include <vector>

#include "signforge/numcore/rng.hpp"
#include "signforge/numcore/tensor.hpp"

namespace signforge::numcore {

enum class LayerKind { Conv2D, ReLU, MaxPool2D, Dropout, Dense, Flatten, TemperatureScale };
enum class Padding { SameZero, Valid };

const char* layer_kind_name(LayerKind kind);

/// Declarative description of one layer. Builders produce these and the
/// model container validates loaded weights against them.
struct LayerSpec {
  LayerKind kind = LayerKind::ReLU;

  // Conv2D
  std::size_t kernel_h = 0, kernel_w = 0;
  std::size_t filters = 0;
  std::size_t stride_y = 1, stride_x = 1;
  Padding padding = Padding::Valid;
  // MaxPool2D
  std::size_t pool_h = 0, pool_w = 0;
  // Dropout
  double drop_prob = 0.0;
  // Dense
  std::size_t units = 0;
  // TemperatureScale
  double temperature = 1.0;

  static LayerSpec conv2d(std::size_t kh, std::size_t kw, std::size_t filters,
                          std::size_t stride, Padding padding);
  static LayerSpec relu();
  static LayerSpec max_pool(std::size_t window, std::size_t stride);
  static LayerSpec dropout(double prob);
  static LayerSpec dense(std::size_t units);
  static LayerSpec flatten();
  static LayerSpec temperature_scale(double t);

  /// Throws ParamError on out-of-range parameters.
  void validate() const;
  std::string describe() const;

  bool operator==(const LayerSpec&) const = default;
};

struct LayerContext {
  bool training = false;
  Rng* rng = nullptr;  // required only by Dropout in training mode
};

/// A differentiable layer. forward() caches whatever backward() needs;
/// backward() returns the input gradient and accumulates parameter
/// gradients in place. Instances are not thread-safe; clone per worker
/// for concurrent inference over frozen weights.
class Layer {
 public:
  virtual ~Layer() = default;

  virtual LayerSpec spec() const = 0;
  virtual Tensor forward(const Tensor& input, const LayerContext& ctx) = 0;
  virtual Tensor backward(const Tensor& grad_output) = 0;

  virtual std::vector<Tensor*> params() { return {}; }
  virtual std::vector<Tensor*> grads() { return {}; }
  void zero_grads();

  /// Static shape propagation; throws ShapeError naming the offending axis.
  virtual std::vector<std::size_t> output_shape(const std::vector<std::size_t>& input) const = 0;

  virtual std::unique_ptr<Layer> clone() const = 0;
};

/// Instantiates a layer from its spec. Conv2D/Dense infer their weight
/// shapes from input_shape; weights start at zero (builders initialize).
std::unique_ptr<Layer> make_layer(const LayerSpec& spec,
                                  const std::vector<std::size_t>& input_shape);

class Conv2dLayer final : public Layer {
 public:
  Conv2dLayer(const LayerSpec& spec, std::size_t in_channels);

  LayerSpec spec() const override;
  Tensor forward(const Tensor& input, const LayerContext& ctx) override;
  Tensor backward(const Tensor& grad_output) override;
  std::vector<Tensor*> params() override { return {&kernel_, &bias_}; }
  std::vector<Tensor*> grads() override { return {&grad_kernel_, &grad_bias_}; }
  std::vector<std::size_t> output_shape(const std::vector<std::size_t>& input) const override;
  std::unique_ptr<Layer> clone() const override { return std::make_unique<Conv2dLayer>(*this); }

  Tensor& kernel() { return kernel_; }
  Tensor& bias() { return bias_; }

 private:
  void pad_amounts(std::size_t h, std::size_t w, std::size_t& top, std::size_t& left,
                   std::size_t& padded_h, std::size_t& padded_w) const;

  LayerSpec spec_;
  std::size_t in_channels_;
  Tensor kernel_;  // kh x kw x Cin x F
  Tensor bias_;    // F
  Tensor grad_kernel_;
  Tensor grad_bias_;

  Tensor cached_padded_;  // zero-padded forward input
  std::size_t cached_h_ = 0, cached_w_ = 0, cached_top_ = 0, cached_left_ = 0;
};

class ReluLayer final : public Layer {
 public:
  LayerSpec spec() const override { return LayerSpec::relu(); }
  Tensor forward(const Tensor& input, const LayerContext& ctx) override;
  Tensor backward(const Tensor& grad_output) override;
  std::vector<std::size_t> output_shape(const std::vector<std::size_t>& input) const override {
    return input;
  }
  std::unique_ptr<Layer> clone() const override { return std::make_unique<ReluLayer>(*this); }

 private:
  Tensor cached_input_;
};

class MaxPool2dLayer final : public Layer {
 public:
  explicit MaxPool2dLayer(const LayerSpec& spec);

  LayerSpec spec() const override { return spec_; }
  Tensor forward(const Tensor& input, const LayerContext& ctx) override;
  Tensor backward(const Tensor& grad_output) override;
  std::vector<std::size_t> output_shape(const std::vector<std::size_t>& input) const override;
  std::unique_ptr<Layer> clone() const override { return std::make_unique<MaxPool2dLayer>(*this); }

 private:
  LayerSpec spec_;
  std::vector<std::size_t> cached_argmax_;  // flat input index per output cell
  std::vector<std::size_t> cached_input_shape_;
};

class DropoutLayer final : public Layer {
 public:
  explicit DropoutLayer(const LayerSpec& spec);

  LayerSpec spec() const override { return spec_; }
  Tensor forward(const Tensor& input, const LayerContext& ctx) override;
  Tensor backward(const Tensor& grad_output) override;
  std::vector<std::size_t> output_shape(const std::vector<std::size_t>& input) const override {
    return input;
  }
  std::unique_ptr<Layer> clone() const override { return std::make_unique<DropoutLayer>(*this); }

 private:
  LayerSpec spec_;
  Tensor cached_mask_;   // inverted-scale mask; empty in eval mode
  bool mask_active_ = false;
};

class DenseLayer final : public Layer {
 public:
  DenseLayer(const LayerSpec& spec, std::size_t input_width);

  LayerSpec spec() const override { return spec_; }
  Tensor forward(const Tensor& input, const LayerContext& ctx) override;
  Tensor backward(const Tensor& grad_output) override;
  std::vector<Tensor*> params() override { return {&weights_, &bias_}; }
  std::vector<Tensor*> grads() override { return {&grad_weights_, &grad_bias_}; }
  std::vector<std::size_t> output_shape(const std::vector<std::size_t>& input) const override;
  std::unique_ptr<Layer> clone() const override { return std::make_unique<DenseLayer>(*this); }

  Tensor& weights() { return weights_; }
  Tensor& bias() { return bias_; }

 private:
  LayerSpec spec_;
  std::size_t input_width_;
  Tensor weights_;  // in x out
  Tensor bias_;     // out
  Tensor grad_weights_;
  Tensor grad_bias_;
  Tensor cached_input_;
};

class FlattenLayer final : public Layer {
 public:
  LayerSpec spec() const override { return LayerSpec::flatten(); }
  Tensor forward(const Tensor& input, const LayerContext& ctx) override;
  Tensor backward(const Tensor& grad_output) override;
  std::vector<std::size_t> output_shape(const std::vector<std::size_t>& input) const override;
  std::unique_ptr<Layer> clone() const override { return std::make_unique<FlattenLayer>(*this); }

 private:
  std::vector<std::size_t> cached_input_shape_;
};

class TemperatureScaleLayer final : public Layer {
 public:
  explicit TemperatureScaleLayer(const LayerSpec& spec);

  LayerSpec spec() const override { return spec_; }
  Tensor forward(const Tensor& input, const LayerContext& ctx) override;
  Tensor backward(const Tensor& grad_output) override;
  std::vector<std::size_t> output_shape(const std::vector<std::size_t>& input) const override {
    return input;
  }
  std::unique_ptr<Layer> clone() const override {
    return std::make_unique<TemperatureScaleLayer>(*this);
  }

  double temperature() const { return spec_.temperature; }

 private:
  LayerSpec spec_;
};

}  // namespace signforge::numcore
