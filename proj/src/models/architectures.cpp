#include "signforge/models/architectures.hpp"

#include <cmath>

#include "signforge/util/error.hpp"

namespace signforge::models {

using numcore::Layer;
using numcore::LayerKind;
using numcore::LayerSpec;
using numcore::Padding;
using numcore::Rng;
using numcore::Tensor;
using numcore::mix_seed;

std::size_t scaled_width(std::size_t full, double width_factor) {
  if (!(width_factor > 0.0 && width_factor <= 1.0)) {
    throw ParamError("width_factor must be in (0,1]");
  }
  auto scaled = static_cast<std::size_t>(std::llround(full * width_factor));
  return std::max<std::size_t>(1, scaled);
}

namespace {

// He-uniform: U(-limit, limit) with limit = sqrt(6 / fan_in).
void he_uniform_fill(Tensor& t, std::size_t fan_in, Rng& rng) {
  double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(-limit, limit);
}

struct StackBuilder {
  std::vector<std::unique_ptr<Layer>> layers;
  std::vector<std::size_t> shape;
  std::uint64_t seed;
  std::size_t index = 0;

  StackBuilder(std::vector<std::size_t> input_shape, std::uint64_t s)
      : shape(std::move(input_shape)), seed(s) {}

  void add(const LayerSpec& spec) {
    auto layer = numcore::make_layer(spec, shape);
    shape = layer->output_shape(shape);
    // He-uniform weights; biases start slightly positive so ReLUs open on
    // the all-positive [0,1] pixel range
    if (spec.kind == LayerKind::Conv2D) {
      auto* conv = static_cast<numcore::Conv2dLayer*>(layer.get());
      Rng rng(mix_seed(seed, index));
      std::size_t fan_in = spec.kernel_h * spec.kernel_w * conv->kernel().dim(2);
      he_uniform_fill(conv->kernel(), fan_in, rng);
      conv->bias().fill(0.01);
    } else if (spec.kind == LayerKind::Dense) {
      auto* dense = static_cast<numcore::DenseLayer*>(layer.get());
      Rng rng(mix_seed(seed, index));
      he_uniform_fill(dense->weights(), dense->weights().dim(0), rng);
      dense->bias().fill(0.01);
    }
    layers.push_back(std::move(layer));
    ++index;
  }
};

}  // namespace

Network build_adversarial_cnn(std::size_t num_classes, std::uint64_t seed,
                              double width_factor) {
  if (num_classes < 2) throw ParamError("num_classes must be >= 2");
  StackBuilder b({32, 32, 3}, seed);
  b.add(LayerSpec::conv2d(8, 8, scaled_width(64, width_factor), 2, Padding::SameZero));
  b.add(LayerSpec::relu());
  b.add(LayerSpec::conv2d(6, 6, scaled_width(128, width_factor), 2, Padding::Valid));
  b.add(LayerSpec::relu());
  b.add(LayerSpec::conv2d(5, 5, scaled_width(128, width_factor), 1, Padding::Valid));
  b.add(LayerSpec::relu());
  b.add(LayerSpec::flatten());
  b.add(LayerSpec::dense(scaled_width(1024, width_factor)));
  b.add(LayerSpec::relu());
  b.add(LayerSpec::dense(num_classes));
  return Network(ArchitectureId::AdversarialCnn, num_classes, /*temperature=*/1.0,
                 width_factor, /*final_relu=*/false, std::move(b.layers));
}

Network build_deep_cnn(std::size_t num_classes, std::uint64_t seed,
                       const DeepCnnOptions& options) {
  if (num_classes < 2) throw ParamError("num_classes must be >= 2");
  if (!(options.temperature > 0.0)) throw ParamError("temperature must be > 0");
  StackBuilder b({32, 32, 3}, seed);
  b.add(LayerSpec::conv2d(3, 3, scaled_width(32, options.width_factor), 1, Padding::SameZero));
  b.add(LayerSpec::relu());
  b.add(LayerSpec::conv2d(3, 3, scaled_width(32, options.width_factor), 1, Padding::SameZero));
  b.add(LayerSpec::relu());
  b.add(LayerSpec::max_pool(2, 2));
  b.add(LayerSpec::dropout(0.25));
  b.add(LayerSpec::conv2d(3, 3, scaled_width(64, options.width_factor), 1, Padding::SameZero));
  b.add(LayerSpec::relu());
  b.add(LayerSpec::conv2d(3, 3, scaled_width(64, options.width_factor), 1, Padding::SameZero));
  b.add(LayerSpec::relu());
  b.add(LayerSpec::dropout(0.25));
  b.add(LayerSpec::flatten());
  b.add(LayerSpec::dense(scaled_width(256, options.width_factor)));
  b.add(LayerSpec::dropout(0.5));
  b.add(LayerSpec::dense(num_classes));
  if (options.final_relu) b.add(LayerSpec::relu());
  b.add(LayerSpec::temperature_scale(options.temperature));
  return Network(ArchitectureId::DeepCnn, num_classes, options.temperature,
                 options.width_factor, options.final_relu, std::move(b.layers));
}

Network build_architecture(ArchitectureId id, std::size_t num_classes, double temperature,
                           double width_factor, bool final_relu) {
  if (id == ArchitectureId::AdversarialCnn) {
    return build_adversarial_cnn(num_classes, /*seed=*/0, width_factor);
  }
  DeepCnnOptions opt;
  opt.temperature = temperature;
  opt.width_factor = width_factor;
  opt.final_relu = final_relu;
  return build_deep_cnn(num_classes, /*seed=*/0, opt);
}

}  // namespace signforge::models
