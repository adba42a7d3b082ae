#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "signforge/numcore/layers.hpp"
#include "signforge/numcore/optimizer.hpp"
#include "signforge/numcore/tensor.hpp"

namespace signforge::models {

enum class ArchitectureId : std::uint8_t { AdversarialCnn = 0, DeepCnn = 1 };

const char* architecture_name(ArchitectureId id);

/// Provenance of a trained model; serialized with the weights and used to
/// tell substitute-crafted adversarial sets apart from white-box ones.
struct TrainingManifest {
  std::string dataset_hash;
  std::size_t epochs = 0;
  std::uint64_t seed = 0;
  numcore::OptimizerConfig optimizer;
  std::string note;

  std::string to_json() const;
  static TrainingManifest from_json(const std::string& text);
};

struct Prediction {
  numcore::Tensor probs;   // length N, sums to 1
  numcore::Tensor logits;  // pre-temperature, pre-softmax network output Z(X)
  std::vector<std::pair<std::size_t, double>> top_k;  // descending by prob

  std::size_t predicted_class() const { return top_k.front().first; }
};

/// A fixed layer stack with its weights: the runtime form of a model.
/// Forward/backward mutate per-layer caches, so instances are not
/// thread-safe; clone per worker for concurrent inference.
class Network {
 public:
  Network(ArchitectureId id, std::size_t num_classes, double temperature,
          double width_factor, bool final_relu,
          std::vector<std::unique_ptr<numcore::Layer>> layers);

  Network(const Network& other);
  Network& operator=(const Network& other);
  Network(Network&&) noexcept = default;
  Network& operator=(Network&&) noexcept = default;

  ArchitectureId architecture() const { return architecture_; }
  std::size_t num_classes() const { return num_classes_; }
  double temperature() const { return temperature_; }
  double width_factor() const { return width_factor_; }
  bool final_relu() const { return final_relu_; }

  const std::vector<std::unique_ptr<numcore::Layer>>& layers() const { return layers_; }
  std::vector<numcore::Tensor*> params();
  std::vector<numcore::Tensor*> grads();
  void zero_grads();
  std::size_t param_count() const;

  /// Runs the full stack. Training mode activates dropout (rng required).
  numcore::Tensor forward(const numcore::Tensor& input, bool training = false,
                          numcore::Rng* rng = nullptr);

  /// Backpropagates a gradient seeded at the stack output down to the input.
  /// Parameter gradients accumulate as a side effect.
  numcore::Tensor backward_to_input(const numcore::Tensor& grad_output);

  /// Eval-mode prediction at the model's own temperature.
  Prediction predict(const numcore::Tensor& image);
  /// Eval-mode prediction with the temperature overridden (argmax-invariant).
  Prediction predict_at(const numcore::Tensor& image, double eval_temperature);

  /// dJ/dx for J = cross-entropy(softmax(stack output), one-hot target).
  numcore::Tensor gradient_wrt_input(const numcore::Tensor& image, std::size_t target_label);

  /// N x input-size matrix; row i is the gradient of pre-softmax output i.
  numcore::Tensor jacobian_wrt_input(const numcore::Tensor& image);

  /// Output shape after every layer, for table-driven architecture checks.
  std::vector<std::vector<std::size_t>> layer_output_shapes(
      const std::vector<std::size_t>& input_shape) const;

  const TrainingManifest& manifest() const { return manifest_; }
  void set_manifest(TrainingManifest m) { manifest_ = std::move(m); }

  /// SHA-256 over the serialized model; changes with any weight or manifest.
  std::string identity_hash() const;

 private:
  ArchitectureId architecture_;
  std::size_t num_classes_;
  double temperature_;
  double width_factor_;
  bool final_relu_;
  std::vector<std::unique_ptr<numcore::Layer>> layers_;
  TrainingManifest manifest_;
};

}  // namespace signforge::models
