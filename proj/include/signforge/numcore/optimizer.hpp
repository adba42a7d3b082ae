#pragma once

#include <cstdint>
#include <vector>

#include "signforge/numcore/tensor.hpp"

namespace signforge::numcore {

struct OptimizerConfig {
  double learning_rate = 0.01;
  double momentum = 0.9;
  double decay = 1e-6;  // per-update multiplicative learning-rate decay
  std::size_t epochs = 30;
  std::size_t batch_size = 32;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

/// SGD with momentum and inverse-time learning-rate decay:
///   lr_t = lr / (1 + decay * t),  v <- momentum * v - lr_t * g,  p <- p + v
/// where t counts completed updates.
class SgdOptimizer {
 public:
  SgdOptimizer(const OptimizerConfig& cfg, const std::vector<Tensor*>& params);

  void step(const std::vector<Tensor*>& params, const std::vector<Tensor*>& grads);

  double current_learning_rate() const;
  std::size_t steps_taken() const { return step_; }
  const std::vector<Tensor>& velocity() const { return velocity_; }

 private:
  OptimizerConfig cfg_;
  std::vector<Tensor> velocity_;
  std::size_t step_ = 0;
};

}  // namespace signforge::numcore
