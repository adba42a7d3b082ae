#include "signforge/numcore/optimizer.hpp"

#include "signforge/util/error.hpp"

namespace signforge::numcore {

void OptimizerConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ParamError("learning_rate must be > 0");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw ParamError("momentum must be in [0,1)");
  if (!(decay >= 0.0)) throw ParamError("decay must be >= 0");
  if (epochs == 0) throw ParamError("epochs must be positive");
  if (batch_size == 0) throw ParamError("batch_size must be positive");
}

SgdOptimizer::SgdOptimizer(const OptimizerConfig& cfg, const std::vector<Tensor*>& params)
    : cfg_(cfg) {
  cfg_.validate();
  velocity_.reserve(params.size());
  for (const Tensor* p : params) velocity_.emplace_back(p->shape());
}

double SgdOptimizer::current_learning_rate() const {
  return cfg_.learning_rate / (1.0 + cfg_.decay * static_cast<double>(step_));
}

void SgdOptimizer::step(const std::vector<Tensor*>& params, const std::vector<Tensor*>& grads) {
  if (params.size() != velocity_.size() || grads.size() != velocity_.size()) {
    throw ShapeError("optimizer state does not match parameter list");
  }
  double lr = current_learning_rate();
  for (std::size_t t = 0; t < params.size(); ++t) {
    Tensor& p = *params[t];
    const Tensor& g = *grads[t];
    Tensor& v = velocity_[t];
    if (!p.same_shape(g) || !p.same_shape(v)) {
      throw ShapeError("optimizer shape mismatch on parameter " + std::to_string(t));
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
      v[i] = cfg_.momentum * v[i] - lr * g[i];
      p[i] += v[i];
    }
  }
  ++step_;
}

}  // namespace signforge::numcore
