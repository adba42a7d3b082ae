#include "signforge/numcore/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "signforge/util/error.hpp"

namespace signforge::numcore {

Tensor temperature_softmax(const Tensor& logits, double temperature) {
  if (!(temperature > 0.0)) {
    throw ParamError("temperature must be > 0, got " + std::to_string(temperature));
  }
  if (logits.size() == 0) throw ShapeError("softmax of empty logits");

  Tensor out(logits.shape());
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < logits.size(); ++i) m = std::max(m, logits[i] / temperature);
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] / temperature - m);
    sum += out[i];
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] /= sum;
  return out;
}

double cross_entropy_loss(const Tensor& probs, const Tensor& target) {
  if (probs.size() != target.size()) {
    throw ShapeError("cross entropy: probs length " + std::to_string(probs.size()) +
                     " != target length " + std::to_string(target.size()));
  }
  double loss = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (target[i] == 0.0) continue;
    loss -= target[i] * std::log(std::max(probs[i], 1e-12));
  }
  return loss;
}

double entropy_bits(const Tensor& probs) {
  double h = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    double p = probs[i];
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double entropy_nats(const Tensor& probs) {
  double h = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    double p = probs[i];
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

}  // namespace signforge::numcore
