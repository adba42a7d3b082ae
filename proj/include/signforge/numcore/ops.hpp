#pragma once

#include "signforge/numcore/tensor.hpp"

namespace signforge::numcore {

/// Softmax over logits/T with max-subtraction for overflow safety.
/// T=1 is the standard softmax. Throws ParamError for T <= 0.
Tensor temperature_softmax(const Tensor& logits, double temperature);

/// -sum(target_i * log(probs_i)) with log clamped at probs >= 1e-12.
/// Accepts one-hot or soft targets; lengths must agree.
double cross_entropy_loss(const Tensor& probs, const Tensor& target);

/// Shannon entropy of a probability vector, in bits.
double entropy_bits(const Tensor& probs);

/// Shannon entropy in nats.
double entropy_nats(const Tensor& probs);

}  // namespace signforge::numcore
