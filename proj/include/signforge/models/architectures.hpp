#pragma once

#include <cstdint>

#include "signforge/models/network.hpp"

namespace signforge::models {

/// Options for the victim network. width_factor < 1 scales every filter and
/// dense width for desk-scale runs; 1.0 is the full published stack.
/// final_relu keeps the ReLU between the last dense layer and the
/// temperature layer; the flag exists for ablation only.
struct DeepCnnOptions {
  double temperature = 1.0;
  double width_factor = 1.0;
  bool final_relu = true;
};

/// Substitute network: Conv(8x8,64,s2,same) ReLU Conv(6x6,128,s2,valid) ReLU
/// Conv(5x5,128,s1,valid) ReLU Flatten Dense(1024) ReLU Dense(N).
/// He-uniform init from seed; flatten width is 512 at full width.
Network build_adversarial_cnn(std::size_t num_classes, std::uint64_t seed,
                              double width_factor = 1.0);

/// Victim network: [Conv(3x3,32,s1,same) ReLU] x2, MaxPool(2x2,s2),
/// Dropout(.25), [Conv(3x3,64,s1,same) ReLU] x2, Dropout(.25), Flatten,
/// Dense(256), Dropout(.5), Dense(N), ReLU, TemperatureScale(T).
/// Flatten width is 16384 at full width (no second pool).
Network build_deep_cnn(std::size_t num_classes, std::uint64_t seed,
                       const DeepCnnOptions& options = {});

/// Rebuilds the uninitialized stack for an architecture id; used by the
/// model loader to validate weight shapes against the published tables.
Network build_architecture(ArchitectureId id, std::size_t num_classes, double temperature,
                           double width_factor, bool final_relu);

std::size_t scaled_width(std::size_t full, double width_factor);

}  // namespace signforge::models
