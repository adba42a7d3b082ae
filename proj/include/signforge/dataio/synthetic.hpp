#pragma once

#include <cstdint>
#include <utility>

#include "signforge/dataio/dataset.hpp"

namespace signforge::dataio {

/// Procedural desk-scale sign set: one glyph shape/color pair per class over
/// a noisy background, 80/20 train/test split. Train classes are thinned by
/// a seeded factor in [0.3, 1.0] so rebalancing has work to do. Fully
/// deterministic in (num_classes, per_class, seed).
std::pair<Dataset, Dataset> generate_synthetic(std::size_t num_classes, std::size_t per_class,
                                               std::uint64_t seed);

}  // namespace signforge::dataio
