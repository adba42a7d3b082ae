#pragma once

#include <vector>

#include "signforge/dataio/dataset.hpp"
#include "signforge/models/network.hpp"
#include "signforge/numcore/optimizer.hpp"

namespace signforge::models {

struct TrainLog {
  std::vector<double> epoch_loss;  // mean per-sample training loss per epoch
};

/// Mini-batch SGD with one-hot labels built from the dataset. Shuffling and
/// dropout streams derive from cfg.rng_seed, so identical inputs give
/// identical weights. Throws DataError on an empty dataset.
TrainLog train(Network& net, const dataio::Dataset& data, const numcore::OptimizerConfig& cfg);

/// Same loop with caller-provided probability-vector labels (rows sum to 1),
/// as required by the distillation student pass.
TrainLog train_soft(Network& net, const dataio::Dataset& data,
                    const std::vector<numcore::Tensor>& soft_labels,
                    const numcore::OptimizerConfig& cfg);

}  // namespace signforge::models
