#include "signforge/models/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "signforge/numcore/ops.hpp"
#include "signforge/util/error.hpp"

namespace signforge::models {

using numcore::Rng;
using numcore::Tensor;

namespace {

TrainLog run_training(Network& net, const dataio::Dataset& data,
                      const std::vector<Tensor>& labels, const numcore::OptimizerConfig& cfg) {
  if (data.empty()) throw DataError("cannot train on an empty dataset");
  if (labels.size() != data.size()) {
    throw DataError("label row count " + std::to_string(labels.size()) +
                    " != dataset size " + std::to_string(data.size()));
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].size() != net.num_classes()) {
      throw ShapeError("label row " + std::to_string(i) + " has length " +
                       std::to_string(labels[i].size()) + ", expected " +
                       std::to_string(net.num_classes()));
    }
    double sum = std::accumulate(labels[i].values().begin(), labels[i].values().end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-6) {
      throw DataError("label row " + std::to_string(i) + " sums to " + std::to_string(sum));
    }
  }
  cfg.validate();

  Rng shuffle_rng(numcore::mix_seed(cfg.rng_seed, 0x5348));
  Rng dropout_rng(numcore::mix_seed(cfg.rng_seed, 0x4452));

  auto params = net.params();
  numcore::SgdOptimizer optimizer(cfg, params);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  TrainLog log;
  log.epoch_loss.reserve(cfg.epochs);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng.engine());
    double epoch_loss = 0.0;

    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      std::size_t end = std::min(order.size(), start + cfg.batch_size);
      double batch_scale = 1.0 / static_cast<double>(end - start);
      net.zero_grads();
      for (std::size_t b = start; b < end; ++b) {
        const auto& sample = data.samples[order[b]];
        const Tensor& target = labels[order[b]];
        Tensor stack_out = net.forward(sample.pixels, /*training=*/true, &dropout_rng);
        Tensor probs = numcore::temperature_softmax(stack_out, 1.0);
        epoch_loss += numcore::cross_entropy_loss(probs, target);
        Tensor seed(probs.shape());
        for (std::size_t i = 0; i < seed.size(); ++i) {
          seed[i] = (probs[i] - target[i]) * batch_scale;
        }
        net.backward_to_input(seed);
      }
      optimizer.step(params, net.grads());
    }

    epoch_loss /= static_cast<double>(data.size());
    if (!std::isfinite(epoch_loss)) {
      throw DataError("training diverged at epoch " + std::to_string(epoch));
    }
    log.epoch_loss.push_back(epoch_loss);
  }
  net.zero_grads();
  return log;
}

}  // namespace

TrainLog train(Network& net, const dataio::Dataset& data, const numcore::OptimizerConfig& cfg) {
  std::vector<Tensor> labels;
  labels.reserve(data.size());
  for (const auto& s : data.samples) labels.push_back(numcore::one_hot(s.label, net.num_classes()));
  return run_training(net, data, labels, cfg);
}

TrainLog train_soft(Network& net, const dataio::Dataset& data,
                    const std::vector<Tensor>& soft_labels,
                    const numcore::OptimizerConfig& cfg) {
  return run_training(net, data, soft_labels, cfg);
}

}  // namespace signforge::models
