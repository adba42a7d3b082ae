#include "signforge/models/network.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "signforge/models/model_io.hpp"
#include "signforge/numcore/ops.hpp"
#include "signforge/util/error.hpp"
#include "signforge/util/sha256.hpp"

namespace signforge::models {

using numcore::Tensor;

const char* architecture_name(ArchitectureId id) {
  return id == ArchitectureId::AdversarialCnn ? "AdversarialCNN" : "DeepCNN";
}

std::string TrainingManifest::to_json() const {
  nlohmann::json j;
  j["dataset_hash"] = dataset_hash;
  j["epochs"] = epochs;
  j["seed"] = seed;
  j["optimizer"] = {{"learning_rate", optimizer.learning_rate},
                    {"momentum", optimizer.momentum},
                    {"decay", optimizer.decay},
                    {"epochs", optimizer.epochs},
                    {"batch_size", optimizer.batch_size},
                    {"rng_seed", optimizer.rng_seed}};
  j["note"] = note;
  return j.dump();
}

TrainingManifest TrainingManifest::from_json(const std::string& text) {
  TrainingManifest m;
  if (text.empty()) return m;
  nlohmann::json j = nlohmann::json::parse(text);
  m.dataset_hash = j.value("dataset_hash", "");
  m.epochs = j.value("epochs", std::size_t{0});
  m.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("optimizer")) {
    const auto& o = j["optimizer"];
    m.optimizer.learning_rate = o.value("learning_rate", 0.01);
    m.optimizer.momentum = o.value("momentum", 0.9);
    m.optimizer.decay = o.value("decay", 1e-6);
    m.optimizer.epochs = o.value("epochs", std::size_t{30});
    m.optimizer.batch_size = o.value("batch_size", std::size_t{32});
    m.optimizer.rng_seed = o.value("rng_seed", std::uint64_t{0});
  }
  m.note = j.value("note", "");
  return m;
}

Network::Network(ArchitectureId id, std::size_t num_classes, double temperature,
                 double width_factor, bool final_relu,
                 std::vector<std::unique_ptr<numcore::Layer>> layers)
    : architecture_(id),
      num_classes_(num_classes),
      temperature_(temperature),
      width_factor_(width_factor),
      final_relu_(final_relu),
      layers_(std::move(layers)) {
  if (num_classes_ < 2) throw ParamError("network needs at least 2 classes");
  if (!(temperature_ > 0.0)) throw ParamError("temperature must be > 0");
}

Network::Network(const Network& other)
    : architecture_(other.architecture_),
      num_classes_(other.num_classes_),
      temperature_(other.temperature_),
      width_factor_(other.width_factor_),
      final_relu_(other.final_relu_),
      manifest_(other.manifest_) {
  layers_.reserve(other.layers_.size());
  for (const auto& l : other.layers_) layers_.push_back(l->clone());
}

Network& Network::operator=(const Network& other) {
  if (this == &other) return *this;
  Network tmp(other);
  *this = std::move(tmp);
  return *this;
}

std::vector<Tensor*> Network::params() {
  std::vector<Tensor*> out;
  for (auto& l : layers_) {
    for (Tensor* p : l->params()) out.push_back(p);
  }
  return out;
}

std::vector<Tensor*> Network::grads() {
  std::vector<Tensor*> out;
  for (auto& l : layers_) {
    for (Tensor* g : l->grads()) out.push_back(g);
  }
  return out;
}

void Network::zero_grads() {
  for (auto& l : layers_) l->zero_grads();
}

std::size_t Network::param_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) {
    for (Tensor* p : const_cast<numcore::Layer&>(*l).params()) n += p->size();
  }
  return n;
}

Tensor Network::forward(const Tensor& input, bool training, numcore::Rng* rng) {
  numcore::LayerContext ctx{training, rng};
  Tensor x = input;
  for (auto& l : layers_) x = l->forward(x, ctx);
  return x;
}

Tensor Network::backward_to_input(const Tensor& grad_output) {
  Tensor g = grad_output;
  for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) g = (*it)->backward(g);
  return g;
}

Prediction Network::predict(const Tensor& image) {
  return predict_at(image, temperature_);
}

Prediction Network::predict_at(const Tensor& image, double eval_temperature) {
  Tensor stack_out = forward(image, /*training=*/false);
  Prediction pred;
  // the stack output is Z(X)/T; recover the raw logits
  pred.logits = Tensor(stack_out.shape());
  for (std::size_t i = 0; i < stack_out.size(); ++i) {
    pred.logits[i] = stack_out[i] * temperature_;
  }
  pred.probs = numcore::temperature_softmax(pred.logits, eval_temperature);
  pred.top_k.reserve(pred.probs.size());
  for (std::size_t i = 0; i < pred.probs.size(); ++i) pred.top_k.emplace_back(i, pred.probs[i]);
  std::stable_sort(pred.top_k.begin(), pred.top_k.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  constexpr std::size_t kTop = 5;
  if (pred.top_k.size() > kTop) pred.top_k.resize(kTop);
  return pred;
}

Tensor Network::gradient_wrt_input(const Tensor& image, std::size_t target_label) {
  if (target_label >= num_classes_) {
    throw ParamError("target label " + std::to_string(target_label) + " out of range");
  }
  Tensor stack_out = forward(image, /*training=*/false);
  Tensor probs = numcore::temperature_softmax(stack_out, 1.0);
  Tensor seed(probs.shape());
  for (std::size_t i = 0; i < seed.size(); ++i) {
    seed[i] = probs[i] - (i == target_label ? 1.0 : 0.0);
  }
  zero_grads();
  Tensor grad = backward_to_input(seed);
  zero_grads();
  return grad;
}

Tensor Network::jacobian_wrt_input(const Tensor& image) {
  Tensor stack_out = forward(image, /*training=*/false);
  std::size_t n = stack_out.size();
  Tensor jac({n, image.size()});
  zero_grads();
  for (std::size_t c = 0; c < n; ++c) {
    Tensor seed(stack_out.shape());
    seed[c] = 1.0;
    Tensor grad = backward_to_input(seed);
    // rows are gradients of the raw logits Z(X), not the temperature-scaled ones
    for (std::size_t i = 0; i < grad.size(); ++i) jac(c, i) = grad[i] * temperature_;
  }
  zero_grads();
  return jac;
}

std::vector<std::vector<std::size_t>> Network::layer_output_shapes(
    const std::vector<std::size_t>& input_shape) const {
  std::vector<std::vector<std::size_t>> shapes;
  std::vector<std::size_t> cur = input_shape;
  for (const auto& l : layers_) {
    cur = l->output_shape(cur);
    shapes.push_back(cur);
  }
  return shapes;
}

std::string Network::identity_hash() const {
  return util::sha256_hex(serialize_model(*this));
}

}  // namespace signforge::models
