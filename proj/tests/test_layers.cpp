#include <doctest.h>

#include <functional>

#include "oracles.hpp"
#include "signforge/numcore/layers.hpp"
#include "signforge/numcore/rng.hpp"
#include "signforge/util/error.hpp"

using namespace signforge;
using numcore::LayerContext;
using numcore::LayerSpec;
using numcore::Padding;
using numcore::Rng;
using numcore::Tensor;

namespace {

Tensor random_tensor(std::vector<std::size_t> shape, Rng& rng, double lo = -1.0,
                     double hi = 1.0) {
  Tensor t(std::move(shape));
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(lo, hi);
  return t;
}

// Scalarizes the layer output with fixed random weights and checks the
// analytic input/parameter gradients against central finite differences.
// make_ctx() lets dropout re-seed its stream so every forward call sees the
// identical mask.
void check_layer_gradients(numcore::Layer& layer, Tensor input,
                           const std::function<LayerContext()>& make_ctx, Rng& rng,
                           double tolerance = 1e-5) {
  LayerContext ctx = make_ctx();
  Tensor out = layer.forward(input, ctx);
  Tensor scalarizer = random_tensor(out.shape(), rng);

  auto loss = [&]() {
    LayerContext c = make_ctx();
    Tensor o = layer.forward(input, c);
    double acc = 0.0;
    for (std::size_t i = 0; i < o.size(); ++i) acc += scalarizer[i] * o[i];
    return acc;
  };

  layer.zero_grads();
  // re-run forward so caches match the unperturbed input before backward
  layer.forward(input, make_ctx());
  Tensor grad_input = layer.backward(scalarizer);
  std::vector<Tensor> param_grads;
  for (Tensor* g : layer.grads()) param_grads.push_back(*g);

  for (std::size_t i = 0; i < input.size(); ++i) {
    double numeric = oracles::central_difference(loss, input.values()[i]);
    CHECK(oracles::grad_error(grad_input[i], numeric) < tolerance);
  }
  auto params = layer.params();
  for (std::size_t t = 0; t < params.size(); ++t) {
    for (std::size_t i = 0; i < params[t]->size(); ++i) {
      double numeric = oracles::central_difference(loss, params[t]->values()[i]);
      CHECK(oracles::grad_error(param_grads[t][i], numeric) < tolerance);
    }
  }
}

LayerContext eval_ctx() { return LayerContext{false, nullptr}; }

}  // namespace

TEST_CASE("conv2d forward: zero input gives zero output") {
  auto layer = numcore::make_layer(LayerSpec::conv2d(2, 2, 3, 1, Padding::Valid), {3, 3, 1});
  Rng rng(7);
  auto* conv = static_cast<numcore::Conv2dLayer*>(layer.get());
  conv->kernel() = random_tensor({2, 2, 1, 3}, rng);
  Tensor input({3, 3, 1});
  Tensor out = layer->forward(input, eval_ctx());
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == 0.0);
}

TEST_CASE("conv2d forward: 1x1 identity kernel reproduces the input") {
  auto layer = numcore::make_layer(LayerSpec::conv2d(1, 1, 1, 1, Padding::Valid), {4, 5, 1});
  static_cast<numcore::Conv2dLayer*>(layer.get())->kernel()[0] = 1.0;
  Rng rng(11);
  Tensor input = random_tensor({4, 5, 1}, rng);
  Tensor out = layer->forward(input, eval_ctx());
  REQUIRE(out.shape() == input.shape());
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == doctest::Approx(input[i]));
}

TEST_CASE("conv2d forward matches the direct-convolution oracle") {
  Rng rng(123);
  auto spec = LayerSpec::conv2d(3, 3, 4, 1, Padding::Valid);
  auto layer = numcore::make_layer(spec, {5, 5, 2});
  auto* conv = static_cast<numcore::Conv2dLayer*>(layer.get());
  conv->kernel() = random_tensor({3, 3, 2, 4}, rng);
  conv->bias() = random_tensor({4}, rng);
  Tensor input = random_tensor({5, 5, 2}, rng);

  Tensor out = layer->forward(input, eval_ctx());
  Tensor expected =
      oracles::direct_conv2d(input, conv->kernel(), conv->bias(), 1, 1, 0, 0, 0, 0);
  REQUIRE(out.shape() == expected.shape());
  for (std::size_t i = 0; i < out.size(); ++i) {
    CHECK(std::abs(out[i] - expected[i]) < 1e-12);
  }
}

TEST_CASE("conv2d forward equals oracle over small shape/stride/pad grid") {
  Rng rng(321);
  for (std::size_t h : {3u, 5u, 8u}) {
    for (std::size_t k : {1u, 2u, 3u}) {
      for (std::size_t stride : {1u, 2u}) {
        for (Padding pad : {Padding::Valid, Padding::SameZero}) {
          if (pad == Padding::Valid && k > h) continue;
          auto spec = LayerSpec::conv2d(k, k, 2, stride, pad);
          auto layer = numcore::make_layer(spec, {h, h, 2});
          auto* conv = static_cast<numcore::Conv2dLayer*>(layer.get());
          conv->kernel() = random_tensor({k, k, 2, 2}, rng);
          conv->bias() = random_tensor({2}, rng);
          Tensor input = random_tensor({h, h, 2}, rng);
          Tensor out = layer->forward(input, eval_ctx());

          // reproduce the layer's same-padding arithmetic for the oracle
          std::size_t pt = 0, pb = 0, pl = 0, pr = 0;
          if (pad == Padding::SameZero) {
            std::size_t out_dim = (h + stride - 1) / stride;
            std::size_t need = (out_dim - 1) * stride + k;
            std::size_t total = need > h ? need - h : 0;
            pt = pl = total / 2;
            pb = pr = total - total / 2;
          }
          Tensor expected = oracles::direct_conv2d(input, conv->kernel(), conv->bias(),
                                                   stride, stride, pt, pb, pl, pr);
          REQUIRE(out.shape() == expected.shape());
          for (std::size_t i = 0; i < out.size(); ++i) {
            CHECK(std::abs(out[i] - expected[i]) < 1e-12);
          }
        }
      }
    }
  }
}

TEST_CASE("conv2d rejects channel mismatch with the axis named") {
  auto layer = numcore::make_layer(LayerSpec::conv2d(3, 3, 4, 1, Padding::Valid), {5, 5, 2});
  Tensor wrong({5, 5, 3});
  try {
    layer->forward(wrong, eval_ctx());
    FAIL("expected ShapeError");
  } catch (const ShapeError& e) {
    CHECK(std::string(e.what()).find("axis (2)") != std::string::npos);
  }
}

TEST_CASE("conv2d rejects kernel larger than valid input") {
  auto layer = numcore::make_layer(LayerSpec::conv2d(6, 6, 2, 1, Padding::Valid), {5, 5, 1});
  Tensor input({5, 5, 1});
  CHECK_THROWS_AS(layer->forward(input, eval_ctx()), ShapeError);
}

TEST_CASE("conv2d backward: zero upstream gradient zeroes everything") {
  auto layer = numcore::make_layer(LayerSpec::conv2d(2, 2, 2, 1, Padding::Valid), {4, 4, 2});
  Rng rng(5);
  auto* conv = static_cast<numcore::Conv2dLayer*>(layer.get());
  conv->kernel() = random_tensor({2, 2, 2, 2}, rng);
  Tensor input = random_tensor({4, 4, 2}, rng);
  Tensor out = layer->forward(input, eval_ctx());
  layer->zero_grads();
  Tensor grad_in = layer->backward(Tensor(out.shape()));
  for (std::size_t i = 0; i < grad_in.size(); ++i) CHECK(grad_in[i] == 0.0);
  for (Tensor* g : layer->grads()) {
    for (std::size_t i = 0; i < g->size(); ++i) CHECK((*g)[i] == 0.0);
  }
}

TEST_CASE("conv2d backward: all-ones 1x1 kernel sums the input window") {
  // d(sum of outputs)/d(kernel) = sum over input values it touches
  auto layer = numcore::make_layer(LayerSpec::conv2d(1, 1, 1, 1, Padding::Valid), {3, 3, 1});
  auto* conv = static_cast<numcore::Conv2dLayer*>(layer.get());
  conv->kernel()[0] = 1.0;
  Rng rng(9);
  Tensor input = random_tensor({3, 3, 1}, rng);
  Tensor out = layer->forward(input, eval_ctx());
  layer->zero_grads();
  layer->backward(Tensor::full(out.shape(), 1.0));
  double input_sum = 0.0;
  for (std::size_t i = 0; i < input.size(); ++i) input_sum += input[i];
  CHECK(conv->grads()[0]->values()[0] == doctest::Approx(input_sum).epsilon(1e-10));
}

TEST_CASE("conv2d gradients match finite differences") {
  Rng rng(42);
  for (int trial = 0; trial < 3; ++trial) {
    auto spec = LayerSpec::conv2d(3, 3, 2, trial == 2 ? 2 : 1,
                                  trial == 1 ? Padding::SameZero : Padding::Valid);
    auto layer = numcore::make_layer(spec, {5, 5, 2});
    auto* conv = static_cast<numcore::Conv2dLayer*>(layer.get());
    conv->kernel() = random_tensor(conv->kernel().shape(), rng);
    conv->bias() = random_tensor({2}, rng);
    Tensor input = random_tensor({5, 5, 2}, rng);
    check_layer_gradients(*layer, input, eval_ctx, rng);
  }
}

TEST_CASE("relu definitional values and gradient") {
  numcore::ReluLayer relu;
  Tensor input({3}, {-1.0, 0.0, 2.0});
  Tensor out = relu.forward(input, eval_ctx());
  CHECK(out[0] == 0.0);
  CHECK(out[1] == 0.0);
  CHECK(out[2] == 2.0);

  Tensor grad = relu.backward(Tensor({3}, {1.0, 1.0, 1.0}));
  CHECK(grad[0] == 0.0);
  CHECK(grad[1] == 0.0);  // subgradient at 0 chosen as 0
  CHECK(grad[2] == 1.0);
}

TEST_CASE("maxpool definitional forward/backward and tie handling") {
  auto layer = numcore::make_layer(LayerSpec::max_pool(2, 2), {2, 2, 1});
  Tensor input({2, 2, 1}, {1.0, 2.0, 3.0, 4.0});
  Tensor out = layer->forward(input, eval_ctx());
  REQUIRE(out.size() == 1);
  CHECK(out[0] == 4.0);
  Tensor grad = layer->backward(Tensor({1, 1, 1}, {1.0}));
  CHECK(grad[0] == 0.0);
  CHECK(grad[1] == 0.0);
  CHECK(grad[2] == 0.0);
  CHECK(grad[3] == 1.0);  // position (1,1)

  // tie: gradient goes to the first max in row-major scan order
  Tensor tied({2, 2, 1}, {5.0, 5.0, 5.0, 5.0});
  layer->forward(tied, eval_ctx());
  Tensor tied_grad = layer->backward(Tensor({1, 1, 1}, {1.0}));
  CHECK(tied_grad[0] == 1.0);
  CHECK(tied_grad[1] == 0.0);
}

TEST_CASE("maxpool rejects window exceeding input") {
  auto layer = numcore::make_layer(LayerSpec::max_pool(3, 1), {2, 2, 1});
  Tensor input({2, 2, 1});
  CHECK_THROWS_AS(layer->forward(input, eval_ctx()), ShapeError);
}

TEST_CASE("maxpool gradient matches finite differences") {
  // distinct random values keep the argmax stable under the probe step
  Rng rng(77);
  auto layer = numcore::make_layer(LayerSpec::max_pool(2, 2), {4, 4, 2});
  Tensor input = random_tensor({4, 4, 2}, rng, 0.0, 1.0);
  check_layer_gradients(*layer, input, eval_ctx, rng);
}

TEST_CASE("dense 4->3 gradient matches finite differences") {
  Rng rng(13);
  auto layer = numcore::make_layer(LayerSpec::dense(3), {4});
  auto* dense = static_cast<numcore::DenseLayer*>(layer.get());
  dense->weights() = random_tensor({4, 3}, rng);
  dense->bias() = random_tensor({3}, rng);
  Tensor input = random_tensor({4}, rng);
  check_layer_gradients(*layer, input, eval_ctx, rng);
}

TEST_CASE("flatten round-trips shape through backward") {
  numcore::FlattenLayer flatten;
  Rng rng(3);
  Tensor input = random_tensor({2, 3, 2}, rng);
  Tensor out = flatten.forward(input, eval_ctx());
  CHECK(out.shape() == std::vector<std::size_t>{12});
  Tensor grad = flatten.backward(out);
  CHECK(grad.shape() == input.shape());
}

TEST_CASE("dropout is identity in eval mode and scales in train mode") {
  auto layer = numcore::make_layer(LayerSpec::dropout(0.5), {100});
  Rng rng(2024);
  Tensor input = random_tensor({100}, rng, 1.0, 2.0);

  Tensor eval_out = layer->forward(input, eval_ctx());
  for (std::size_t i = 0; i < input.size(); ++i) CHECK(eval_out[i] == input[i]);

  Rng drop_rng(55);
  LayerContext train_ctx{true, &drop_rng};
  Tensor train_out = layer->forward(input, train_ctx);
  std::size_t kept = 0;
  for (std::size_t i = 0; i < input.size(); ++i) {
    bool zeroed = train_out[i] == 0.0;
    bool scaled = train_out[i] == doctest::Approx(input[i] * 2.0);
    CHECK((zeroed || scaled));
    kept += scaled ? 1 : 0;
  }
  CHECK(kept > 20);
  CHECK(kept < 80);

  // same seed, same mask
  Rng drop_rng2(55);
  LayerContext ctx2{true, &drop_rng2};
  Tensor repeat = layer->forward(input, ctx2);
  for (std::size_t i = 0; i < input.size(); ++i) CHECK(repeat[i] == train_out[i]);
}

TEST_CASE("dropout train-mode gradient matches finite differences") {
  Rng rng(8);
  auto layer = numcore::make_layer(LayerSpec::dropout(0.25), {20});
  Tensor input = random_tensor({20}, rng);
  auto seeded_ctx = [] {
    static thread_local Rng r(99);
    r = Rng(99);  // identical mask for every probe evaluation
    return LayerContext{true, &r};
  };
  check_layer_gradients(*layer, input, seeded_ctx, rng);
}

TEST_CASE("dropout requires rng in training mode") {
  auto layer = numcore::make_layer(LayerSpec::dropout(0.5), {4});
  Tensor input({4});
  LayerContext ctx{true, nullptr};
  CHECK_THROWS_AS(layer->forward(input, ctx), ParamError);
}

TEST_CASE("temperature scale divides and backpropagates by 1/T") {
  numcore::TemperatureScaleLayer layer(LayerSpec::temperature_scale(4.0));
  Tensor input({2}, {8.0, -2.0});
  Tensor out = layer.forward(input, eval_ctx());
  CHECK(out[0] == 2.0);
  CHECK(out[1] == -0.5);
  Tensor grad = layer.backward(Tensor({2}, {1.0, 2.0}));
  CHECK(grad[0] == 0.25);
  CHECK(grad[1] == 0.5);
}

TEST_CASE("layer spec validation rejects bad parameters") {
  CHECK_THROWS_AS(LayerSpec::dropout(1.0), ParamError);
  CHECK_THROWS_AS(LayerSpec::dropout(-0.1), ParamError);
  CHECK_THROWS_AS(LayerSpec::temperature_scale(0.0), ParamError);
  CHECK_THROWS_AS(LayerSpec::conv2d(0, 3, 4, 1, Padding::Valid), ParamError);
  CHECK_THROWS_AS(LayerSpec::dense(0), ParamError);
}

TEST_CASE("random layer backward sweep against finite differences") {
  // a compact version of the acceptance gradient gate: every layer kind,
  // several random shapes each
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed * 1000);

    auto conv = numcore::make_layer(LayerSpec::conv2d(2, 3, 2, 1, Padding::SameZero),
                                    {4, 5, 3});
    auto* c = static_cast<numcore::Conv2dLayer*>(conv.get());
    c->kernel() = random_tensor(c->kernel().shape(), rng);
    c->bias() = random_tensor({2}, rng);
    check_layer_gradients(*conv, random_tensor({4, 5, 3}, rng), eval_ctx, rng);

    numcore::ReluLayer relu;
    // keep values away from the kink so the numeric probe stays valid
    Tensor relu_in = random_tensor({17}, rng);
    for (std::size_t i = 0; i < relu_in.size(); ++i) {
      if (std::abs(relu_in[i]) < 1e-3) relu_in[i] = 0.5;
    }
    check_layer_gradients(relu, relu_in, eval_ctx, rng);

    auto dense = numcore::make_layer(LayerSpec::dense(5), {7});
    auto* d = static_cast<numcore::DenseLayer*>(dense.get());
    d->weights() = random_tensor({7, 5}, rng);
    d->bias() = random_tensor({5}, rng);
    check_layer_gradients(*dense, random_tensor({7}, rng), eval_ctx, rng);

    numcore::TemperatureScaleLayer temp(LayerSpec::temperature_scale(10.0));
    check_layer_gradients(temp, random_tensor({9}, rng), eval_ctx, rng);
  }
}
