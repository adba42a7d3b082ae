#include <doctest.h>

#include <cmath>

#include "signforge/numcore/ops.hpp"
#include "signforge/numcore/rng.hpp"
#include "signforge/util/error.hpp"

using namespace signforge;
using numcore::Rng;
using numcore::Tensor;

TEST_CASE("temperature softmax: equal logits give the uniform vector") {
  for (double t : {0.5, 1.0, 100.0}) {
    Tensor logits = Tensor::full({5}, 3.25);
    Tensor p = numcore::temperature_softmax(logits, t);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(p[i] == doctest::Approx(0.2).epsilon(1e-12));
  }
}

TEST_CASE("temperature softmax: closed-form value at T=1") {
  // e^2/(e^2+1) evaluated directly
  Tensor p = numcore::temperature_softmax(Tensor({2}, {2.0, 0.0}), 1.0);
  CHECK(p[0] == doctest::Approx(0.880797).epsilon(1e-6));
  CHECK(p[1] == doctest::Approx(0.119203).epsilon(1e-6));
}

TEST_CASE("temperature softmax: high T approaches uniform and raises entropy") {
  Tensor logits({2}, {2.0, 0.0});
  Tensor hot = numcore::temperature_softmax(logits, 1000.0);
  CHECK(hot[0] == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(numcore::entropy_bits(hot) > numcore::entropy_bits(
                                         numcore::temperature_softmax(logits, 1.0)));
}

TEST_CASE("temperature softmax: sums to one with components in (0,1)") {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    Tensor logits({7});
    for (std::size_t i = 0; i < logits.size(); ++i) logits[i] = rng.uniform(-8.0, 8.0);
    for (double t : {0.5, 1.0, 10.0, 100.0}) {
      Tensor p = numcore::temperature_softmax(logits, t);
      double sum = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        CHECK(p[i] > 0.0);
        CHECK(p[i] < 1.0);
        sum += p[i];
      }
      CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("temperature softmax: max-subtraction keeps huge logits finite") {
  Tensor logits({3}, {5000.0, -5000.0, 4990.0});
  Tensor p = numcore::temperature_softmax(logits, 1.0);
  CHECK(p.all_finite());
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += p[i];
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.argmax() == 0);
}

TEST_CASE("temperature softmax: entropy non-decreasing in T, argmax invariant") {
  Rng rng(23);
  const double grid[] = {0.5, 1.0, 10.0, 100.0};
  for (int trial = 0; trial < 200; ++trial) {
    Tensor logits({9});
    for (std::size_t i = 0; i < logits.size(); ++i) logits[i] = rng.uniform(-8.0, 8.0);
    std::size_t base_argmax = numcore::temperature_softmax(logits, grid[0]).argmax();
    double prev_entropy = -1.0;
    for (double t : grid) {
      Tensor p = numcore::temperature_softmax(logits, t);
      CHECK(p.argmax() == base_argmax);
      double h = numcore::entropy_bits(p);
      CHECK(h >= prev_entropy - 1e-12);
      prev_entropy = h;
    }
  }
}

TEST_CASE("temperature softmax rejects T <= 0") {
  Tensor logits({2}, {1.0, 2.0});
  CHECK_THROWS_AS(numcore::temperature_softmax(logits, 0.0), ParamError);
  CHECK_THROWS_AS(numcore::temperature_softmax(logits, -3.0), ParamError);
}

TEST_CASE("cross entropy: matching one-hot is ~0, uniform is ln(N)") {
  Tensor onehot = numcore::one_hot(1, 3);
  Tensor probs({3}, {0.0, 1.0, 0.0});
  CHECK(numcore::cross_entropy_loss(probs, onehot) == doctest::Approx(0.0).epsilon(1e-9));

  Tensor uniform = Tensor::full({43}, 1.0 / 43.0);
  CHECK(numcore::cross_entropy_loss(uniform, numcore::one_hot(7, 43)) ==
        doctest::Approx(std::log(43.0)).epsilon(1e-9));
  CHECK(std::log(43.0) == doctest::Approx(3.7612).epsilon(1e-4));
}

TEST_CASE("cross entropy: soft targets against the direct-summation oracle") {
  Tensor target({3}, {0.7, 0.2, 0.1});
  Tensor probs({3}, {0.5, 0.3, 0.2});
  // oracle: -sum(target_i * ln(probs_i)) accumulated term by term
  double expected = 0.0;
  for (int i = 0; i < 3; ++i) expected -= target[i] * std::log(probs[i]);
  CHECK(expected == doctest::Approx(0.886941).epsilon(1e-5));
  CHECK(numcore::cross_entropy_loss(probs, target) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("cross entropy: clamp keeps confident-wrong losses finite") {
  Tensor probs({2}, {1.0, 0.0});
  Tensor target({2}, {0.0, 1.0});
  double loss = numcore::cross_entropy_loss(probs, target);
  CHECK(std::isfinite(loss));
  CHECK(loss == doctest::Approx(-std::log(1e-12)));
  CHECK(loss >= 0.0);
}

TEST_CASE("cross entropy rejects length mismatch") {
  CHECK_THROWS_AS(numcore::cross_entropy_loss(Tensor({2}), Tensor({3})), ShapeError);
}

TEST_CASE("entropy helpers") {
  Tensor uniform = Tensor::full({8}, 0.125);
  CHECK(numcore::entropy_bits(uniform) == doctest::Approx(3.0).epsilon(1e-12));
  Tensor point = numcore::one_hot(0, 8);
  CHECK(numcore::entropy_bits(point) == doctest::Approx(0.0));
}
