#include <doctest.h>

#include "signforge/numcore/optimizer.hpp"
#include "signforge/util/error.hpp"

using namespace signforge;
using numcore::OptimizerConfig;
using numcore::SgdOptimizer;
using numcore::Tensor;

TEST_CASE("zero gradient leaves parameters unchanged") {
  Tensor p({3}, {1.0, -2.0, 0.5});
  Tensor g({3});
  OptimizerConfig cfg;
  SgdOptimizer opt(cfg, {&p});
  opt.step({&p}, {&g});
  CHECK(p[0] == 1.0);
  CHECK(p[1] == -2.0);
  CHECK(p[2] == 0.5);
}

TEST_CASE("momentum=0 decay=0 is plain gradient descent") {
  Tensor p({1}, {2.0});
  Tensor g({1}, {0.5});
  OptimizerConfig cfg;
  cfg.learning_rate = 0.1;
  cfg.momentum = 0.0;
  cfg.decay = 0.0;
  SgdOptimizer opt(cfg, {&p});
  opt.step({&p}, {&g});
  CHECK(p[0] == doctest::Approx(2.0 - 0.1 * 0.5).epsilon(1e-15));
}

TEST_CASE("two momentum steps match the hand-unrolled recurrence") {
  OptimizerConfig cfg;
  cfg.learning_rate = 0.1;
  cfg.momentum = 0.9;
  cfg.decay = 0.01;
  Tensor p({1}, {1.0});
  SgdOptimizer opt(cfg, {&p});

  // hand-unrolled: lr_0 = 0.1, lr_1 = 0.1/(1+0.01)
  double v = 0.0, expect = 1.0;
  double g0 = 0.3, g1 = -0.2;

  Tensor g({1}, {g0});
  opt.step({&p}, {&g});
  v = 0.9 * v - 0.1 * g0;
  expect += v;
  CHECK(p[0] == doctest::Approx(expect).epsilon(1e-15));

  g[0] = g1;
  opt.step({&p}, {&g});
  v = 0.9 * v - (0.1 / 1.01) * g1;
  expect += v;
  CHECK(p[0] == doctest::Approx(expect).epsilon(1e-15));
  CHECK(opt.steps_taken() == 2);
}

TEST_CASE("learning rate decays per update") {
  OptimizerConfig cfg;
  cfg.learning_rate = 1.0;
  cfg.decay = 1.0;
  Tensor p({1});
  Tensor g({1});
  SgdOptimizer opt(cfg, {&p});
  CHECK(opt.current_learning_rate() == doctest::Approx(1.0));
  opt.step({&p}, {&g});
  CHECK(opt.current_learning_rate() == doctest::Approx(0.5));
  opt.step({&p}, {&g});
  CHECK(opt.current_learning_rate() == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("config validation") {
  OptimizerConfig cfg;
  cfg.learning_rate = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ParamError);
  cfg.learning_rate = 0.1;
  cfg.momentum = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ParamError);
  cfg.momentum = 0.9;
  cfg.epochs = 0;
  CHECK_THROWS_AS(cfg.validate(), ParamError);
}

TEST_CASE("optimizer rejects mismatched shapes") {
  Tensor p({2});
  Tensor g({3});
  OptimizerConfig cfg;
  SgdOptimizer opt(cfg, {&p});
  CHECK_THROWS_AS(opt.step({&p}, {&g}), ShapeError);
}
