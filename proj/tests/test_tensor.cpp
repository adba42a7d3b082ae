#include <doctest.h>

#include <limits>

#include "signforge/numcore/tensor.hpp"
#include "signforge/util/error.hpp"

using namespace signforge;
using numcore::Tensor;

TEST_CASE("tensor shape/data consistency") {
  Tensor t({2, 3});
  CHECK(t.size() == 6);
  CHECK(t.rank() == 2);
  t(1, 2) = 5.0;
  CHECK(t[5] == 5.0);

  CHECK_THROWS_AS(Tensor({2, 3}, {1.0, 2.0}), ShapeError);
  CHECK_THROWS_AS(Tensor({0, 3}), ShapeError);
}

TEST_CASE("reshape preserves data and checks element count") {
  Tensor t({2, 2}, {1, 2, 3, 4});
  auto r = t.reshaped({4});
  CHECK(r[3] == 4.0);
  CHECK_THROWS_AS(t.reshaped({3}), ShapeError);
}

TEST_CASE("argmax returns first maximum") {
  Tensor t({4}, {1.0, 3.0, 3.0, 0.0});
  CHECK(t.argmax() == 1);
}

TEST_CASE("one_hot") {
  auto t = numcore::one_hot(2, 4);
  CHECK(t[2] == 1.0);
  CHECK(t[0] == 0.0);
  CHECK_THROWS_AS(numcore::one_hot(4, 4), ParamError);
}

TEST_CASE("all_finite flags NaN and Inf") {
  Tensor t({2}, {1.0, 2.0});
  CHECK(t.all_finite());
  t[1] = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(t.all_finite());
}
