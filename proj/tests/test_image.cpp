#include <doctest.h>

#include "horizon/image.hpp"

using namespace horizon;

TEST_CASE("storage is row-major in j") {
  ImageGrid g(3);
  g(2, 0) = 5.0;
  g(0, 1) = 7.0;
  CHECK(g.values()[2] == 5.0);
  CHECK(g.values()[3] == 7.0);
  CHECK(g.row(1)[0] == 7.0);
}

TEST_CASE("periodic access wraps negative and large indices") {
  ImageGrid g(4);
  g(3, 0) = 1.5;
  g(0, 3) = 2.5;
  CHECK(g.wrapped(-1, 0) == 1.5);
  CHECK(g.wrapped(7, 4) == 1.5);
  CHECK(g.wrapped(0, -1) == 2.5);
  CHECK(g.wrap(-9) == 3);
}

TEST_CASE("bounds-checked access") {
  ImageGrid g(2, 1.0);
  CHECK(g.at(1, 1) == 1.0);
  CHECK_THROWS_AS(g.at(2, 0), IndexOutOfBounds);
  CHECK_THROWS_AS(g.at(0, -1), IndexOutOfBounds);
}

TEST_CASE("construction checks the data size") {
  CHECK_THROWS_AS(ImageGrid(2, std::vector<double>{1.0, 2.0, 3.0}), InvalidArgument);
  CHECK_THROWS_AS(ImageGrid(0), InvalidArgument);
}

TEST_CASE("summary statistics and mean squared error") {
  ImageGrid a(2, std::vector<double>{0.0, 1.0, 2.0, 3.0});
  ImageGrid b(2, std::vector<double>{1.0, 1.0, 2.0, 1.0});
  CHECK(a.mean() == doctest::Approx(1.5));
  CHECK(a.min() == 0.0);
  CHECK(a.max() == 3.0);
  CHECK(mean_squared_error(a, b) == doctest::Approx((1.0 + 0.0 + 0.0 + 4.0) / 4.0));
  CHECK_THROWS_AS(mean_squared_error(a, ImageGrid(3)), InvalidArgument);
}
