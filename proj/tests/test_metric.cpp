#include <doctest.h>

#include <random>

#include "flcc/concave_fn.hpp"
#include "flcc/errors.hpp"
#include "flcc/metric.hpp"

using namespace flcc;
using K = MetricViolation::Kind;

TEST_CASE("two-point metric is valid") {
  Eigen::MatrixXd d(2, 2);
  d << 0, 1, 1, 0;
  CHECK(validate_metric(d, 0.0).empty());
}

TEST_CASE("triangle violation is reported") {
  Eigen::MatrixXd d(3, 3);
  d << 0, 1, 5, 1, 0, 1, 5, 1, 0;
  const auto v = validate_metric(d, 0.0);
  REQUIRE(v.size() == 1);
  CHECK(v[0] == MetricViolation{K::Triangle, 0, 1, 2});
}

TEST_CASE("asymmetry, diagonal, sign and shape") {
  Eigen::MatrixXd d(2, 2);
  d << 0, 1, 2, 0;
  auto v = validate_metric(d, 0.0);
  REQUIRE(!v.empty());
  CHECK(v[0].kind == K::Asymmetry);
  CHECK(v[0].a == 0);
  CHECK(v[0].b == 1);

  d << 1, 1, 1, 0;
  v = validate_metric(d, 0.0);
  REQUIRE(!v.empty());
  CHECK(v[0].kind == K::NonzeroDiagonal);

  d << 0, -1, -1, 0;
  v = validate_metric(d, 0.0);
  REQUIRE(!v.empty());
  CHECK(v[0].kind == K::Negative);

  CHECK(validate_metric(Eigen::MatrixXd::Zero(2, 3)).at(0).kind == K::NonSquare);
}

TEST_CASE("euclidean distances form a metric") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  Eigen::MatrixXd pts(12, 2);
  for (int i = 0; i < pts.rows(); ++i) pts.row(i) << u(rng), u(rng);
  CHECK(validate_metric(euclidean_distances(pts), 1e-9).empty());
}

TEST_CASE("bipartite triangle check") {
  Eigen::MatrixXd cf(2, 2);
  cf << 1, 2, 2, 1;
  CHECK(bipartite_triangle_ok(cf));
  cf << 1, 10, 1, 1;  // d(0,1) = 10 > d(0,0) + d(1,0) + d(1,1) = 3
  CHECK_FALSE(bipartite_triangle_ok(cf));
}

TEST_CASE("concave function evaluation") {
  ConcaveFn g({{0, 0}, {1, 1}, {3, 2}});
  CHECK(g(0) == doctest::Approx(0));
  CHECK(g(0.5) == doctest::Approx(0.5));
  CHECK(g(2) == doctest::Approx(1.5));
  CHECK(g(5) == doctest::Approx(3));  // last slope 0.5
  CHECK(g.last_slope() == doctest::Approx(0.5));
  CHECK(ConcaveFn()(7) == 0.0);
}

TEST_CASE("concave function invariants") {
  CHECK_THROWS_AS(ConcaveFn({{1, 0}}), ValidationError);                  // first x not 0
  CHECK_THROWS_AS(ConcaveFn({{0, 0}, {1, 1}, {1, 2}}), ValidationError);  // x not increasing
  CHECK_THROWS_AS(ConcaveFn({{0, 1}, {1, 0}}), ValidationError);          // decreasing
  CHECK_THROWS_AS(ConcaveFn({{0, 0}, {1, 1}, {2, 3}}), ValidationError);  // convex kink
  CHECK_THROWS_AS(ConcaveFn({{0, -1}}), ValidationError);
  CHECK_NOTHROW(ConcaveFn({{0, 2}, {1, 2}}));
}

TEST_CASE("concave function is concave and nondecreasing at random points") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 1);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<Breakpoint> pts{{0, u(rng)}};
    double slope = 2 * u(rng);
    for (int k = 0; k < 4; ++k) {
      const double w = 0.1 + u(rng);
      pts.push_back({pts.back().x + w, pts.back().y + slope * w});
      slope *= u(rng);
    }
    const ConcaveFn g(pts);
    double a = 5 * u(rng), b = 5 * u(rng), c = 5 * u(rng);
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    if (c - a < 1e-9) continue;
    const double lam = (c - b) / (c - a);
    CHECK(g(b) >= lam * g(a) + (1 - lam) * g(c) - 1e-12);
    CHECK(g(a) <= g(b) + 1e-12);
    CHECK(g(b) <= g(c) + 1e-12);
  }
}
