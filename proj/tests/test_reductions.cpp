#include <doctest.h>

#include <cmath>
#include <random>

#include "flcc/errors.hpp"
#include "flcc/generator.hpp"
#include "flcc/oracle.hpp"
#include "flcc/reductions.hpp"

using namespace flcc;

namespace {

std::vector<double> mult(std::vector<Breakpoint> pts, std::vector<double> d) {
  return multiplicities(ConcaveFn(std::move(pts)), d);
}

void check_all_close(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-12));
}

ConcaveFn random_concave(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Breakpoint> pts{{0, 0}};
  double slope = 0.5 + 1.5 * u(rng);
  for (int k = 0; k < 1 + static_cast<int>(4 * u(rng)); ++k) {
    const double w = 0.05 + u(rng);
    pts.push_back({pts.back().x + w, pts.back().y + slope * w});
    slope *= u(rng);
  }
  return ConcaveFn(std::move(pts));
}

}  // namespace

TEST_CASE("multiplicity examples") {
  check_all_close(mult({{0, 0}, {1, 1}, {2, 1.5}, {4, 2}}, {1, 2, 4}), {0.5, 0.25, 0.25});
  check_all_close(mult({{0, 0}, {1, 2}}, {1, 3}), {0, 2});
  check_all_close(mult({{0, 0}, {1, 1}, {2, 1}}, {1, 2}), {1, 0});
  CHECK_THROWS_AS(mult({{0, 0}, {1, 1}}, {2, 1}), ValidationError);
  CHECK_THROWS_AS(mult({{0, 0}, {1, 1}}, {0, 1}), ValidationError);
}

TEST_CASE("multiplicities reproduce g at every distance") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0, 1);
  for (int rep = 0; rep < 500; ++rep) {
    const auto g = random_concave(rng);
    std::vector<double> d;
    double x = 0;
    for (int k = 0; k < 1 + rep % 6; ++k) d.push_back(x += 0.01 + u(rng));
    const auto m = multiplicities(g, d);
    for (double mk : m) CHECK(mk >= -1e-12);
    for (std::size_t k = 0; k < d.size(); ++k) {
      double v = 0;
      for (std::size_t i = 0; i < d.size(); ++i) v += m[i] * std::min(d[i], d[k]);
      CHECK(std::abs(v - g(d[k])) <= 1e-9 * (1 + g(d[k])));
    }
  }
}

TEST_CASE("NCC to FLPM preserves the cost of every open set") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    GenParams p;
    p.variant = GenParams::Variant::Ncc;
    p.n_fac = 1 + static_cast<int>(seed % 4);
    p.n_cli = 1 + static_cast<int>(seed % 5);
    p.seed = seed;
    const auto ncc = generate_ncc(p);
    const auto red = ncc_to_flpm(ncc);
    validate(red.flpm);
    REQUIRE(red.map.sources.size() == ncc.num_clients());
    double best_ncc = kInf;
    for (const auto& s : nonempty_subsets(ncc.num_facilities())) {
      const double a = ncc_cost(ncc, s);
      best_ncc = std::min(best_ncc, a);
      CHECK(evaluate_open_set(red.flpm, s).total == doctest::Approx(a).epsilon(1e-9));
    }
    // The reduced side may also close everything and pay sum_j g_j(max distance).
    CHECK(brute_flpm(red.flpm).value <= best_ncc + 1e-9);
  }
}

TEST_CASE("NCC to FLPM co-locates copies") {
  NccInstance ncc;
  ncc.facilities = {{"A", 1.0}, {"B", 1.0}};
  ncc.clients = {{"c", ConcaveFn({{0, 0}, {1, 1}, {2, 1.5}, {4, 2}})}};
  ncc.dist.resize(1, 2);
  ncc.dist << 1, 4;
  const auto red = ncc_to_flpm(ncc);
  const auto& src = red.map.sources[0];
  check_all_close(src.distances, {1, 4});
  // g(1)=1, g(4)=2: slopes 1 then 1/3.
  check_all_close(src.multiplicities, {1 - 1.0 / 3, 1.0 / 3});
  REQUIRE(red.flpm.num_clients() == 2);
  for (Eigen::Index c = 0; c < 2; ++c) {
    CHECK(red.flpm.dist(c, 0) == 1.0);
    CHECK(red.flpm.dist(c, 1) == 4.0);
  }
  CHECK(red.flpm.clients[0].penalty == 1.0);
  CHECK(red.flpm.clients[1].penalty == 4.0);
}

TEST_CASE("SIRPFL to NCC: envelope equals the exact cost at every breakpoint") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    GenParams p;
    p.variant = GenParams::Variant::Sirpfl;
    p.n_fac = 1 + static_cast<int>(seed % 3);
    p.n_cli = 1 + static_cast<int>(seed % 3);
    p.horizon = 1 + static_cast<int>(seed % 4);
    p.seed = seed;
    if (seed % 3 == 1) p.capacity = 3, p.splittable = seed % 2 == 0;
    const auto inst = generate_sirpfl(p);
    const auto oracle = exact_schedule_oracle(inst);
    const auto red = sirpfl_to_ncc(inst, oracle);
    validate(red.ncc);
    for (std::size_t j = 0; j < inst.num_clients(); ++j) {
      const auto series = DemandSeries::of(inst.clients[j]);
      const auto& g = red.ncc.clients[j].g;
      CHECK(g(0.0) == doctest::Approx(0.0));
      for (std::size_t b = 0; b < red.breakpoints[j].size(); ++b) {
        const double x = red.breakpoints[j][b];
        const double exact = oracle(series, x).cost(x);
        CHECK(g(x) == doctest::Approx(exact).epsilon(1e-9));
        CHECK(red.schedules[j][b].cost(x) == doctest::Approx(exact).epsilon(1e-9));
        CHECK(check_schedule(red.schedules[j][b], series, inst.capacity, inst.splittable).empty());
      }
    }
  }
}

TEST_CASE("lift_solution prices to the NCC cost") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    GenParams p;
    p.variant = GenParams::Variant::Sirpfl;
    p.n_fac = 1 + static_cast<int>(seed % 4);
    p.n_cli = 1 + static_cast<int>(seed % 3);
    p.seed = 100 + seed;
    const auto inst = generate_sirpfl(p);
    const auto red = sirpfl_to_ncc(inst, exact_schedule_oracle(inst));
    for (const auto& s : nonempty_subsets(inst.num_facilities())) {
      const auto plan = lift_solution(s, inst, red);
      CHECK(check_plan(plan, inst).empty());
      CHECK(plan.costs.total == doctest::Approx(ncc_cost(red.ncc, s)).epsilon(1e-9));
    }
    CHECK_THROWS_AS(lift_solution({}, inst, red), ValidationError);
  }
}

TEST_CASE("capacitated lambda") {
  const auto three = capacitated_lambda(3);
  CHECK(three.lambda_f == doctest::Approx(3.23594).epsilon(1e-5));
  CHECK(three.ratio == doctest::Approx(3.236).epsilon(1e-4));
  CHECK(capacitated_lambda(6).ratio == doctest::Approx(6.029).epsilon(1e-4));
  CHECK(connection_factor(0) == 3.0);
  CHECK_THROWS_AS(capacitated_lambda(0.5), ValidationError);

  // independent oracle: 60 halvings of lambda - (1 + 2 e^{-lambda}) on [0, 10]
  double lo = 0, hi = 10;
  for (int it = 0; it < 60; ++it) {
    const double mid = (lo + hi) / 2;
    (mid - (1 + 2 * std::exp(-mid)) < 0 ? lo : hi) = mid;
  }
  const auto one = capacitated_lambda(1);
  CHECK(std::abs(one.lambda_f - lo) <= 1e-12);
  CHECK(std::abs(one.ratio - one.lambda_f) <= 1e-9);
}
