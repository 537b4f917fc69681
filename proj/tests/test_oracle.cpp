#include <doctest.h>

#include <random>

#include "flcc/errors.hpp"
#include "flcc/generator.hpp"
#include "flcc/oracle.hpp"
#include "flcc/reductions.hpp"

using namespace flcc;

namespace {

FlpmInstance two_clients() {
  FlpmInstance inst;
  inst.facilities = {{"A", 2.0}, {"B", 3.0}};
  inst.clients = {{"x", kInf, 1.0}, {"y", 1.0, 1.0}};
  inst.dist.resize(2, 2);
  inst.dist << 1, 3,
               3, 1;
  return inst;
}

}  // namespace

TEST_CASE("subset enumeration") {
  CHECK(nonempty_subsets(0).empty());
  const auto s = nonempty_subsets(3);
  CHECK(s.size() == 7);
  for (const auto& x : s) CHECK(std::is_sorted(x.begin(), x.end()));
}

TEST_CASE("brute FLPM example") {
  // Open A (2), connect x (1), y pays its penalty (1).
  const auto r = brute_flpm(two_clients());
  CHECK(r.value == doctest::Approx(4.0));
  CHECK(r.solution.open == std::vector<std::size_t>{0});
  CHECK_FALSE(r.solution.assignment[1].has_value());
  validate(r.solution, two_clients());
}

TEST_CASE("brute FLPM: empty set pays every penalty") {
  FlpmInstance inst;
  inst.facilities = {{"A", 10.0}};
  inst.clients = {{"x", 0.5, 2.0}};
  inst.dist = Eigen::MatrixXd::Constant(1, 1, 1.0);
  const auto r = brute_flpm(inst);
  CHECK(r.value == doctest::Approx(1.0));
  CHECK(r.solution.open.empty());
}

TEST_CASE("brute FLPM agrees with an independent enumeration") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    GenParams p;
    p.variant = GenParams::Variant::Flpm;
    p.n_fac = 1 + static_cast<int>(seed % 5);
    p.n_cli = 1 + static_cast<int>(seed % 7);
    p.seed = seed;
    const auto inst = generate_flpm(p);
    double best = kInf;
    for (unsigned mask = 0; mask < (1u << inst.num_facilities()); ++mask) {
      double c = 0;
      for (std::size_t i = 0; i < inst.num_facilities(); ++i)
        if (mask >> i & 1) c += inst.facilities[i].opening_cost;
      for (std::size_t j = 0; j < inst.num_clients(); ++j) {
        double v = inst.clients[j].penalty;
        for (std::size_t i = 0; i < inst.num_facilities(); ++i)
          if (mask >> i & 1) v = std::min(v, inst.dist(j, i));
        c += inst.clients[j].multiplicity * v;
      }
      best = std::min(best, c);
    }
    CHECK(brute_flpm(inst).value == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("oracle guards") {
  FlpmInstance big;
  big.facilities.assign(13, {"f", 1.0});
  big.clients = {{"c", kInf, 1.0}};
  big.dist = Eigen::MatrixXd::Ones(1, 13);
  for (int i = 0; i < 13; ++i) big.facilities[i].id = "f" + std::to_string(i);
  CHECK_THROWS_AS(brute_flpm(big), ScaleGuardError);
  CHECK_NOTHROW(brute_flpm(big, {true}));

  GenParams p;
  p.variant = GenParams::Variant::Sirpfl;
  p.n_fac = 5;
  p.n_cli = 2;
  CHECK_THROWS_AS(brute_sirpfl(generate_sirpfl(p)), ScaleGuardError);
}

TEST_CASE("brute SIRPFL equals the best open set of the reduced instance") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    GenParams p;
    p.variant = GenParams::Variant::Sirpfl;
    p.n_fac = 1 + static_cast<int>(seed % 3);
    p.n_cli = 1 + static_cast<int>(seed % 3);
    p.horizon = 1 + static_cast<int>(seed % 3);
    p.seed = seed;
    if (seed % 2 == 0) {
      p.capacity = 3;
      p.splittable = seed % 4 == 0;
    }
    const auto inst = generate_sirpfl(p);
    const auto b = brute_sirpfl(inst);
    CHECK(check_plan(b.plan, inst).empty());
    CHECK(b.plan.costs.total == doctest::Approx(b.value));
    const auto red = sirpfl_to_ncc(inst, exact_schedule_oracle(inst));
    double best = kInf;
    for (const auto& s : nonempty_subsets(inst.num_facilities())) best = std::min(best, ncc_cost(red.ncc, s));
    CHECK(b.value == doctest::Approx(best).epsilon(1e-9));
  }
}
