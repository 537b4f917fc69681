#include <doctest.h>

#include <algorithm>
#include <random>

#include "flcc/errors.hpp"
#include "flcc/frlp.hpp"
#include "flcc/generator.hpp"
#include "flcc/jms.hpp"

using namespace flcc;

namespace {

// Two co-located clients at distance 1 from the facility, opened at time 1.
FrSolution flat_pair() {
  auto s = FrSolution::zeros(2);
  s.t << 1, 1;
  s.d << 1, 1;
  s.p << 2, 2;
  s.r(0, 1) = 1;
  return s;
}

bool has(const std::vector<FrViolation>& v, FrConstraint c) {
  return std::any_of(v.begin(), v.end(), [c](const FrViolation& x) { return x.constraint == c; });
}

}  // namespace

TEST_CASE("feasibility checks") {
  const auto s = flat_pair();
  CHECK(check_feasible_P(s).empty());
  CHECK(eval_P(s, 1.0) == doctest::Approx(1.0));

  auto bad = s;
  bad.t << 2, 1;
  CHECK(has(check_feasible_P(bad), FrConstraint::TMonotone));
  bad = s;
  bad.p(0) = 0.5;
  CHECK(has(check_feasible_P(bad), FrConstraint::PAboveD));
  bad = s;
  bad.r(0, 1) = 2;
  CHECK(has(check_feasible_P(bad), FrConstraint::RBelowT));
  bad = s;
  bad.d << 0.1, 0.1;
  bad.r(0, 1) = 0.1;
  const auto v = check_feasible_P(bad);
  CHECK(has(v, FrConstraint::Metric));
  CHECK(has(v, FrConstraint::Opening));
  CHECK_FALSE(v.front().describe().empty());
  bad = s;
  bad.f = -1;
  CHECK(has(check_feasible_P(bad), FrConstraint::Nonnegative));
  bad = s;
  bad.d.resize(3);
  CHECK(has(check_feasible_P(bad), FrConstraint::Dimensions));

  auto z = s;
  CHECK(has(check_feasible_P1(z), FrConstraint::Dimensions));
  z.z = Eigen::VectorXd::Constant(2, 1.5);
  CHECK(has(check_feasible_P1(z), FrConstraint::ZRange));
  z.z = Eigen::VectorXd::Constant(2, 0.3);
  CHECK(check_feasible_P1(z).empty());
  CHECK(has(check_feasible_P2(z, 2), FrConstraint::ZGrid));
  z.z = Eigen::VectorXd::Constant(2, 0.5);
  CHECK(check_feasible_P2(z, 2).empty());

  const std::vector<std::int64_t> m{1, 2};
  CHECK(check_feasible_Phat(s, m).empty());
}

TEST_CASE("objective examples") {
  auto s = FrSolution::zeros(2);
  s.t << 1, 2;
  s.d << 0.5, 0.5;
  s.p << 1.5, kInf;
  s.f = 0.2;
  CHECK(eval_P(s, 1.0) == doctest::Approx(2.8));
  s.z = Eigen::Vector2d(0.5, 0.0);
  CHECK(eval_P1(s, 1.0) == doctest::Approx(1.05));
  const std::vector<std::int64_t> m{2, 1};
  CHECK(eval_Phat(s, m, 1.0) == doctest::Approx(3.8 / 1.5));
}

TEST_CASE("step 1") {
  auto s = FrSolution::zeros(4);
  s.t << 2, 2, 3, 3;
  s.d << 1, 1, 3, 3.5;
  s.p << 1.5, 5, 3, 4;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < i; ++j) s.r(j, i) = s.t(j);
  s.f = 100;
  REQUIRE(check_feasible_P(s).empty());
  const auto s1 = step1_z(s);
  REQUIRE(s1.z);
  CHECK((*s1.z)(0) == doctest::Approx(0.5));
  CHECK((*s1.z)(1) == doctest::Approx(1.0));
  CHECK((*s1.z)(2) == 0.0);
  CHECK((*s1.z)(3) == 0.0);
}

TEST_CASE("step 2 and the integer program") {
  auto s = FrSolution::zeros(1);
  s.t << 2;
  s.d << 1;
  s.p << 1.5;
  s.f = 1;
  const auto s1 = step1_z(s);
  const auto s2 = step2_discretize(s1, 1.0, 1.0);
  CHECK(s2.N == 1);
  CHECK(s2.M == 2);
  CHECK(s2.solution.f == doctest::Approx(2.0));
  CHECK((*s2.solution.z)(0) == doctest::Approx(0.5));
  const auto ph = build_phat(s2);
  CHECK(ph.m == std::vector<std::int64_t>{1});
  CHECK(ph.solution.f == doctest::Approx(4.0));

  const auto w = unit_phat_witness(3);
  CHECK(w.m == std::vector<std::int64_t>{1, 0, 0});
  CHECK(check_feasible_Phat(w.solution, w.m).empty());
  CHECK(eval_Phat(w.solution, w.m, 2.0) == doctest::Approx(1.0));
}

TEST_CASE("chain holds on random feasible points") {
  std::mt19937_64 rng(2024);
  for (int k = 1; k <= 3; ++k) {
    for (int rep = 0; rep < 150; ++rep) {
      const auto s = random_feasible_P(k, rng);
      REQUIRE(check_feasible_P(s).empty());
      CHECK(s.d.sum() == doctest::Approx(1.0));
      for (double lambda : {1.0, 1.11, 1.6}) {
        const auto rep_ = verify_chain(s, lambda, 0.05);
        CHECK(rep_.p1_feasible);
        CHECK(rep_.p2_feasible);
        CHECK(rep_.phat_feasible);
        CHECK(rep_.step1_ok);
        CHECK(rep_.step2_ok);
        CHECK(rep_.final_ok);
        CHECK(rep_.chain_ok);
        CHECK(rep_.v_witness >= 1.0 - 1e-12);
      }
    }
  }
}

TEST_CASE("step 1 equality fails exactly when some t_i < d_i") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 300; ++rep) {
    const auto s = random_feasible_P(1 + rep % 3, rng);
    const bool below = (s.t.array() < s.d.array() - 1e-9).any();
    const auto r = verify_chain(s, 1.0, 0.05);
    if (!below) CHECK(r.step1_equal);
  }
}

TEST_CASE("integer program: small cases") {
  const std::vector<std::int64_t> one{1};
  const auto r = solve_phat(1, one, 1.0);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(r.patterns_total == 2);
  CHECK(solve_P(1, 1.0).value == doctest::Approx(1.0).epsilon(1e-7));
  CHECK_THROWS_AS(solve_phat(5, std::vector<std::int64_t>(5, 1), 1.0), ScaleGuardError);
  CHECK_THROWS_AS(solve_P(4, 1.0), ScaleGuardError);
  CHECK_THROWS_AS(solve_phat(2, one, 1.0), ValidationError);
}

TEST_CASE("integer program: frozen values") {
  const std::vector<std::int64_t> m2{1, 1}, m3{1, 1, 1};
  CHECK(solve_phat(2, m2, 1.0).value == doctest::Approx(1.5).epsilon(1e-6));
  CHECK(solve_phat(3, m3, 1.0).value == doctest::Approx(1.6666667).epsilon(1e-6));
  CHECK(solve_phat(2, m2, 1.11).value == doctest::Approx(1.445).epsilon(1e-6));
  CHECK(solve_phat(3, m3, 1.11).value == doctest::Approx(1.5933333).epsilon(1e-6));
}

TEST_CASE("integer program: structure") {
  const std::vector<std::int64_t> a{1, 2}, b{2, 4};
  double prev = kInf;
  for (double lambda : {1.0, 1.2, 1.5, 2.0}) {
    const auto r = solve_phat(2, a, lambda);
    CHECK(r.value <= prev + 1e-9);
    prev = r.value;
    CHECK(solve_phat(2, b, lambda).value == doctest::Approx(r.value).epsilon(1e-7));
    CHECK(check_feasible_Phat(r.argmax, a, 1e-6).empty());
    CHECK(eval_Phat(r.argmax, a, lambda) == doctest::Approx(r.value).epsilon(1e-7));
  }
  // Duplicating a client can only help the adversary.
  const std::vector<std::int64_t> one{1}, ones2{1, 1}, ones3{1, 1, 1};
  for (double lambda : {1.0, 1.11}) {
    const double v1 = solve_phat(1, one, lambda).value;
    const double v2 = solve_phat(2, ones2, lambda).value;
    const double v3 = solve_phat(3, ones3, lambda).value;
    CHECK(v1 <= v2 + 1e-9);
    CHECK(v2 <= v3 + 1e-9);
  }
}

TEST_CASE("penalized program dominates random feasible points") {
  std::mt19937_64 rng(11);
  for (int k = 1; k <= 2; ++k) {
    const auto opt = solve_P(k, 1.11);
    CHECK(check_feasible_P(opt.argmax, 1e-6).empty());
    CHECK(eval_P(opt.argmax, 1.11) == doctest::Approx(opt.value).epsilon(1e-7));
    for (int rep = 0; rep < 300; ++rep) {
      const auto s = random_feasible_P(k, rng);
      CHECK(eval_P(s, 1.11) <= opt.value + 1e-7);
    }
  }
}

TEST_CASE("integer program dominates random feasible points") {
  std::mt19937_64 rng(12);
  const std::vector<std::int64_t> m{1, 1};
  const double opt = solve_phat(2, m, 1.0).value;
  int checked = 0;
  for (int rep = 0; rep < 500; ++rep) {
    const auto s = random_feasible_P(2, rng);
    if (!check_feasible_Phat(s, m).empty()) continue;
    ++checked;
    CHECK(eval_Phat(s, m, 1.0) <= opt + 1e-7);
  }
  CHECK(checked > 0);
}

TEST_CASE("stars extracted from runs are feasible") {
  int stars = 0;
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    GenParams p;
    p.variant = seed % 2 ? GenParams::Variant::Flp : GenParams::Variant::Ufl;
    p.n_fac = 1 + static_cast<int>(seed % 4);
    p.n_cli = 1 + static_cast<int>(seed % 6);
    p.seed = seed;
    const auto inst = generate_flpm(p);
    const auto run = solve_flpm(inst);
    std::vector<std::size_t> all(inst.num_facilities());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    for (const auto& open : {run.solution.open, all}) {
      for (const auto& s : extract_stars(inst, run, open)) {
        ++stars;
        const auto v = check_feasible_P(s, 1e-6);
        CHECK_MESSAGE(v.empty(), (v.empty() ? "" : v.front().describe()));
      }
    }
  }
  CHECK(stars > 50);
}
