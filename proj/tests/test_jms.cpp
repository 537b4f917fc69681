#include <doctest.h>

#include <functional>

#include "flcc/generator.hpp"
#include "flcc/jms.hpp"
#include "flcc/oracle.hpp"

using namespace flcc;

namespace {

FlpmInstance make(std::vector<double> f, std::vector<FlpmClient> c, Eigen::MatrixXd d) {
  FlpmInstance inst;
  for (std::size_t i = 0; i < f.size(); ++i) inst.facilities.push_back({"F" + std::to_string(i), f[i]});
  inst.clients = std::move(c);
  inst.dist = std::move(d);
  return inst;
}

Eigen::MatrixXd mat(int r, int c, std::initializer_list<double> v) {
  Eigen::MatrixXd m(r, c);
  auto it = v.begin();
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = *it++;
  return m;
}

void run_until(JmsState& s, const std::function<bool()>& done) {
  while (!done()) {
    const auto e = s.next_event();
    REQUIRE(e);
    s.apply(*e);
  }
}

// Offer of j to i at time t, recomputed from the definition.
double offer_at(const JmsState& s, const FlpmInstance& inst, std::size_t j, std::size_t i, double t) {
  const double m = inst.clients[j].multiplicity;
  const double d = inst.dist(j, i);
  if (auto c = s.connection(j)) return m * std::max(0.0, inst.dist(j, *c) - d);
  const double alpha = s.status(j) == ClientStatus::Active ? t : s.budget(j);
  return m * std::max(0.0, alpha - d);
}

}  // namespace

TEST_CASE("offer of an active client") {
  // Client 1 runs out at t = 3, leaving client 0 active with alpha = 3.
  const auto inst = make({100}, {{"a", kInf, 1}, {"b", 3, 1}}, mat(2, 1, {1, 1}));
  JmsState s(inst);
  const auto e = s.next_event();
  REQUIRE(e);
  CHECK(e->kind == EventKind::PotentialRunsOut);
  CHECK(e->time == doctest::Approx(3));
  s.apply(*e);
  CHECK(s.budget(0) == doctest::Approx(3));
  CHECK(s.offer(0, 0) == doctest::Approx(2));
}

TEST_CASE("offer of a connected client") {
  const auto inst = make({0, 100}, {{"a", kInf, 2}}, mat(1, 2, {5, 2}));
  JmsState s(inst);
  run_until(s, [&] { return s.connection(0).has_value(); });
  CHECK(*s.connection(0) == 0);
  CHECK(s.offer(0, 1) == doctest::Approx(6));
}

TEST_CASE("offer of an exhausted client is clamped") {
  const auto inst = make({100}, {{"a", 1, 1}}, mat(1, 1, {4}));
  JmsState s(inst);
  run_until(s, [&] { return s.status(0) == ClientStatus::Exhausted; });
  CHECK(s.offer(0, 0) == 0.0);
}

TEST_CASE("next event examples") {
  {
    const auto inst = make({0}, {{"a", kInf, 1}}, mat(1, 1, {2}));
    const auto e = JmsState(inst).next_event();
    REQUIRE(e);
    CHECK(e->kind == EventKind::FacilityOpens);
    CHECK(e->time == 0.0);
  }
  {
    const auto inst = make({100}, {{"a", 3, 1}}, mat(1, 1, {5}));
    const auto e = JmsState(inst).next_event();
    REQUIRE(e);
    CHECK(e->kind == EventKind::PotentialRunsOut);
    CHECK(e->time == doctest::Approx(3));
  }
  {
    const auto inst = make({2}, {{"a", kInf, 1}, {"b", kInf, 1}}, mat(2, 1, {1, 1}));
    const auto e = JmsState(inst).next_event();
    REQUIRE(e);
    CHECK(e->kind == EventKind::FacilityOpens);
    CHECK(e->time == doctest::Approx(2));
  }
}

TEST_CASE("solve examples") {
  {
    const auto r = solve_flpm(make({0}, {{"a", kInf, 1}}, mat(1, 1, {2})));
    CHECK(r.solution.open == std::vector<std::size_t>{0});
    CHECK(r.solution.costs.total == doctest::Approx(2));
  }
  {
    const auto r = solve_flpm(make({100}, {{"a", 3, 1}}, mat(1, 1, {5})));
    CHECK(r.solution.open.empty());
    CHECK(!r.solution.assignment[0]);
    CHECK(r.solution.costs.total == doctest::Approx(3));
  }
  {
    const auto inst = make({2}, {{"a", kInf, 1}, {"b", kInf, 1}}, mat(2, 1, {1, 1}));
    const auto r = solve_flpm(inst);
    CHECK(r.solution.costs.total == doctest::Approx(4));
    CHECK(brute_flpm(inst).value == doctest::Approx(4));
  }
}

TEST_CASE("tie policy: facilities open before same-time connections") {
  // Both facilities are paid for at t = 1; F0 opens first and the client joins it.
  const auto inst = make({0.5, 0.5}, {{"a", kInf, 1}, {"b", kInf, 1}}, mat(2, 2, {0.5, 0.5, 0.5, 0.5}));
  const auto r = solve_flpm(inst, {kDefaultTol, true});
  REQUIRE(!r.trace.empty());
  CHECK(r.trace.front().kind == EventKind::FacilityOpens);
  CHECK(*r.trace.front().facility == 0);
  CHECK(r.solution.open == std::vector<std::size_t>{0});
}

TEST_CASE("multiplicity equals copies") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    GenParams p;
    p.seed = seed;
    p.n_fac = 1 + seed % 4;
    p.n_cli = 1 + seed % 4;
    auto inst = generate_flpm(p);
    inst.clients[0].multiplicity = 3;
    FlpmInstance copies = inst;
    copies.clients[0].multiplicity = 1;
    Eigen::MatrixXd d(inst.dist.rows() + 2, inst.dist.cols());
    d << inst.dist, inst.dist.row(0), inst.dist.row(0);
    copies.dist = d;
    copies.clients.push_back({"copy-a", inst.clients[0].penalty, 1});
    copies.clients.push_back({"copy-b", inst.clients[0].penalty, 1});
    CHECK(solve_flpm(inst).solution.costs.total ==
          doctest::Approx(solve_flpm(copies).solution.costs.total).epsilon(1e-9));
  }
}

TEST_CASE("run invariants on random instances") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    GenParams p;
    p.seed = seed;
    p.n_fac = 1 + seed % 5;
    p.n_cli = 1 + seed % 7;
    p.variant = seed % 3 == 0 ? GenParams::Variant::Flpm : GenParams::Variant::Flp;
    const auto inst = generate_flpm(p);

    JmsState s(inst);
    double last = 0.0;
    while (s.any_active()) {
      const auto e = s.next_event();
      REQUIRE(e);
      CHECK(e->time >= last - 1e-12);
      last = e->time;
      if (e->kind == EventKind::FacilityOpens) {
        double paid = 0.0;
        for (std::size_t j = 0; j < inst.clients.size(); ++j) paid += offer_at(s, inst, j, *e->facility, e->time);
        const double f = inst.facilities[*e->facility].opening_cost;
        CHECK(paid >= f - 1e-7 * (1 + f));
        if (f > 0) CHECK(paid <= f + 1e-7 * (1 + f));
      }
      s.apply(*e);
    }
    // Connected clients sit at their closest open facility.
    for (std::size_t j = 0; j < inst.clients.size(); ++j)
      if (auto c = s.connection(j))
        for (std::size_t i = 0; i < inst.facilities.size(); ++i)
          if (s.is_open(i)) CHECK(inst.dist(j, *c) <= inst.dist(j, i) + 1e-12);

    const auto r = solve_flpm(inst);
    CHECK_NOTHROW(validate(r.solution, inst));
    CHECK(r.solution.costs.total ==
          doctest::Approx(r.budget_total(inst)).epsilon(1e-6));
    for (std::size_t j = 0; j < inst.clients.size(); ++j) {
      if (r.solution.assignment[j]) {
        CHECK(inst.dist(j, *r.solution.assignment[j]) <= inst.clients[j].penalty + 1e-12);
      } else {
        for (auto i : r.solution.open) CHECK(inst.dist(j, i) >= inst.clients[j].penalty - 1e-12);
      }
    }
  }
}

TEST_CASE("infinite penalties never bind") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    GenParams p;
    p.seed = seed;
    p.variant = GenParams::Variant::Ufl;
    const auto inst = generate_flpm(p);
    const auto r = solve_flpm(inst);
    for (const auto& a : r.solution.assignment) CHECK(a.has_value());
    // Huge finite penalties reproduce the run exactly.
    auto big = inst;
    for (auto& c : big.clients) c.penalty = 1e6;
    CHECK(solve_flpm(big).solution.costs.total == doctest::Approx(r.solution.costs.total));
  }
}

TEST_CASE("determinism and trace json") {
  GenParams p;
  p.seed = 5;
  const auto inst = generate_flpm(p);
  const auto a = solve_flpm(inst, {kDefaultTol, true});
  const auto b = solve_flpm(inst, {kDefaultTol, true});
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t k = 0; k < a.trace.size(); ++k)
    CHECK(to_json(a.trace[k], inst) == to_json(b.trace[k], inst));
  const auto j = to_json(a.trace.front(), inst);
  CHECK(j.contains("t"));
  CHECK(j.contains("kind"));
}
