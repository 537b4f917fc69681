#include "flcc/oracle.hpp"

#include <bit>
#include <cmath>

#include "flcc/errors.hpp"

namespace flcc {

std::vector<std::vector<std::size_t>> nonempty_subsets(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1U) s.push_back(i);
    out.push_back(std::move(s));
  }
  return out;
}

BruteFlpm brute_flpm(const FlpmInstance& inst, const OracleLimits& limits) {
  if (!limits.override_guard && inst.num_facilities() > 12)
    throw ScaleGuardError("brute_flpm: more than 12 facilities");
  BruteFlpm best;
  best.solution = assign_to_open_set(inst, {});
  best.value = best.solution.costs.total;
  for (auto& subset : nonempty_subsets(inst.num_facilities())) {
    auto sol = assign_to_open_set(inst, std::move(subset));
    if (sol.costs.total < best.value) {
      best.value = sol.costs.total;
      best.solution = std::move(sol);
    }
  }
  return best;
}

BruteLotSizing brute_lotsizing(const DemandSeries& d, double K, const OracleLimits& limits) {
  validate(d);
  const int T = d.horizon();
  if (!limits.override_guard && T > 12) throw ScaleGuardError("brute_lotsizing: T > 12");
  BruteLotSizing best{kInf, {}};
  for (std::uint32_t mask = 1; mask < (1U << T); ++mask) {
    double cost = K * std::popcount(mask);
    std::vector<int> source(static_cast<std::size_t>(T), -1);
    bool feasible = true;
    for (int t = 0; t < T && feasible; ++t) {
      if (d.demands(t) <= 0.0) continue;
      double h = kInf;
      for (int s = 0; s <= t; ++s)
        if ((mask >> s & 1U) && d.holding(s, t) < h) {
          h = d.holding(s, t);
          source[static_cast<std::size_t>(t)] = s;
        }
      if (source[static_cast<std::size_t>(t)] < 0) feasible = false;
      else cost += d.demands(t) * h;
    }
    if (!feasible || !(cost < best.value)) continue;
    best.value = cost;
    best.schedule = {};
    for (int s = 0; s < T; ++s) {
      if (!(mask >> s & 1U)) continue;
      Delivery del{s, {}};
      for (int t = s; t < T; ++t)
        if (source[static_cast<std::size_t>(t)] == s) del.units[t] = d.demands(t);
      best.schedule.deliveries.push_back(std::move(del));
    }
    best.schedule.holding_cost = holding_cost(best.schedule.deliveries, d);
  }
  return best;
}

BruteSirpfl brute_sirpfl(const SirpflInstance& inst, const OracleLimits& limits) {
  if (!limits.override_guard) {
    if (inst.num_facilities() > 4 || inst.num_clients() > 4 || inst.horizon > 4)
      throw ScaleGuardError("brute_sirpfl: beyond 4 facilities, 4 clients, T = 4");
    for (const auto& c : inst.clients)
      for (Eigen::Index t = 0; t < c.demands.size(); ++t)
        if (c.demands(t) > 3.0 || c.demands(t) != std::floor(c.demands(t)))
          throw ScaleGuardError("brute_sirpfl: demands must be integers <= 3");
  }
  const std::size_t nf = inst.num_facilities(), nc = inst.num_clients();
  // Exact per-(client, facility) schedules; the subset loop then picks the
  // cheapest open facility per client, which covers every assignment.
  std::vector<std::vector<Schedule>> exact(nc, std::vector<Schedule>(nf));
  for (std::size_t j = 0; j < nc; ++j) {
    const auto series = DemandSeries::of(inst.clients[j]);
    for (std::size_t i = 0; i < nf; ++i) {
      const double K = inst.dist(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
      exact[j][i] = inst.capacitated()
                        ? iap_exact(series, K, inst.capacity, inst.splittable)
                        : brute_lotsizing(series, K, limits).schedule;
    }
  }
  BruteSirpfl best{kInf, {}};
  for (auto& subset : nonempty_subsets(nf)) {
    SirpflPlan plan;
    plan.open = subset;
    for (auto i : subset) plan.costs.opening += inst.facilities[i].opening_cost;
    double total = plan.costs.opening;
    for (std::size_t j = 0; j < nc; ++j) {
      std::size_t arg = subset.front();
      double v = kInf;
      for (auto i : subset) {
        const double c = exact[j][i].cost(inst.dist(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)));
        if (c < v) {
          v = c;
          arg = i;
        }
      }
      plan.assignment.push_back(arg);
      plan.schedules.push_back(exact[j][arg]);
      total += v;
    }
    if (total < best.value) {
      plan.costs = price_plan(plan, inst);
      best.value = total;
      best.plan = std::move(plan);
    }
  }
  return best;
}

}  // namespace flcc
