#include "flcc/reductions.hpp"

#include <algorithm>
#include <cmath>

#include "flcc/errors.hpp"
#include "flcc/oracle.hpp"

namespace flcc {

std::vector<double> multiplicities(const ConcaveFn& g, std::span<const double> dists) {
  if (std::abs(g(0.0)) > kDefaultTol) throw ValidationError("g", "g(0) must be 0");
  const std::size_t n = dists.size();
  std::vector<double> slope(n);
  double prev_x = 0.0, prev_y = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!(dists[k] > prev_x))
      throw ValidationError("dists", "must be positive and strictly increasing");
    const double y = g(dists[k]);
    slope[k] = (y - prev_y) / (dists[k] - prev_x);
    prev_x = dists[k];
    prev_y = y;
  }
  std::vector<double> m(n);
  for (std::size_t k = 0; k < n; ++k) {
    m[k] = k + 1 < n ? slope[k] - slope[k + 1] : slope[k];
    if (m[k] < -1e-8 * (1.0 + std::abs(slope[k])))
      throw ValidationError("g", "not concave nondecreasing at the given distances");
    if (m[k] < 0.0) m[k] = 0.0;  // roundoff
  }
  return m;
}

NccReduction ncc_to_flpm(const NccInstance& inst) {
  validate(inst);
  NccReduction out;
  out.flpm.facilities = inst.facilities;
  const auto nf = static_cast<Eigen::Index>(inst.num_facilities());
  std::vector<Eigen::VectorXd> rows;
  for (std::size_t j = 0; j < inst.num_clients(); ++j) {
    const auto& src = inst.clients[j];
    const Eigen::VectorXd row = inst.dist.row(static_cast<Eigen::Index>(j)).transpose();
    std::vector<double> ds;
    for (Eigen::Index i = 0; i < nf; ++i)
      if (row(i) > 0.0) ds.push_back(row(i));
    std::sort(ds.begin(), ds.end());
    // Tied distances collapse to one breakpoint.
    std::vector<double> distinct;
    for (double d : ds)
      if (distinct.empty() || d > distinct.back() * (1.0 + 1e-12)) distinct.push_back(d);
    NccToFlpmMap::Source s{distinct, multiplicities(src.g, distinct), {}};
    for (std::size_t k = 0; k < distinct.size(); ++k) {
      if (s.multiplicities[k] <= 0.0) {
        s.created.push_back(-1);
        continue;
      }
      s.created.push_back(static_cast<long>(out.flpm.clients.size()));
      out.flpm.clients.push_back({src.id + "#" + std::to_string(k + 1), distinct[k], s.multiplicities[k]});
      rows.push_back(row);
    }
    out.map.sources.push_back(std::move(s));
  }
  out.flpm.dist.resize(static_cast<Eigen::Index>(rows.size()), nf);
  for (std::size_t r = 0; r < rows.size(); ++r)
    out.flpm.dist.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
  return out;
}

ScheduleOracle exact_schedule_oracle(const SirpflInstance& inst) {
  if (inst.capacitated()) {
    const double U = inst.capacity;
    const bool split = inst.splittable;
    return [U, split](const DemandSeries& d, double x) { return iap_exact(d, x, U, split); };
  }
  return [](const DemandSeries& d, double x) {
    if (holding_monotone(d)) return wagner_whitin(d, x);
    return brute_lotsizing(d, x).schedule;
  };
}

SirpflReduction sirpfl_to_ncc(const SirpflInstance& inst, const ScheduleOracle& oracle) {
  validate(inst);
  SirpflReduction out;
  out.ncc.facilities = inst.facilities;
  out.ncc.dist = inst.dist;
  for (std::size_t j = 0; j < inst.num_clients(); ++j) {
    const auto series = DemandSeries::of(inst.clients[j]);
    std::vector<double> xs{0.0};
    std::vector<double> ds(inst.dist.cols());
    for (Eigen::Index i = 0; i < inst.dist.cols(); ++i) ds[static_cast<std::size_t>(i)] = inst.dist(static_cast<Eigen::Index>(j), i);
    std::sort(ds.begin(), ds.end());
    for (double d : ds)
      if (d > xs.back()) xs.push_back(d);
    // The price-0 schedule anchors the envelope at the origin.
    std::vector<Schedule> family;
    std::vector<ValueLine> lines;
    for (double x : xs) {
      family.push_back(oracle(series, x));
      lines.push_back(family.back().line());
    }
    const Envelope env = value_envelope(lines, xs);
    if (std::abs(env.g(0.0)) > kDefaultTol)
      throw ValidationError("clients[" + std::to_string(j) + "]",
                            "schedule oracle returned a positive cost at delivery price 0");
    std::vector<Schedule> realizing;
    for (auto a : env.achieving) realizing.push_back(family[a]);
    out.ncc.clients.push_back({inst.clients[j].id, env.g});
    out.breakpoints.push_back(std::move(xs));
    out.schedules.push_back(std::move(realizing));
  }
  return out;
}

SirpflPlan lift_solution(std::vector<std::size_t> open, const SirpflInstance& inst,
                         const SirpflReduction& reduction) {
  if (open.empty()) throw ValidationError("open", "at least one facility must be open");
  std::sort(open.begin(), open.end());
  SirpflPlan plan;
  plan.open = std::move(open);
  for (std::size_t j = 0; j < inst.num_clients(); ++j) {
    const auto row = static_cast<Eigen::Index>(j);
    const auto i = closest_open(inst.dist, row, plan.open);
    const double d = inst.dist(row, static_cast<Eigen::Index>(i));
    const auto& xs = reduction.breakpoints[j];
    const auto k = static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), d) - xs.begin());
    if (k >= xs.size() || xs[k] != d)
      throw std::logic_error("lift_solution: distance is not a recorded breakpoint");
    plan.assignment.push_back(i);
    plan.schedules.push_back(reduction.schedules[j][k]);
  }
  plan.costs = price_plan(plan, inst);
  return plan;
}

double connection_factor(double lambda_f) { return 1.0 + 2.0 * std::exp(-lambda_f); }

CapacitatedLambda capacitated_lambda(double alpha) {
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) throw ValidationError("alpha", "must be >= 1");
  // lambda - alpha (1 + 2 e^{-lambda}) is increasing; it is negative at
  // alpha and positive at 3 alpha.
  double lo = alpha, hi = 3.0 * alpha;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid - alpha * connection_factor(mid) < 0.0) lo = mid;
    else hi = mid;
  }
  const double lambda = 0.5 * (lo + hi);
  return {lambda, std::max(lambda, alpha * connection_factor(lambda))};
}

}  // namespace flcc
