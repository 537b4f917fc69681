#include "flcc/lotsizing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "flcc/errors.hpp"
#include "flcc/lp.hpp"

namespace flcc {

void validate(const DemandSeries& d) {
  const Eigen::Index T = d.demands.size();
  if (T < 1) throw ValidationError("demands", "empty horizon");
  if (d.holding.rows() != T || d.holding.cols() != T)
    throw ValidationError("holding", "expected TxT matrix");
  bool any = false;
  for (Eigen::Index t = 0; t < T; ++t) {
    if (!std::isfinite(d.demands(t)) || d.demands(t) < 0.0)
      throw ValidationError("demands[" + std::to_string(t) + "]", "must be finite and nonnegative");
    if (d.demands(t) > 0.0) {
      any = true;
      if (d.holding(t, t) != 0.0)
        throw ValidationError("holding[" + std::to_string(t) + "][" + std::to_string(t) + "]",
                              "same-day holding must be 0");
    }
    for (Eigen::Index s = 0; s <= t; ++s)
      if (!std::isfinite(d.holding(s, t)) || d.holding(s, t) < 0.0)
        throw ValidationError("holding[" + std::to_string(s) + "][" + std::to_string(t) + "]",
                              "must be finite and nonnegative");
  }
  if (!any) throw ValidationError("demands", "at least one positive demand required");
}

bool holding_monotone(const DemandSeries& d, double tol) {
  const Eigen::Index T = d.demands.size();
  for (Eigen::Index t = 0; t < T; ++t) {
    if (d.demands(t) <= 0.0) continue;
    for (Eigen::Index s = 0; s + 1 <= t; ++s)
      if (d.holding(s, t) < d.holding(s + 1, t) - tol) return false;
  }
  return true;
}

double holding_cost(const std::vector<Delivery>& deliveries, const DemandSeries& d) {
  double h = 0.0;
  for (const auto& del : deliveries)
    for (const auto& [t, q] : del.units) h += q * d.holding(del.day, t);
  return h;
}

std::string check_schedule(const Schedule& s, const DemandSeries& d, double capacity,
                           bool splittable, double tol) {
  std::ostringstream err;
  const int T = d.horizon();
  Eigen::VectorXd served = Eigen::VectorXd::Zero(T);
  std::vector<int> pieces(static_cast<std::size_t>(T), 0);
  for (std::size_t k = 0; k < s.deliveries.size(); ++k) {
    const auto& del = s.deliveries[k];
    if (del.day < 0 || del.day >= T) {
      err << "delivery " << k << " on day " << del.day << " outside horizon";
      return err.str();
    }
    double load = 0.0;
    for (const auto& [t, q] : del.units) {
      if (t < del.day || t >= T) {
        err << "delivery " << k << " on day " << del.day << " serves due day " << t;
        return err.str();
      }
      if (!(q > 0.0)) {
        err << "delivery " << k << " carries nonpositive units";
        return err.str();
      }
      served(t) += q;
      load += q;
      ++pieces[static_cast<std::size_t>(t)];
    }
    if (load > capacity + tol) {
      err << "delivery " << k << " exceeds capacity (" << load << " > " << capacity << ")";
      return err.str();
    }
  }
  for (int t = 0; t < T; ++t) {
    if (std::abs(served(t) - d.demands(t)) > tol * (1.0 + d.demands(t))) {
      err << "demand on day " << t << " served " << served(t) << " of " << d.demands(t);
      return err.str();
    }
    if (!splittable && d.demands(t) > 0.0 && pieces[static_cast<std::size_t>(t)] != 1) {
      err << "demand on day " << t << " split across " << pieces[static_cast<std::size_t>(t)]
          << " deliveries";
      return err.str();
    }
  }
  const double h = holding_cost(s.deliveries, d);
  if (std::abs(h - s.holding_cost) > tol * (1.0 + std::abs(h))) {
    err << "recorded holding cost " << s.holding_cost << " differs from " << h;
    return err.str();
  }
  return {};
}

Schedule wagner_whitin(const DemandSeries& d, double K) {
  validate(d);
  if (!holding_monotone(d))
    throw ValidationError("holding", "not monotone in earliness; use brute_lotsizing");
  const int T = d.horizon();
  // best[t]: cheapest way to cover days [0, t). A segment [s, t) is either a
  // demand-free gap or one delivery on day s serving every demand in it.
  std::vector<double> best(static_cast<std::size_t>(T) + 1, kInf);
  std::vector<int> from(static_cast<std::size_t>(T) + 1, -1);
  std::vector<char> delivers(static_cast<std::size_t>(T) + 1, 0);
  best[0] = 0.0;
  for (int t = 1; t <= T; ++t) {
    for (int s = 0; s < t; ++s) {
      if (!std::isfinite(best[static_cast<std::size_t>(s)])) continue;
      double hold = 0.0, units = 0.0;
      for (int tau = s; tau < t; ++tau) {
        hold += d.holding(s, tau) * d.demands(tau);
        units += d.demands(tau);
      }
      const bool needs = units > 0.0;
      const double cand = best[static_cast<std::size_t>(s)] + (needs ? K + hold : 0.0);
      if (cand < best[static_cast<std::size_t>(t)]) {
        best[static_cast<std::size_t>(t)] = cand;
        from[static_cast<std::size_t>(t)] = s;
        delivers[static_cast<std::size_t>(t)] = needs;
      }
    }
  }
  Schedule out;
  for (int t = T; t > 0; t = from[static_cast<std::size_t>(t)]) {
    const int s = from[static_cast<std::size_t>(t)];
    if (!delivers[static_cast<std::size_t>(t)]) continue;
    Delivery del{s, {}};
    for (int tau = s; tau < t; ++tau)
      if (d.demands(tau) > 0.0) del.units[tau] = d.demands(tau);
    out.deliveries.push_back(std::move(del));
  }
  std::reverse(out.deliveries.begin(), out.deliveries.end());
  out.holding_cost = holding_cost(out.deliveries, d);
  return out;
}

namespace {

constexpr double kEps = 1e-9;

int ceil_div(double a, double b) { return static_cast<int>(std::ceil(a / b - kEps)); }

// Deliver every demand on its due day: zero holding.
Schedule due_day_schedule(const DemandSeries& d, double capacity) {
  Schedule s;
  for (int t = 0; t < d.horizon(); ++t) {
    double left = d.demands(t);
    while (left > kEps) {
      const double q = std::min(left, capacity);
      s.deliveries.push_back({t, {{t, q}}});
      left -= q;
    }
  }
  return s;
}

// Min-cost transport of demand to delivery days given per-day capacity.
// Returns (holding cost, flows[s][t]) or nullopt when infeasible.
std::optional<std::pair<double, Eigen::MatrixXd>> transport(const DemandSeries& d,
                                                            const std::vector<int>& count,
                                                            double capacity) {
  const int T = d.horizon();
  std::vector<std::pair<int, int>> arcs;
  for (int s = 0; s < T; ++s) {
    if (count[static_cast<std::size_t>(s)] == 0) continue;
    for (int t = s; t < T; ++t)
      if (d.demands(t) > 0.0) arcs.emplace_back(s, t);
  }
  LinearProgram<double> lp(static_cast<Eigen::Index>(arcs.size()));
  for (std::size_t a = 0; a < arcs.size(); ++a)
    lp.objective(static_cast<Eigen::Index>(a)) = d.holding(arcs[a].first, arcs[a].second);
  Eigen::VectorXd row(lp.num_vars());
  for (int t = 0; t < T; ++t) {
    if (d.demands(t) <= 0.0) continue;
    row.setZero();
    for (std::size_t a = 0; a < arcs.size(); ++a)
      if (arcs[a].second == t) row(static_cast<Eigen::Index>(a)) = 1.0;
    lp.add_row(row, RowSense::Eq, d.demands(t));
  }
  for (int s = 0; s < T; ++s) {
    if (count[static_cast<std::size_t>(s)] == 0) continue;
    row.setZero();
    for (std::size_t a = 0; a < arcs.size(); ++a)
      if (arcs[a].first == s) row(static_cast<Eigen::Index>(a)) = 1.0;
    lp.add_row(row, RowSense::Le, count[static_cast<std::size_t>(s)] * capacity);
  }
  const auto res = simplex_solve(lp);
  if (res.status != LpStatus::Optimal) return std::nullopt;
  Eigen::MatrixXd flow = Eigen::MatrixXd::Zero(T, T);
  for (std::size_t a = 0; a < arcs.size(); ++a)
    flow(arcs[a].first, arcs[a].second) = std::max(0.0, res.x(static_cast<Eigen::Index>(a)));
  return std::make_pair(res.value, flow);
}

Schedule iap_splittable(const DemandSeries& d, double K, double capacity) {
  const int T = d.horizon();
  const bool uncapacitated = !std::isfinite(capacity);
  const double cap = uncapacitated ? d.total() : capacity;
  std::vector<double> suffix(static_cast<std::size_t>(T) + 1, 0.0), prefix(static_cast<std::size_t>(T) + 1, 0.0);
  for (int t = T - 1; t >= 0; --t) suffix[static_cast<std::size_t>(t)] = suffix[static_cast<std::size_t>(t) + 1] + d.demands(t);
  for (int t = 0; t < T; ++t) prefix[static_cast<std::size_t>(t) + 1] = prefix[static_cast<std::size_t>(t)] + d.demands(t);
  std::vector<int> max_count(static_cast<std::size_t>(T));
  for (int s = 0; s < T; ++s)
    max_count[static_cast<std::size_t>(s)] = uncapacitated ? 1 : ceil_div(suffix[static_cast<std::size_t>(s)], cap);
  const int count_bound = (uncapacitated ? 0 : ceil_div(d.total(), cap)) + T;

  Schedule incumbent = due_day_schedule(d, cap);
  double best = incumbent.cost(K);
  std::vector<int> best_count;
  Eigen::MatrixXd best_flow;

  std::vector<int> count(static_cast<std::size_t>(T), 0);
  std::function<void(int, int)> dfs = [&](int s, int used) {
    if (K * used >= best - kEps * (1.0 + best)) return;
    if (s == T) {
      if (auto sol = transport(d, count, cap)) {
        const double cost = K * used + sol->first;
        if (cost < best - kEps * (1.0 + best)) {
          best = cost;
          best_count = count;
          best_flow = sol->second;
        }
      }
      return;
    }
    for (int n = 0; n <= max_count[static_cast<std::size_t>(s)] && used + n <= count_bound; ++n) {
      // Demand due by day s must fit in the capacity bought on days <= s.
      double bought = 0.0;
      for (int q = 0; q < s; ++q) bought += count[static_cast<std::size_t>(q)] * cap;
      if ((bought + n * cap) < prefix[static_cast<std::size_t>(s) + 1] - kEps) continue;
      count[static_cast<std::size_t>(s)] = n;
      dfs(s + 1, used + n);
    }
    count[static_cast<std::size_t>(s)] = 0;
  };
  dfs(0, 0);
  if (best_count.empty()) {
    incumbent.holding_cost = holding_cost(incumbent.deliveries, d);
    return incumbent;
  }
  Schedule out;
  for (int s = 0; s < T; ++s) {
    // Fill trucks of size `cap` in due-day order.
    Delivery cur{s, {}};
    double load = 0.0;
    for (int t = s; t < T; ++t) {
      double left = best_flow(s, t);
      while (left > kEps) {
        const double q = std::min(left, cap - load);
        cur.units[t] += q;
        load += q;
        left -= q;
        if (load >= cap - kEps) {
          out.deliveries.push_back(std::move(cur));
          cur = Delivery{s, {}};
          load = 0.0;
        }
      }
    }
    if (!cur.units.empty()) out.deliveries.push_back(std::move(cur));
  }
  out.holding_cost = holding_cost(out.deliveries, d);
  return out;
}

// Exact bin packing by branch and bound; returns bin index per item.
std::vector<int> pack_bins(const std::vector<double>& sizes, double cap) {
  const std::size_t n = sizes.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return sizes[a] > sizes[b]; });
  // First-fit decreasing upper bound.
  std::vector<int> best(n, 0);
  std::vector<double> loads;
  for (auto it : order) {
    std::size_t b = 0;
    while (b < loads.size() && loads[b] + sizes[it] > cap + kEps) ++b;
    if (b == loads.size()) loads.push_back(0.0);
    loads[b] += sizes[it];
    best[it] = static_cast<int>(b);
  }
  std::size_t best_bins = loads.size();
  const double total = std::accumulate(sizes.begin(), sizes.end(), 0.0);
  const auto lower = static_cast<std::size_t>(std::max(1, ceil_div(total, cap)));
  if (n == 0) return {};
  if (best_bins <= lower) return best;

  std::vector<int> cur(n, 0);
  std::vector<double> open;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (open.size() >= best_bins) return;
    if (k == n) {
      best_bins = open.size();
      best = cur;
      return;
    }
    const auto it = order[k];
    for (std::size_t b = 0; b < open.size(); ++b) {
      if (open[b] + sizes[it] > cap + kEps) continue;
      open[b] += sizes[it];
      cur[it] = static_cast<int>(b);
      rec(k + 1);
      open[b] -= sizes[it];
      if (best_bins <= lower) return;
    }
    open.push_back(sizes[it]);
    cur[it] = static_cast<int>(open.size() - 1);
    rec(k + 1);
    open.pop_back();
  };
  rec(0);
  return best;
}

Schedule iap_unsplittable(const DemandSeries& d, double K, double capacity) {
  const int T = d.horizon();
  const bool uncapacitated = !std::isfinite(capacity);
  std::vector<int> points;
  for (int t = 0; t < T; ++t)
    if (d.demands(t) > 0.0) points.push_back(t);
  const double cap = uncapacitated ? d.total() : capacity;

  std::vector<int> day_of(points.size()), best_day;
  std::vector<double> load(static_cast<std::size_t>(T), 0.0);
  double best = K * static_cast<double>(points.size());  // due-day plan
  for (std::size_t k = 0; k < points.size(); ++k) day_of[k] = points[k];
  best_day = day_of;

  auto bins_lower = [&]() {
    int n = 0;
    for (double l : load)
      if (l > 0.0) n += ceil_div(l, cap);
    return n;
  };
  auto leaf_cost = [&]() {
    double cost = 0.0;
    for (int s = 0; s < T; ++s) {
      std::vector<double> items;
      for (std::size_t k = 0; k < points.size(); ++k)
        if (day_of[k] == s) items.push_back(d.demands(points[k]));
      if (items.empty()) continue;
      const auto bins = pack_bins(items, cap);
      cost += K * (1 + *std::max_element(bins.begin(), bins.end()));
    }
    return cost;
  };
  std::function<void(std::size_t, double)> dfs = [&](std::size_t k, double hold) {
    if (hold + K * bins_lower() >= best - kEps * (1.0 + best)) return;
    if (k == points.size()) {
      const double cost = hold + leaf_cost();
      if (cost < best - kEps * (1.0 + best)) {
        best = cost;
        best_day = day_of;
      }
      return;
    }
    const int t = points[k];
    const double u = d.demands(t);
    for (int s = t; s >= 0; --s) {
      day_of[k] = s;
      load[static_cast<std::size_t>(s)] += u;
      dfs(k + 1, hold + u * d.holding(s, t));
      load[static_cast<std::size_t>(s)] -= u;
    }
    day_of[k] = t;
  };
  dfs(0, 0.0);

  Schedule out;
  for (int s = 0; s < T; ++s) {
    std::vector<double> items;
    std::vector<int> due;
    for (std::size_t k = 0; k < points.size(); ++k)
      if (best_day[k] == s) {
        items.push_back(d.demands(points[k]));
        due.push_back(points[k]);
      }
    if (items.empty()) continue;
    const auto bins = pack_bins(items, cap);
    const int nb = 1 + *std::max_element(bins.begin(), bins.end());
    std::vector<Delivery> trucks(static_cast<std::size_t>(nb), Delivery{s, {}});
    for (std::size_t k = 0; k < items.size(); ++k)
      trucks[static_cast<std::size_t>(bins[k])].units[due[k]] = items[k];
    for (auto& tr : trucks) out.deliveries.push_back(std::move(tr));
  }
  out.holding_cost = holding_cost(out.deliveries, d);
  return out;
}

}  // namespace

Schedule iap_exact(const DemandSeries& d, double K, double capacity, bool splittable,
                   const IapLimits& limits) {
  validate(d);
  if (!(capacity > 0.0)) throw ValidationError("U", "capacity must be positive");
  if (!(K >= 0.0) || !std::isfinite(K)) throw ValidationError("K", "delivery cost must be finite and nonnegative");
  if (!limits.override_guard &&
      (d.horizon() > limits.max_horizon || d.total() > limits.max_total_demand))
    throw ScaleGuardError("iap_exact: beyond desk scale (T <= " +
                          std::to_string(limits.max_horizon) + ", total demand <= " +
                          std::to_string(limits.max_total_demand) + ")");
  if (!splittable && std::isfinite(capacity))
    for (int t = 0; t < d.horizon(); ++t)
      if (d.demands(t) > capacity)
        throw ValidationError("demands[" + std::to_string(t) + "]",
                              "exceeds capacity in the unsplittable variant");
  return splittable ? iap_splittable(d, K, capacity) : iap_unsplittable(d, K, capacity);
}

Envelope value_envelope(std::span<const ValueLine> lines, std::span<const double> xs) {
  if (lines.empty()) throw ValidationError("lines", "at least one value line required");
  for (std::size_t i = 0; i < lines.size(); ++i)
    if (!(lines[i].deliveries >= 0.0) || !(lines[i].holding >= 0.0))
      throw ValidationError("lines[" + std::to_string(i) + "]", "must be nonnegative");
  std::vector<double> grid{0.0};
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (!(xs[k] >= 0.0) || (k > 0 && !(xs[k] > xs[k - 1])))
      throw ValidationError("xs", "must be nonnegative and strictly increasing");
    if (xs[k] > 0.0) grid.push_back(xs[k]);
  }
  Envelope env;
  std::vector<Breakpoint> pts;
  for (double x : grid) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < lines.size(); ++i)
      if (lines[i].at(x) < lines[arg].at(x)) arg = i;
    pts.push_back({x, lines[arg].at(x)});
    env.achieving.push_back(arg);
  }
  env.g = ConcaveFn(std::move(pts), 1e-9, "envelope");
  return env;
}

SequentialChoice sequential_choice(std::span<const ValueLine> lines, std::span<const double> xs) {
  if (lines.size() != xs.size() || lines.empty())
    throw ValidationError("lines", "one value line per distance required");
  SequentialChoice seq;
  seq.chosen.push_back(0);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const auto& prev = lines[seq.chosen.back()];
    seq.chosen.push_back(prev.at(xs[i]) < lines[i].at(xs[i]) ? seq.chosen.back() : i);
  }
  std::vector<Breakpoint> pts{{0.0, 0.0}};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    seq.values.push_back(lines[seq.chosen[i]].at(xs[i]));
    if (xs[i] > 0.0) pts.push_back({xs[i], seq.values.back()});
  }
  seq.concave_nondecreasing = ConcaveFn::check(pts, 1e-9).empty();
  return seq;
}

}  // namespace flcc
