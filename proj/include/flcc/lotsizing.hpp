#pragma once

#include <Eigen/Dense>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "flcc/concave_fn.hpp"
#include "flcc/instances.hpp"

namespace flcc {

// One client's demand over days 0..T-1 and per-unit holding h(s, t) for
// delivering on day s to serve the demand due on day t (s <= t).
struct DemandSeries {
  Eigen::VectorXd demands;
  Eigen::MatrixXd holding;

  int horizon() const { return static_cast<int>(demands.size()); }
  double total() const { return demands.sum(); }

  static DemandSeries of(const SirpflClient& client) { return {client.demands, client.holding}; }
};

// Throws ValidationError unless the series has matching sizes, nonnegative
// data, h(t,t) = 0 at demand points and at least one positive demand.
void validate(const DemandSeries& d);

// h(s,t) >= h(s',t) whenever s <= s' <= t, at every demand day t.
bool holding_monotone(const DemandSeries& d, double tol = kDefaultTol);

// Cost of a schedule at per-delivery price x is deliveries * x + holding.
struct ValueLine {
  double deliveries = 0.0;
  double holding = 0.0;

  double at(double x) const { return deliveries * x + holding; }
};

struct Delivery {
  int day = 0;
  std::map<int, double> units;  // due day -> units carried
};

struct Schedule {
  std::vector<Delivery> deliveries;
  double holding_cost = 0.0;

  ValueLine line() const { return {static_cast<double>(deliveries.size()), holding_cost}; }
  double cost(double delivery_price) const { return line().at(delivery_price); }
};

// Holding cost of `deliveries` under `d`.
double holding_cost(const std::vector<Delivery>& deliveries, const DemandSeries& d);

// Empty when the schedule serves every demand in time, respects the capacity
// per delivery, serves each demand point from one delivery when unsplittable,
// and its recorded holding cost matches.
std::string check_schedule(const Schedule& s, const DemandSeries& d, double capacity = kInf,
                           bool splittable = true, double tol = 1e-7);

// Optimal uncapacitated lot sizing in O(T^2). Requires monotone holding
// (throws ValidationError pointing at brute_lotsizing otherwise).
Schedule wagner_whitin(const DemandSeries& d, double delivery_cost);

struct IapLimits {
  int max_horizon = 10;
  double max_total_demand = 50.0;
  bool override_guard = false;
};

// Exact Inventory Access Problem: lot sizing with at most `capacity` units
// per delivery (inf allowed), splittable or not. Desk scale only: throws
// ScaleGuardError beyond `limits`.
Schedule iap_exact(const DemandSeries& d, double delivery_cost, double capacity, bool splittable,
                   const IapLimits& limits = {});

struct Envelope {
  ConcaveFn g;                      // breakpoints at {0} U xs
  std::vector<std::size_t> achieving;  // per breakpoint: index of the minimizing line
};

// Pointwise minimum of the value lines, sampled at {0} U xs (xs strictly
// increasing, nonnegative). Concave and nondecreasing by construction.
Envelope value_envelope(std::span<const ValueLine> lines, std::span<const double> xs);

struct SequentialChoice {
  std::vector<std::size_t> chosen;  // S_i as an index into the input schedules
  std::vector<double> values;       // g(x_i) = V(S_i, x_i)
  bool concave_nondecreasing = true;  // checked with the origin (0, 0) prepended
};

// Sequential construction: S_1 = A(x_1); S_{i+1} keeps S_i when it is strictly
// cheaper than A(x_{i+1}) at x_{i+1}, otherwise switches to A(x_{i+1}).
// `lines[i]` is the value line of A(xs[i]).
SequentialChoice sequential_choice(std::span<const ValueLine> lines, std::span<const double> xs);

}  // namespace flcc
