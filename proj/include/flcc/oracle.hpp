#pragma once

#include <vector>

#include "flcc/instances.hpp"
#include "flcc/lotsizing.hpp"
#include "flcc/plan.hpp"

namespace flcc {

// Exhaustive ground-truth solvers. Each has a desk-scale guard that throws
// ScaleGuardError unless `override_guard` is set.
struct OracleLimits {
  bool override_guard = false;
};

struct BruteFlpm {
  double value = 0.0;
  FlSolution solution;
};

// Minimum over all facility subsets (including the empty one) of opening
// cost + sum_j m_j min(p_j, min_{i in S} d_ij). At most 12 facilities.
BruteFlpm brute_flpm(const FlpmInstance& inst, const OracleLimits& limits = {});

// Every nonempty facility subset of `n` facilities as a sorted index list.
std::vector<std::vector<std::size_t>> nonempty_subsets(std::size_t n);

struct BruteLotSizing {
  double value = 0.0;
  Schedule schedule;
};

// Minimum over nonempty delivery-day sets S of |S| K + sum_t u_t min_{s in S,
// s <= t} h(s,t). Any holding structure. At most 12 days.
BruteLotSizing brute_lotsizing(const DemandSeries& d, double delivery_cost,
                               const OracleLimits& limits = {});

struct BruteSirpfl {
  double value = 0.0;
  SirpflPlan plan;
};

// Minimum over nonempty facility subsets and client-to-open-facility
// assignments of opening + per-client exact lot sizing / IAP cost at the
// assigned distance. At most 4 facilities, 4 clients, T <= 4, integral
// demands <= 3.
BruteSirpfl brute_sirpfl(const SirpflInstance& inst, const OracleLimits& limits = {});

}  // namespace flcc
