#pragma once

#include <cstdint>

#include "flcc/instances.hpp"

namespace flcc {

// Random instance families. Points are uniform in the unit square
// (facilities first, then clients) with Euclidean distances. Ranges:
//   opening cost       U[0.1, 1.5]
//   penalty            inf with probability 1/2 (Flp, Flpm), else U[0.05, 1.0]
//   multiplicity       1 (Ufl, Flp) or U[0.5, 2.0] (Flpm)
//   concave g (Ncc)    1-4 pieces, first slope U[0.5, 2], each next slope
//                      scaled by U[0, 1], piece widths U[0.1, 0.6]
//   demand (Sirpfl)    integer in {0..max_demand}, at least one positive day
//   holding (Sirpfl)   h(s,t) = c_j (t - s), c_j in U[0.05, 0.5]
struct GenParams {
  enum class Variant { Ufl, Flp, Flpm, Ncc, Sirpfl };

  int n_fac = 3;
  int n_cli = 4;
  Variant variant = Variant::Flp;
  int horizon = 3;
  double capacity = kInf;
  bool splittable = true;
  int max_demand = 3;
  std::uint64_t seed = 1;
};

// Full metric over facilities then clients for these params; the instance
// generators use exactly this point set.
MetricSpace random_metric(const GenParams& params);

FlpmInstance generate_flpm(const GenParams& params);
NccInstance generate_ncc(const GenParams& params);
SirpflInstance generate_sirpfl(const GenParams& params);

}  // namespace flcc
