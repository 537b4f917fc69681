#pragma once

#include <functional>
#include <span>
#include <vector>

#include "flcc/instances.hpp"
#include "flcc/lotsizing.hpp"
#include "flcc/plan.hpp"

namespace flcc {

// Weights m_k >= 0 such that, for every k,
//   g(d_k) = sum_{i<k} m_i d_i + sum_{i>=k} m_i d_k,
// i.e. differences of consecutive chord slopes of g (origin included).
// Requires g(0) = 0 and dists strictly increasing and positive.
std::vector<double> multiplicities(const ConcaveFn& g, std::span<const double> dists);

// Per source client: its distinct positive facility distances and the created
// FLPM clients (index into the reduced instance, or -1 when m = 0).
struct NccToFlpmMap {
  struct Source {
    std::vector<double> distances;
    std::vector<double> multiplicities;
    std::vector<long> created;
  };
  std::vector<Source> sources;
};

struct NccReduction {
  FlpmInstance flpm;
  NccToFlpmMap map;
};

// Each client becomes co-located copies with penalty d_k and multiplicity
// m_k; for every facility subset the optimal FLPM cost equals the NCC cost.
NccReduction ncc_to_flpm(const NccInstance& inst);

// delivery price -> schedule for one client
using ScheduleOracle = std::function<Schedule(const DemandSeries&, double)>;

// Exact oracle matching the instance: Wagner-Whitin (monotone holding) or
// brute force when uncapacitated, iap_exact otherwise.
ScheduleOracle exact_schedule_oracle(const SirpflInstance& inst);

struct SirpflReduction {
  NccInstance ncc;
  // Per client: breakpoints {0} U distinct facility distances, and the
  // schedule realizing the envelope value at each breakpoint.
  std::vector<std::vector<double>> breakpoints;
  std::vector<std::vector<Schedule>> schedules;
};

// g_j is the lower envelope of the value lines of oracle(d_j, x) for x in
// {0} U {distances of j to the facilities}.
SirpflReduction sirpfl_to_ncc(const SirpflInstance& inst, const ScheduleOracle& oracle);

// Closest open facility per client with the schedule recorded at that
// distance. Throws ValidationError on an empty open set.
SirpflPlan lift_solution(std::vector<std::size_t> open, const SirpflInstance& inst,
                         const SirpflReduction& reduction);

struct CapacitatedLambda {
  double lambda_f = 0.0;
  double ratio = 0.0;
};

// Balances lambda_f against alpha (1 + 2 e^{-lambda_f}) by bisection.
CapacitatedLambda capacitated_lambda(double alpha);

// Bifactor family of the combined algorithm: 1 + 2 e^{-lambda_f}.
double connection_factor(double lambda_f);

}  // namespace flcc
