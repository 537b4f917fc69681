#pragma once

#include <Eigen/Dense>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "flcc/concave_fn.hpp"
#include "flcc/metric.hpp"

namespace flcc {


struct Facility {
  std::string id;
  double opening_cost = 0.0;
};

struct FlpmClient {
  std::string id;
  double penalty = kInf;  // in (0, inf]
  double multiplicity = 1.0;
};

// Facility location with penalties and multiplicities. `dist(j, i)` is the
// distance from client j to facility i. UFL is p = inf, m = 1; FLP is m = 1.
struct FlpmInstance {
  std::vector<Facility> facilities;
  std::vector<FlpmClient> clients;
  Eigen::MatrixXd dist;  // clients x facilities
  // Cleared when distances came from an unchecked source (ORLIB) and fail
  // the bipartite triangle test.
  bool metric = true;

  std::size_t num_facilities() const { return facilities.size(); }
  std::size_t num_clients() const { return clients.size(); }
};

struct NccClient {
  std::string id;
  ConcaveFn g;
};

struct NccInstance {
  std::vector<Facility> facilities;
  std::vector<NccClient> clients;
  Eigen::MatrixXd dist;  // clients x facilities

  std::size_t num_facilities() const { return facilities.size(); }
  std::size_t num_clients() const { return clients.size(); }
};

struct SirpflClient {
  std::string id;
  Eigen::VectorXd demands;  // u_t, t = 0..T-1
  Eigen::MatrixXd holding;  // h(s, t) per unit, read only for s <= t
};

struct SirpflInstance {
  std::vector<Facility> facilities;
  std::vector<SirpflClient> clients;
  Eigen::MatrixXd dist;  // clients x facilities
  int horizon = 1;
  double capacity = kInf;
  bool splittable = true;

  std::size_t num_facilities() const { return facilities.size(); }
  std::size_t num_clients() const { return clients.size(); }
  bool capacitated() const { return capacity < kInf; }
};

struct Costs {
  double opening = 0.0;
  double connection = 0.0;
  double penalty = 0.0;
  double total = 0.0;
};

// Open facility set plus, per client, the serving facility or nullopt when
// the client pays its penalty.
struct FlSolution {
  std::vector<std::size_t> open;
  std::vector<std::optional<std::size_t>> assignment;
  Costs costs;
};

// Throw ValidationError naming the offending field.
void validate(const FlpmInstance& inst);
void validate(const NccInstance& inst);
void validate(const SirpflInstance& inst);

// Invariant check of a solution against its instance (assigned facilities
// open, cost decomposition consistent). Throws ValidationError.
void validate(const FlSolution& sol, const FlpmInstance& inst,
              double tol = 1e-7);

// Opening + optimal connection/penalty split for a fixed open set.
Costs evaluate_open_set(const FlpmInstance& inst,
                        const std::vector<std::size_t>& open);
// Same with the assignment: closest open facility when d <= p, else penalty.
FlSolution assign_to_open_set(const FlpmInstance& inst,
                              std::vector<std::size_t> open);

// NCC cost of a nonempty open set: opening + sum_j g_j(closest distance).
double ncc_cost(const NccInstance& inst, const std::vector<std::size_t>& open);

// Index of the closest facility in `open` for client row `j` (lowest index on ties).
std::size_t closest_open(const Eigen::MatrixXd& dist, Eigen::Index j,
                         const std::vector<std::size_t>& open);

}  // namespace flcc
