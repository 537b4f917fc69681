#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "flcc/instances.hpp"
#include "flcc/jms.hpp"

namespace flcc {

// A point of the factor-revealing program for one star of k clients ordered
// by t: client times t, distances d to the star facility, penalties p, the
// distance r(j, i) (j < i) of client j to its closest open facility just
// before t_i, and the facility cost f. `z` and `m` are filled in by the
// reduction chain.
struct FrSolution {
  Eigen::VectorXd t, d, p;
  Eigen::MatrixXd r;
  double f = 0.0;
  std::optional<Eigen::VectorXd> z;

  static FrSolution zeros(int k);
  int k() const { return static_cast<int>(t.size()); }
};

enum class FrConstraint {
  Opening,       // penalized opening budget per l
  TMonotone,     // t_i <= t_{i+1}
  RMonotone,     // r(j,i) >= r(j,i+1)
  Metric,        // t_i <= r(j,i) + d_i + d_j
  RBelowT,       // r(i,l) <= t_i
  PAboveD,       // p_i >= d_i
  Nonnegative,
  ZRange,        // 0 <= z_i <= 1
  ZGrid,         // z_i multiple of 1/M
  Dimensions,
};

struct FrViolation {
  FrConstraint constraint;
  int a = 0, b = 0;
  double excess = 0.0;
  std::string describe() const;
};

// Penalized program: opening constraint with min{., p} terms, plus
// t-monotone, r-monotone, metric, r <= t, p >= d, nonnegativity.
std::vector<FrViolation> check_feasible_P(const FrSolution& s, double tol = 1e-7);
// z-weighted opening constraint without p; requires s.z.
std::vector<FrViolation> check_feasible_P1(const FrSolution& s, double tol = 1e-7);
// As P1 with every z_i on the grid {0, 1/M, ..., 1}.
std::vector<FrViolation> check_feasible_P2(const FrSolution& s, std::int64_t M, double tol = 1e-7);
// Integer-weighted opening constraint, t-monotone, r-monotone, metric, nonnegativity.
std::vector<FrViolation> check_feasible_Phat(const FrSolution& s, std::span<const std::int64_t> m,
                                             double tol = 1e-7);

// (sum min{t_i, p_i} - lambda_f f) / sum d_i
double eval_P(const FrSolution& s, double lambda_f);
// (sum d_i + z_i (t_i - d_i) - lambda_f f) / sum d_i
double eval_P1(const FrSolution& s, double lambda_f);
// (sum m_i t_i - lambda_f f) / sum m_i d_i
double eval_Phat(const FrSolution& s, std::span<const std::int64_t> m, double lambda_f);

// z_i = (min{t_i, p_i} - d_i) / (t_i - d_i), or 0 when t_i <= d_i.
FrSolution step1_z(const FrSolution& s, double tol = 1e-7);

struct Discretized {
  FrSolution solution;  // z rounded up to multiples of 1/M, f scaled by (N+1)/N
  std::int64_t M = 1;
  std::int64_t N = 1;
};

// N = ceil(lambda_f f / (eps sum d)) (at least 1), M = N ceil(max 1/z_i over
// z_i > 0) (the max over an empty set is 1).
Discretized step2_discretize(const FrSolution& s1, double lambda_f, double eps);

struct PhatPoint {
  std::vector<std::int64_t> m;  // M z'_i
  FrSolution solution;          // same t, d, r; f = M f'
};

PhatPoint build_phat(const Discretized& s2);

// m = (1, 0, ..., 0), t = d = 1, r = 0, f = 0: feasible with value 1.
PhatPoint unit_phat_witness(int k);

struct ChainReport {
  double v_p = 0, v_p1 = 0, v_p2 = 0;
  std::optional<double> v_phat;  // literal construction; none when sum m d = 0
  double v_witness = 0;          // max of the literal value and the unit witness
  bool literal_used = false;     // literal construction dominates the unit witness
  std::int64_t M = 1, N = 1;
  bool p1_feasible = false, p2_feasible = false, phat_feasible = false;
  bool step1_ok = false;         // v_p <= v_p1
  bool step1_equal = false;      // v_p = v_p1; fails exactly when some t_i < d_i
  bool step2_ok = false;         // v_p1 <= v_p2 + eps
  bool final_ok = false;         // v_p2 <= v_witness
  bool chain_ok = false;         // v_p <= v_witness + eps
};

// Runs step1 -> step2 -> build_phat on a feasible point of P(k) and checks
// every link separately.
ChainReport verify_chain(const FrSolution& s, double lambda_f, double eps, double tol = 1e-7);

struct FrLimits {
  int max_k_phat = 4;
  int max_k_p = 3;
  bool override_guard = false;
};

struct FrProgramResult {
  double value = 0.0;
  FrSolution argmax;
  std::size_t patterns_total = 0;
  std::size_t patterns_solved = 0;  // patterns whose LP was feasible
};

// Exact maximum of the integer-weighted program by enumerating which
// [.]+ terms are positive and solving one LP per pattern.
FrProgramResult solve_phat(int k, std::span<const std::int64_t> m, double lambda_f,
                           const FrLimits& limits = {});

// Exact maximum of the penalized program; three cases per term
// (min attained by the first argument, by p, or clamped to zero).
FrProgramResult solve_P(int k, double lambda_f, const FrLimits& limits = {});

// Random feasible point of P(k) normalized to sum d = 1, with f the smallest
// opening cost allowed by the other coordinates.
FrSolution random_feasible_P(int k, std::mt19937_64& rng);

// Stars of the fixed solution `open` (clients served by each facility with
// d <= p), each as a point of P(k) built from the run: t_j is the budget of
// a client that never ran out and otherwise the first time an open facility
// is within distance t; r(j,i) the distance from j to its closest facility
// opened before t_i, capped at t_j. Requires unit multiplicities. Clients
// for which t_j is undefined (no facility ever opened) are left out.
std::vector<FrSolution> extract_stars(const FlpmInstance& inst, const JmsResult& run,
                                      const std::vector<std::size_t>& open);

nlohmann::json to_json(const FrSolution& s);

}  // namespace flcc
