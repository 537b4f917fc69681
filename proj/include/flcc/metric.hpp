#pragma once

#include <Eigen/Dense>
#include <limits>
#include <string>
#include <vector>

namespace flcc {

inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct MetricSpace {
  Eigen::MatrixXd dist;  // square, symmetric, zero diagonal

  Eigen::Index size() const { return dist.rows(); }
};

struct MetricViolation {
  enum class Kind { NonSquare, Negative, NonzeroDiagonal, Asymmetry, Triangle };
  Kind kind;
  Eigen::Index a = 0, b = 0, c = 0;

  std::string describe() const;
  friend bool operator==(const MetricViolation&, const MetricViolation&) = default;
};

// Every violated MetricSpace invariant; empty iff `dist` is a metric within tol.
std::vector<MetricViolation> validate_metric(const Eigen::MatrixXd& dist,
                                             double tol = kDefaultTol);

// Client x facility distances only: checks d(j,i) <= d(j,i') + d(j',i') + d(j',i),
// the part of the triangle inequality visible without client-client and
// facility-facility distances. Returns true when no violation is found.
bool bipartite_triangle_ok(const Eigen::MatrixXd& client_facility,
                           double tol = kDefaultTol);

// Euclidean distances between the rows of `points`.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
euclidean_distances(const Eigen::MatrixBase<Derived>& points) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = points.rows();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> d(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      d(a, b) = (points.row(a) - points.row(b)).norm();
  return d;
}

}  // namespace flcc
