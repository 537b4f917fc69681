#include "flcc/metric.hpp"

#include <cmath>
#include <sstream>

namespace flcc {

std::string MetricViolation::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::NonSquare:
      os << "non-square matrix";
      break;
    case Kind::Negative:
      os << "negative entry (" << a << "," << b << ")";
      break;
    case Kind::NonzeroDiagonal:
      os << "nonzero diagonal (" << a << ")";
      break;
    case Kind::Asymmetry:
      os << "asymmetry (" << a << "," << b << ")";
      break;
    case Kind::Triangle:
      os << "triangle violation (" << a << "," << b << "," << c << ")";
      break;
  }
  return os.str();
}

std::vector<MetricViolation> validate_metric(const Eigen::MatrixXd& dist,
                                             double tol) {
  using K = MetricViolation::Kind;
  std::vector<MetricViolation> out;
  if (dist.rows() != dist.cols()) {
    out.push_back({K::NonSquare});
    return out;
  }
  const Eigen::Index n = dist.rows();
  for (Eigen::Index a = 0; a < n; ++a) {
    if (std::abs(dist(a, a)) > tol) out.push_back({K::NonzeroDiagonal, a});
    for (Eigen::Index b = 0; b < n; ++b) {
      if (!(dist(a, b) >= 0.0)) out.push_back({K::Negative, a, b});
      if (a < b && std::abs(dist(a, b) - dist(b, a)) > tol)
        out.push_back({K::Asymmetry, a, b});
    }
  }
  // Reported as (a, b, c): side a-c exceeds the detour through b.
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index c = a + 1; c < n; ++c)
      for (Eigen::Index b = 0; b < n; ++b) {
        if (b == a || b == c) continue;
        if (dist(a, c) > dist(a, b) + dist(b, c) + tol)
          out.push_back({K::Triangle, a, b, c});
      }
  return out;
}

bool bipartite_triangle_ok(const Eigen::MatrixXd& d, double tol) {
  const Eigen::Index nc = d.rows(), nf = d.cols();
  for (Eigen::Index j = 0; j < nc; ++j)
    for (Eigen::Index i = 0; i < nf; ++i)
      for (Eigen::Index j2 = 0; j2 < nc; ++j2)
        for (Eigen::Index i2 = 0; i2 < nf; ++i2)
          if (d(j, i) > d(j, i2) + d(j2, i2) + d(j2, i) + tol) return false;
  return true;
}

}  // namespace flcc
