#include "flcc/concave_fn.hpp"

#include <cmath>
#include <sstream>

#include "flcc/errors.hpp"

namespace flcc {

std::string ConcaveFn::check(const std::vector<Breakpoint>& pts, double tol) {
  std::ostringstream os;
  if (pts.empty()) return "no breakpoints";
  if (pts.front().x != 0.0) return "first breakpoint must be at x = 0";
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (!std::isfinite(pts[k].x) || !std::isfinite(pts[k].y)) {
      os << "breakpoint " << k << " not finite";
      return os.str();
    }
    if (pts[k].y < 0.0) {
      os << "breakpoint " << k << " has negative value";
      return os.str();
    }
  }
  double prev_slope = kInf;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double dx = pts[k + 1].x - pts[k].x;
    const double dy = pts[k + 1].y - pts[k].y;
    if (!(dx > 0.0)) {
      os << "x not strictly increasing at breakpoint " << k + 1;
      return os.str();
    }
    if (dy < -tol) {
      os << "decreasing at breakpoint " << k + 1;
      return os.str();
    }
    const double slope = dy / dx;
    if (slope > prev_slope + tol * (1.0 + std::abs(prev_slope))) {
      os << "not concave at breakpoint " << k;
      return os.str();
    }
    prev_slope = slope;
  }
  return {};
}

ConcaveFn::ConcaveFn(std::vector<Breakpoint> points, double tol,
                     const std::string& field)
    : points_(std::move(points)) {
  if (auto err = check(points_, tol); !err.empty())
    throw ValidationError(field, err);
}

double ConcaveFn::last_slope() const {
  if (points_.size() < 2) return 0.0;
  const auto& a = points_[points_.size() - 2];
  const auto& b = points_.back();
  return (b.y - a.y) / (b.x - a.x);
}

double ConcaveFn::operator()(double x) const {
  if (x <= points_.front().x) return points_.front().y;
  for (std::size_t k = 0; k + 1 < points_.size(); ++k) {
    const auto& a = points_[k];
    const auto& b = points_[k + 1];
    if (x == b.x) return b.y;
    if (x < b.x) return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
  }
  return points_.back().y + last_slope() * (x - points_.back().x);
}

}  // namespace flcc
