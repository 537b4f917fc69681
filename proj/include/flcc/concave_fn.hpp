#pragma once

#include <utility>
#include <vector>

#include "flcc/metric.hpp"

namespace flcc {

struct Breakpoint {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

// Nondecreasing concave piecewise-linear function on [0, inf). Linear
// interpolation between breakpoints, last-slope extrapolation past the end.
class ConcaveFn {
 public:
  ConcaveFn() : points_{{0.0, 0.0}} {}

  // Throws ValidationError(field) when the breakpoints are not a valid
  // nondecreasing concave function starting at x = 0.
  explicit ConcaveFn(std::vector<Breakpoint> points, double tol = kDefaultTol,
                     const std::string& field = "g");

  double operator()(double x) const;

  const std::vector<Breakpoint>& breakpoints() const { return points_; }
  double last_slope() const;

  // Empty string when the invariants hold; otherwise a description.
  static std::string check(const std::vector<Breakpoint>& points,
                           double tol = kDefaultTol);

  friend bool operator==(const ConcaveFn&, const ConcaveFn&) = default;

 private:
  std::vector<Breakpoint> points_;
};

}  // namespace flcc
