#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "flcc/instances.hpp"

namespace flcc {

enum class ObjSense { Minimize, Maximize };
enum class RowSense { Le, Eq, Ge };
enum class LpStatus { Optimal, Infeasible, Unbounded };

// Dense LP: optimize c'x subject to rows (sense) rhs and lower <= x <= upper.
// Bounds default to [0, +inf).
template <typename Scalar>
struct LinearProgram {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  ObjSense sense = ObjSense::Minimize;
  Vector objective;
  Matrix rows;
  std::vector<RowSense> row_sense;
  Vector rhs;
  Vector lower;
  Vector upper;

  LinearProgram() = default;
  explicit LinearProgram(Eigen::Index num_vars, ObjSense s = ObjSense::Minimize)
      : sense(s),
        objective(Vector::Zero(num_vars)),
        rows(0, num_vars),
        rhs(0),
        lower(Vector::Zero(num_vars)),
        upper(Vector::Constant(num_vars, std::numeric_limits<Scalar>::infinity())) {}

  Eigen::Index num_vars() const { return objective.size(); }
  Eigen::Index num_rows() const { return rows.rows(); }

  template <typename Derived>
  void add_row(const Eigen::MatrixBase<Derived>& coeffs, RowSense s, Scalar b) {
    const Eigen::Index r = rows.rows();
    rows.conservativeResize(r + 1, num_vars());
    rows.row(r) = coeffs.transpose();
    rhs.conservativeResize(r + 1);
    rhs(r) = b;
    row_sense.push_back(s);
  }

  bool dimensions_ok() const {
    return rows.cols() == num_vars() && rhs.size() == rows.rows() &&
           static_cast<Eigen::Index>(row_sense.size()) == rows.rows() &&
           lower.size() == num_vars() && upper.size() == num_vars() &&
           (lower.array() <= upper.array()).all();
  }
};

template <typename Scalar>
struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Scalar value = 0;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
};

namespace detail {

// Two-phase tableau simplex with Bland's rule. Works on the standard form
// min c'y, Ay = b, y >= 0, b >= 0 assembled by simplex_solve.
template <typename Scalar>
class Tableau {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Tableau(Matrix a, Vector b, std::vector<Eigen::Index> basis, Eigen::Index first_artificial,
          Scalar eps)
      : m_(a.rows()), n_(a.cols()), first_art_(first_artificial), eps_(eps),
        basis_(std::move(basis)) {
    t_ = Matrix::Zero(m_ + 1, n_ + 1);
    t_.topLeftCorner(m_, n_) = a;
    t_.topRightCorner(m_, 1) = b;
  }

  // Phase 1. False when the artificial objective cannot reach zero.
  bool phase1() {
    Vector c = Vector::Zero(n_);
    c.tail(n_ - first_art_).setOnes();
    set_objective(c);
    if (iterate(n_) != LpStatus::Optimal)
      throw std::logic_error("simplex: phase 1 unbounded");
    const Scalar scale = Scalar(1) + t_.topRightCorner(m_, 1).cwiseAbs().maxCoeff();
    if (-t_(m_, n_) > Scalar(1e-7) * scale) return false;
    drive_out_artificials();
    return true;
  }

  LpStatus phase2(const Vector& c) {
    Vector full = Vector::Zero(n_);
    full.head(c.size()) = c;
    set_objective(full);
    return iterate(first_art_);
  }

  Vector primal() const {
    Vector y = Vector::Zero(n_);
    for (Eigen::Index i = 0; i < m_; ++i) y(basis_[i]) = t_(i, n_);
    return y;
  }

 private:
  void set_objective(const Vector& c) {
    t_.row(m_).head(n_) = c.transpose();
    t_(m_, n_) = 0;
    for (Eigen::Index i = 0; i < m_; ++i) {
      const Scalar cb = c(basis_[i]);
      if (cb != Scalar(0)) t_.row(m_) -= cb * t_.row(i);
    }
  }

  void pivot(Eigen::Index r, Eigen::Index col) {
    t_.row(r) /= t_(r, col);
    for (Eigen::Index i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const Scalar f = t_(i, col);
      if (f != Scalar(0)) t_.row(i) -= f * t_.row(r);
    }
    basis_[r] = col;
  }

  // Columns >= `allowed_end` never enter.
  LpStatus iterate(Eigen::Index allowed_end) {
    const long max_iter = 50000 + 100 * long(m_ + n_);
    for (long it = 0; it < max_iter; ++it) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < allowed_end; ++j)
        if (t_(m_, j) < -eps_) {
          enter = j;
          break;
        }
      if (enter < 0) return LpStatus::Optimal;
      Eigen::Index leave = -1;
      Scalar best = 0;
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (t_(i, enter) <= eps_) continue;
        const Scalar ratio = t_(i, n_) / t_(i, enter);
        if (leave < 0 || ratio < best - eps_) {
          best = ratio;
          leave = i;
        } else if (ratio <= best + eps_ && basis_[i] < basis_[leave]) {
          leave = i;
        }
      }
      if (leave < 0) return LpStatus::Unbounded;
      pivot(leave, enter);
    }
    throw std::runtime_error("simplex: iteration limit reached");
  }

  void drive_out_artificials() {
    for (Eigen::Index i = 0; i < m_;) {
      if (basis_[i] < first_art_) {
        ++i;
        continue;
      }
      Eigen::Index col = -1;
      for (Eigen::Index j = 0; j < first_art_; ++j)
        if (std::abs(t_(i, j)) > eps_) {
          col = j;
          break;
        }
      if (col >= 0) {
        pivot(i, col);
        ++i;
        continue;
      }
      // Redundant row: drop it.
      const Eigen::Index last = m_;
      Matrix next(last, n_ + 1);
      next << t_.topRows(i), t_.middleRows(i + 1, last - i);
      t_ = std::move(next);
      basis_.erase(basis_.begin() + i);
      --m_;
    }
  }

  Eigen::Index m_, n_, first_art_;
  Scalar eps_;
  std::vector<Eigen::Index> basis_;
  Matrix t_;
};

}  // namespace detail

template <typename Scalar>
LpResult<Scalar> simplex_solve(const LinearProgram<Scalar>& lp, Scalar eps = Scalar(1e-9)) {
  using Vector = typename LinearProgram<Scalar>::Vector;
  using Matrix = typename LinearProgram<Scalar>::Matrix;
  if (!lp.dimensions_ok()) throw std::invalid_argument("simplex: inconsistent LP dimensions");
  const Eigen::Index n = lp.num_vars();

  // Substitute x = lower + y, x = upper - y, or x = y+ - y- per variable.
  struct Column { Eigen::Index var; Scalar sign; };
  std::vector<Column> cols;
  std::vector<Eigen::Index> first_col(n);
  Vector offset = Vector::Zero(n);
  std::vector<std::pair<Eigen::Index, Scalar>> upper_rows;  // (column, bound)
  for (Eigen::Index k = 0; k < n; ++k) {
    first_col[k] = static_cast<Eigen::Index>(cols.size());
    const bool lo = std::isfinite(double(lp.lower(k)));
    const bool hi = std::isfinite(double(lp.upper(k)));
    if (lo) {
      offset(k) = lp.lower(k);
      cols.push_back({k, Scalar(1)});
      if (hi) upper_rows.emplace_back(first_col[k], lp.upper(k) - lp.lower(k));
    } else if (hi) {
      offset(k) = lp.upper(k);
      cols.push_back({k, Scalar(-1)});
    } else {
      cols.push_back({k, Scalar(1)});
      cols.push_back({k, Scalar(-1)});
    }
  }
  const Eigen::Index ns = static_cast<Eigen::Index>(cols.size());
  const Eigen::Index m = lp.num_rows() + static_cast<Eigen::Index>(upper_rows.size());

  Matrix a = Matrix::Zero(m, ns);
  Vector b(m);
  std::vector<RowSense> sense(m);
  for (Eigen::Index r = 0; r < lp.num_rows(); ++r) {
    for (Eigen::Index c = 0; c < ns; ++c) a(r, c) = lp.rows(r, cols[c].var) * cols[c].sign;
    b(r) = lp.rhs(r) - lp.rows.row(r).dot(offset);
    sense[r] = lp.row_sense[r];
  }
  for (std::size_t u = 0; u < upper_rows.size(); ++u) {
    const Eigen::Index r = lp.num_rows() + static_cast<Eigen::Index>(u);
    a(r, upper_rows[u].first) = 1;
    b(r) = upper_rows[u].second;
    sense[r] = RowSense::Le;
  }
  for (Eigen::Index r = 0; r < m; ++r)
    if (b(r) < 0) {
      a.row(r) *= -1;
      b(r) = -b(r);
      if (sense[r] == RowSense::Le) sense[r] = RowSense::Ge;
      else if (sense[r] == RowSense::Ge) sense[r] = RowSense::Le;
    }

  Eigen::Index n_slack = 0, n_art = 0;
  for (auto s : sense) {
    if (s != RowSense::Eq) ++n_slack;
    if (s != RowSense::Le) ++n_art;
  }
  const Eigen::Index total = ns + n_slack + n_art;
  Matrix full = Matrix::Zero(m, total);
  full.leftCols(ns) = a;
  std::vector<Eigen::Index> basis(m);
  Eigen::Index slack = ns, art = ns + n_slack;
  for (Eigen::Index r = 0; r < m; ++r) {
    if (sense[r] == RowSense::Le) {
      full(r, slack) = 1;
      basis[r] = slack++;
    } else {
      if (sense[r] == RowSense::Ge) full(r, slack++) = -1;
      full(r, art) = 1;
      basis[r] = art++;
    }
  }

  detail::Tableau<Scalar> tab(std::move(full), b, std::move(basis), ns + n_slack, eps);
  LpResult<Scalar> res;
  if (!tab.phase1()) {
    res.status = LpStatus::Infeasible;
    return res;
  }
  const Scalar dir = lp.sense == ObjSense::Maximize ? Scalar(-1) : Scalar(1);
  Vector c(ns);
  for (Eigen::Index k = 0; k < ns; ++k) c(k) = dir * lp.objective(cols[k].var) * cols[k].sign;
  res.status = tab.phase2(c);
  if (res.status != LpStatus::Optimal) return res;

  const Vector y = tab.primal();
  res.x = offset;
  for (Eigen::Index k = 0; k < ns; ++k) res.x(cols[k].var) += cols[k].sign * y(k);
  res.value = lp.objective.dot(res.x);
  return res;
}

// LP relaxation of FLPM: min sum f_i y_i + sum_j m_j (sum_i d_ij x_ij + p_j z_j)
// s.t. sum_i x_ij + z_j = 1, x_ij <= y_i, all >= 0. z_j is omitted for p_j = inf.
double flp_lp_lowerbound(const FlpmInstance& inst);

}  // namespace flcc
