#include "flcc/frlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "flcc/errors.hpp"
#include "flcc/lp.hpp"
#include "flcc/serialization.hpp"

namespace flcc {

namespace {

double pos(double x) { return x > 0.0 ? x : 0.0; }

const char* name(FrConstraint c) {
  switch (c) {
    case FrConstraint::Opening: return "opening";
    case FrConstraint::TMonotone: return "t-monotone";
    case FrConstraint::RMonotone: return "r-monotone";
    case FrConstraint::Metric: return "metric";
    case FrConstraint::RBelowT: return "r-below-t";
    case FrConstraint::PAboveD: return "p-above-d";
    case FrConstraint::Nonnegative: return "nonnegative";
    case FrConstraint::ZRange: return "z-range";
    case FrConstraint::ZGrid: return "z-grid";
    case FrConstraint::Dimensions: return "dimensions";
  }
  return "?";
}

// Collects violations of lhs <= rhs with a tolerance relative to the magnitudes.
struct Collector {
  double tol;
  std::vector<FrViolation> out;

  void le(FrConstraint c, int a, int b, double lhs, double rhs) {
    const double excess = lhs - rhs;
    if (excess > tol * (1.0 + std::max(std::abs(lhs), std::abs(rhs))))
      out.push_back({c, a, b, excess});
  }
};

bool dims_ok(const FrSolution& s, bool need_p, bool need_z) {
  const auto k = s.t.size();
  if (s.d.size() != k || s.r.rows() != k || s.r.cols() != k) return false;
  if (need_p && s.p.size() != k) return false;
  if (need_z && (!s.z || s.z->size() != k)) return false;
  return true;
}

// Constraints shared by every variant: t-monotone, r-monotone, metric,
// nonnegativity of t, d, r, f.
void common(const FrSolution& s, Collector& c) {
  const int k = s.k();
  for (int i = 0; i + 1 < k; ++i) c.le(FrConstraint::TMonotone, i, i + 1, s.t(i), s.t(i + 1));
  for (int j = 0; j < k; ++j)
    for (int i = j + 1; i + 1 < k; ++i)
      c.le(FrConstraint::RMonotone, j, i, s.r(j, i + 1), s.r(j, i));
  for (int j = 0; j < k; ++j)
    for (int i = j + 1; i < k; ++i)
      c.le(FrConstraint::Metric, j, i, s.t(i), s.r(j, i) + s.d(i) + s.d(j));
  for (int i = 0; i < k; ++i) {
    c.le(FrConstraint::Nonnegative, i, i, -s.t(i), 0.0);
    c.le(FrConstraint::Nonnegative, i, i, -s.d(i), 0.0);
    for (int l = i + 1; l < k; ++l) c.le(FrConstraint::Nonnegative, i, l, -s.r(i, l), 0.0);
  }
  c.le(FrConstraint::Nonnegative, -1, -1, -s.f, 0.0);
}

void r_below_t(const FrSolution& s, Collector& c) {
  for (int i = 0; i < s.k(); ++i)
    for (int l = i + 1; l < s.k(); ++l) c.le(FrConstraint::RBelowT, i, l, s.r(i, l), s.t(i));
}

// Weighted opening constraint: sum_{i<l} w_i [r(i,l) - d_i]+ + sum_{i>=l} w_i [t_l - d_i]+ <= f.
template <typename Weight>
void weighted_opening(const FrSolution& s, Weight w, Collector& c) {
  const int k = s.k();
  for (int l = 0; l < k; ++l) {
    double lhs = 0.0;
    for (int i = 0; i < l; ++i) lhs += w(i) * pos(s.r(i, l) - s.d(i));
    for (int i = l; i < k; ++i) lhs += w(i) * pos(s.t(l) - s.d(i));
    c.le(FrConstraint::Opening, l, -1, lhs, s.f);
  }
}

std::vector<FrViolation> dimension_error() { return {{FrConstraint::Dimensions, -1, -1, 0.0}}; }

double sum_d(const FrSolution& s) {
  const double D = s.d.sum();
  if (!(D > 0.0)) throw std::domain_error("sum of d must be positive");
  return D;
}

void require_feasible(const std::vector<FrViolation>& v, const char* program) {
  if (v.empty()) return;
  throw ValidationError("solution", std::string("infeasible for ") + program + ": " +
                                        v.front().describe());
}

}  // namespace

FrSolution FrSolution::zeros(int k) {
  FrSolution s;
  s.t = Eigen::VectorXd::Zero(k);
  s.d = Eigen::VectorXd::Zero(k);
  s.p = Eigen::VectorXd::Zero(k);
  s.r = Eigen::MatrixXd::Zero(k, k);
  return s;
}

std::string FrViolation::describe() const {
  std::ostringstream os;
  os << name(constraint);
  if (a >= 0) os << " (" << a << (b >= 0 ? "," + std::to_string(b) : std::string()) << ")";
  os << " exceeded by " << excess;
  return os.str();
}

std::vector<FrViolation> check_feasible_P(const FrSolution& s, double tol) {
  if (!dims_ok(s, true, false)) return dimension_error();
  Collector c{tol, {}};
  const int k = s.k();
  for (int l = 0; l < k; ++l) {
    double lhs = 0.0;
    for (int i = 0; i < l; ++i) lhs += pos(std::min(s.r(i, l), s.p(i)) - s.d(i));
    for (int i = l; i < k; ++i) lhs += pos(std::min(s.t(l), s.p(i)) - s.d(i));
    c.le(FrConstraint::Opening, l, -1, lhs, s.f);
  }
  common(s, c);
  r_below_t(s, c);
  for (int i = 0; i < k; ++i) {
    c.le(FrConstraint::PAboveD, i, -1, s.d(i), s.p(i));
    c.le(FrConstraint::Nonnegative, i, i, -s.p(i), 0.0);
  }
  return c.out;
}

std::vector<FrViolation> check_feasible_P1(const FrSolution& s, double tol) {
  if (!dims_ok(s, false, true)) return dimension_error();
  Collector c{tol, {}};
  const auto& z = *s.z;
  weighted_opening(s, [&](int i) { return z(i); }, c);
  common(s, c);
  r_below_t(s, c);
  for (int i = 0; i < s.k(); ++i) {
    c.le(FrConstraint::ZRange, i, -1, -z(i), 0.0);
    c.le(FrConstraint::ZRange, i, -1, z(i), 1.0);
  }
  return c.out;
}

std::vector<FrViolation> check_feasible_P2(const FrSolution& s, std::int64_t M, double tol) {
  auto out = check_feasible_P1(s, tol);
  if (!out.empty() && out.front().constraint == FrConstraint::Dimensions) return out;
  if (M < 1) return dimension_error();
  for (int i = 0; i < s.k(); ++i) {
    const double zm = (*s.z)(i) * static_cast<double>(M);
    const double off = std::abs(zm - std::round(zm));
    if (off > 1e-6) out.push_back({FrConstraint::ZGrid, i, -1, off});
  }
  return out;
}

std::vector<FrViolation> check_feasible_Phat(const FrSolution& s, std::span<const std::int64_t> m,
                                             double tol) {
  if (!dims_ok(s, false, false) || m.size() != static_cast<std::size_t>(s.k()))
    return dimension_error();
  Collector c{tol, {}};
  weighted_opening(s, [&](int i) { return static_cast<double>(m[i]); }, c);
  common(s, c);
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m[i] < 0) c.out.push_back({FrConstraint::Nonnegative, static_cast<int>(i), -1,
                                   static_cast<double>(-m[i])});
  return c.out;
}

double eval_P(const FrSolution& s, double lambda_f) {
  double num = -lambda_f * s.f;
  for (int i = 0; i < s.k(); ++i) num += std::min(s.t(i), s.p(i));
  return num / sum_d(s);
}

double eval_P1(const FrSolution& s, double lambda_f) {
  if (!s.z) throw std::invalid_argument("eval_P1 needs z");
  double num = -lambda_f * s.f;
  for (int i = 0; i < s.k(); ++i) num += s.d(i) + (*s.z)(i) * (s.t(i) - s.d(i));
  return num / sum_d(s);
}

double eval_Phat(const FrSolution& s, std::span<const std::int64_t> m, double lambda_f) {
  double num = -lambda_f * s.f, den = 0.0;
  for (int i = 0; i < s.k(); ++i) {
    num += static_cast<double>(m[i]) * s.t(i);
    den += static_cast<double>(m[i]) * s.d(i);
  }
  if (!(den > 0.0)) throw std::domain_error("sum of m d must be positive");
  return num / den;
}

FrSolution step1_z(const FrSolution& s, double tol) {
  require_feasible(check_feasible_P(s, tol), "P(k)");
  FrSolution out = s;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(s.k());
  for (int i = 0; i < s.k(); ++i)
    if (s.t(i) > s.d(i))
      z(i) = std::clamp((std::min(s.t(i), s.p(i)) - s.d(i)) / (s.t(i) - s.d(i)), 0.0, 1.0);
  out.z = z;
  return out;
}

Discretized step2_discretize(const FrSolution& s1, double lambda_f, double eps) {
  if (!s1.z) throw std::invalid_argument("step2_discretize needs z");
  if (!(eps > 0.0)) throw ValidationError("eps", "must be positive");
  const auto& z = *s1.z;
  constexpr double kMaxGrid = 1e15;

  const double n_real = std::ceil(lambda_f * s1.f / (eps * sum_d(s1)) - 1e-12);
  double max_inv = 1.0;
  bool any = false;
  for (int i = 0; i < s1.k(); ++i)
    if (z(i) > 0.0) {
      max_inv = any ? std::max(max_inv, 1.0 / z(i)) : 1.0 / z(i);
      any = true;
    }
  const double m_real = std::max(1.0, n_real) * std::ceil(max_inv - 1e-12);
  if (!(m_real <= kMaxGrid)) throw ScaleGuardError("discretization grid too fine");

  Discretized out;
  out.N = std::max<std::int64_t>(1, static_cast<std::int64_t>(n_real));
  out.M = static_cast<std::int64_t>(m_real);
  out.solution = s1;
  Eigen::VectorXd zp(s1.k());
  const double M = static_cast<double>(out.M);
  for (int i = 0; i < s1.k(); ++i) zp(i) = std::ceil(z(i) * M - 1e-9) / M;
  out.solution.z = zp;
  out.solution.f = s1.f * static_cast<double>(out.N + 1) / static_cast<double>(out.N);
  return out;
}

PhatPoint build_phat(const Discretized& s2) {
  const auto& z = *s2.solution.z;
  const double M = static_cast<double>(s2.M);
  PhatPoint out;
  out.solution = s2.solution;
  out.solution.z.reset();
  out.solution.f = M * s2.solution.f;
  for (int i = 0; i < z.size(); ++i) {
    const double mi = M * z(i);
    const double rounded = std::round(mi);
    if (std::abs(mi - rounded) > 1e-6) throw std::logic_error("non-integral multiplicity");
    out.m.push_back(static_cast<std::int64_t>(rounded));
  }
  return out;
}

PhatPoint unit_phat_witness(int k) {
  PhatPoint w;
  w.solution = FrSolution::zeros(k);
  w.solution.t.setOnes();
  w.solution.d.setOnes();
  w.solution.p.setConstant(kInf);
  w.m.assign(k, 0);
  w.m[0] = 1;
  return w;
}

ChainReport verify_chain(const FrSolution& s, double lambda_f, double eps, double tol) {
  ChainReport rep;
  rep.v_p = eval_P(s, lambda_f);

  const FrSolution s1 = step1_z(s, tol);
  rep.v_p1 = eval_P1(s1, lambda_f);
  rep.p1_feasible = check_feasible_P1(s1, tol).empty();
  rep.step1_ok = rep.v_p <= rep.v_p1 + tol * (1.0 + std::abs(rep.v_p));
  rep.step1_equal = std::abs(rep.v_p - rep.v_p1) <= tol * (1.0 + std::abs(rep.v_p));

  const Discretized s2 = step2_discretize(s1, lambda_f, eps);
  rep.M = s2.M;
  rep.N = s2.N;
  rep.v_p2 = eval_P1(s2.solution, lambda_f);
  rep.p2_feasible = check_feasible_P2(s2.solution, s2.M, tol).empty();
  rep.step2_ok = rep.v_p1 <= rep.v_p2 + eps + tol;

  const PhatPoint hat = build_phat(s2);
  double mass = 0.0;
  for (int i = 0; i < s.k(); ++i) mass += static_cast<double>(hat.m[i]) * s.d(i);
  rep.phat_feasible = check_feasible_Phat(hat.solution, hat.m, tol).empty();
  if (mass > 0.0) rep.v_phat = eval_Phat(hat.solution, hat.m, lambda_f);

  const PhatPoint unit = unit_phat_witness(s.k());
  const double v_unit = eval_Phat(unit.solution, unit.m, lambda_f);
  rep.literal_used = rep.phat_feasible && rep.v_phat && *rep.v_phat >= v_unit;
  rep.v_witness = rep.literal_used ? *rep.v_phat : v_unit;
  rep.final_ok = rep.v_p2 <= rep.v_witness + tol * (1.0 + std::abs(rep.v_p2));
  rep.chain_ok = rep.v_p <= rep.v_witness + eps + tol;
  return rep;
}

namespace {

// Index layout shared by the pattern LPs.
struct Layout {
  int k;
  int t(int i) const { return i; }
  int d(int i) const { return k + i; }
  // r(j, i) for j < i, packed row by row.
  int r(int j, int i) const { return base_r + j * k - j * (j + 1) / 2 + (i - j - 1); }
  int base_r;
  int f;
  int n;
};

Layout make_layout(int k, int extra_before_r) {
  Layout L;
  L.k = k;
  L.base_r = 2 * k + extra_before_r;
  L.f = L.base_r + k * (k - 1) / 2;
  L.n = L.f + 1;
  return L;
}

// (2), (3), (4) rows on the common layout.
void add_structure(LinearProgram<double>& lp, const Layout& L) {
  const int k = L.k;
  Eigen::VectorXd row(L.n);
  for (int i = 0; i + 1 < k; ++i) {
    row.setZero();
    row(L.t(i)) = 1;
    row(L.t(i + 1)) = -1;
    lp.add_row(row, RowSense::Le, 0.0);
  }
  for (int j = 0; j < k; ++j)
    for (int i = j + 1; i + 1 < k; ++i) {
      row.setZero();
      row(L.r(j, i + 1)) = 1;
      row(L.r(j, i)) = -1;
      lp.add_row(row, RowSense::Le, 0.0);
    }
  for (int j = 0; j < k; ++j)
    for (int i = j + 1; i < k; ++i) {
      row.setZero();
      row(L.t(i)) = 1;
      row(L.r(j, i)) = -1;
      row(L.d(i)) -= 1;
      row(L.d(j)) -= 1;
      lp.add_row(row, RowSense::Le, 0.0);
    }
}

FrSolution unpack(const Eigen::VectorXd& x, const Layout& L) {
  FrSolution s = FrSolution::zeros(L.k);
  for (int i = 0; i < L.k; ++i) {
    s.t(i) = x(L.t(i));
    s.d(i) = x(L.d(i));
  }
  for (int j = 0; j < L.k; ++j)
    for (int i = j + 1; i < L.k; ++i) s.r(j, i) = x(L.r(j, i));
  s.f = x(L.f);
  return s;
}

// One [x - d_i]+ style term of the opening constraint for facility index l.
struct Term {
  int l, i;
  int x;  // LP column holding r(i,l) or t_l
};

std::vector<Term> opening_terms(const Layout& L, const std::vector<bool>& keep) {
  std::vector<Term> terms;
  for (int l = 0; l < L.k; ++l)
    for (int i = 0; i < L.k; ++i)
      if (keep[i]) terms.push_back({l, i, i < l ? L.r(i, l) : L.t(l)});
  return terms;
}

void take_better(FrProgramResult& best, bool& have, const LpResult<double>& res,
                 const FrSolution& sol) {
  ++best.patterns_solved;
  const double v = res.status == LpStatus::Unbounded ? kInf : res.value;
  if (!have || v > best.value) {
    best.value = v;
    best.argmax = sol;
    have = true;
  }
}

}  // namespace

FrProgramResult solve_phat(int k, std::span<const std::int64_t> m, double lambda_f,
                           const FrLimits& limits) {
  if (k < 1 || m.size() != static_cast<std::size_t>(k))
    throw ValidationError("m", "needs one multiplicity per client");
  if (k > limits.max_k_phat && !limits.override_guard)
    throw ScaleGuardError("solve_phat limited to k <= " + std::to_string(limits.max_k_phat));
  std::vector<bool> keep(k);
  bool any = false;
  for (int i = 0; i < k; ++i) {
    if (m[i] < 0) throw ValidationError("m", "multiplicities must be nonnegative");
    keep[i] = m[i] > 0;
    any = any || keep[i];
  }
  if (!any) throw ValidationError("m", "at least one multiplicity must be positive");

  const Layout L = make_layout(k, 0);
  const auto terms = opening_terms(L, keep);
  const std::size_t patterns = std::size_t{1} << terms.size();

  LinearProgram<double> base(L.n, ObjSense::Maximize);
  for (int i = 0; i < k; ++i) base.objective(L.t(i)) = static_cast<double>(m[i]);
  base.objective(L.f) = -lambda_f;
  Eigen::VectorXd row = Eigen::VectorXd::Zero(L.n);
  for (int i = 0; i < k; ++i) row(L.d(i)) = static_cast<double>(m[i]);
  base.add_row(row, RowSense::Eq, 1.0);
  add_structure(base, L);

  FrProgramResult best;
  best.patterns_total = patterns;
  bool have = false;
  for (std::size_t pat = 0; pat < patterns; ++pat) {
    LinearProgram<double> lp = base;
    std::vector<Eigen::VectorXd> opening(k, Eigen::VectorXd::Zero(L.n));
    for (int l = 0; l < k; ++l) opening[l](L.f) = -1;
    for (std::size_t q = 0; q < terms.size(); ++q) {
      const auto& tm = terms[q];
      const bool active = (pat >> q) & 1U;
      row.setZero();
      row(tm.x) = 1;
      row(L.d(tm.i)) -= 1;
      if (active) {
        lp.add_row(row, RowSense::Ge, 0.0);
        opening[tm.l] += static_cast<double>(m[tm.i]) * row;
      } else {
        lp.add_row(row, RowSense::Le, 0.0);
      }
    }
    for (const auto& o : opening) lp.add_row(o, RowSense::Le, 0.0);
    const auto res = simplex_solve(lp);
    if (res.status == LpStatus::Infeasible) continue;
    FrSolution sol = res.status == LpStatus::Optimal ? unpack(res.x, L) : FrSolution::zeros(k);
    sol.p.setConstant(kInf);
    take_better(best, have, res, sol);
  }
  if (!have) throw std::logic_error("every sign pattern infeasible");
  return best;
}

FrProgramResult solve_P(int k, double lambda_f, const FrLimits& limits) {
  if (k < 1) throw ValidationError("k", "must be positive");
  if (k > limits.max_k_p && !limits.override_guard)
    throw ScaleGuardError("solve_P limited to k <= " + std::to_string(limits.max_k_p));

  // Columns: t, d, then p and w (w_i stands for min{t_i, p_i}), r, f.
  const Layout L = make_layout(k, 2 * k);
  auto p = [&](int i) { return 2 * k + i; };
  auto w = [&](int i) { return 3 * k + i; };
  const auto terms = opening_terms(L, std::vector<bool>(k, true));
  std::size_t patterns = 1;
  for (std::size_t q = 0; q < terms.size(); ++q) patterns *= 3;

  LinearProgram<double> base(L.n, ObjSense::Maximize);
  for (int i = 0; i < k; ++i) base.objective(w(i)) = 1.0;
  base.objective(L.f) = -lambda_f;
  Eigen::VectorXd row = Eigen::VectorXd::Zero(L.n);
  for (int i = 0; i < k; ++i) row(L.d(i)) = 1.0;
  base.add_row(row, RowSense::Eq, 1.0);
  add_structure(base, L);
  auto le = [&](LinearProgram<double>& lp, int a, int b) {  // x_a <= x_b
    row.setZero();
    row(a) = 1;
    row(b) -= 1;
    lp.add_row(row, RowSense::Le, 0.0);
  };
  for (int i = 0; i < k; ++i) {
    le(base, w(i), L.t(i));
    le(base, w(i), p(i));
    le(base, L.d(i), p(i));
    for (int l = i + 1; l < k; ++l) le(base, L.r(i, l), L.t(i));
  }

  FrProgramResult best;
  best.patterns_total = patterns;
  bool have = false;
  for (std::size_t pat = 0; pat < patterns; ++pat) {
    LinearProgram<double> lp = base;
    std::vector<Eigen::VectorXd> opening(k, Eigen::VectorXd::Zero(L.n));
    for (int l = 0; l < k; ++l) opening[l](L.f) = -1;
    std::size_t code = pat;
    for (const auto& tm : terms) {
      const int c = static_cast<int>(code % 3);
      code /= 3;
      const int x = tm.x, di = L.d(tm.i), pi = p(tm.i);
      if (c == 0) {  // d_i <= x <= p_i: term x - d_i
        le(lp, x, pi);
        le(lp, di, x);
        opening[tm.l](x) += 1;
        opening[tm.l](di) -= 1;
      } else if (c == 1) {  // p_i <= x: term p_i - d_i
        le(lp, pi, x);
        opening[tm.l](pi) += 1;
        opening[tm.l](di) -= 1;
      } else {  // x <= d_i: term 0
        le(lp, x, di);
      }
    }
    for (const auto& o : opening) lp.add_row(o, RowSense::Le, 0.0);
    const auto res = simplex_solve(lp);
    if (res.status == LpStatus::Infeasible) continue;
    FrSolution sol = FrSolution::zeros(k);
    if (res.status == LpStatus::Optimal) {
      sol = unpack(res.x, L);
      for (int i = 0; i < k; ++i) sol.p(i) = res.x(p(i));
    }
    take_better(best, have, res, sol);
  }
  if (!have) throw std::logic_error("every pattern infeasible");
  return best;
}

FrSolution random_feasible_P(int k, std::mt19937_64& rng) {
  if (k < 1) throw ValidationError("k", "must be positive");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    FrSolution s = FrSolution::zeros(k);
    for (int i = 0; i < k; ++i) s.d(i) = 0.05 + 0.95 * u(rng);
    s.t(0) = 1.5 * u(rng);
    for (int i = 1; i < k; ++i) s.t(i) = s.t(i - 1) + 0.6 * u(rng);

    // r(j, i) must lie in [max_{i' >= i} (t_i' - d_i' - d_j)+, min(t_j, r(j, i-1))].
    bool ok = true;
    for (int j = 0; j < k && ok; ++j)
      for (int i = j + 1; i < k; ++i) {
        double lo = 0.0;
        for (int q = i; q < k; ++q) lo = std::max(lo, s.t(q) - s.d(q) - s.d(j));
        const double hi = i > j + 1 ? std::min(s.t(j), s.r(j, i - 1)) : s.t(j);
        if (lo > hi) {
          ok = false;
          break;
        }
        s.r(j, i) = lo + u(rng) * (hi - lo);
      }
    if (!ok) continue;

    for (int i = 0; i < k; ++i) {
      const double pick = u(rng);
      if (pick < 1.0 / 3.0)
        s.p(i) = std::max(s.t(i), s.d(i)) + u(rng);
      else if (pick < 2.0 / 3.0)
        s.p(i) = s.d(i) + u(rng) * pos(s.t(i) - s.d(i));
      else
        s.p(i) = s.d(i) + 0.5 * u(rng);
    }

    double f = 0.0;
    for (int l = 0; l < k; ++l) {
      double lhs = 0.0;
      for (int i = 0; i < l; ++i) lhs += pos(std::min(s.r(i, l), s.p(i)) - s.d(i));
      for (int i = l; i < k; ++i) lhs += pos(std::min(s.t(l), s.p(i)) - s.d(i));
      f = std::max(f, lhs);
    }
    s.f = f;

    const double D = s.d.sum();
    s.t /= D;
    s.d /= D;
    s.p /= D;
    s.r /= D;
    s.f /= D;
    return s;
  }
  throw std::runtime_error("random_feasible_P: no feasible sample");
}

std::vector<FrSolution> extract_stars(const FlpmInstance& inst, const JmsResult& run,
                                      const std::vector<std::size_t>& open) {
  const auto nc = inst.clients.size();
  const auto nf = inst.facilities.size();
  for (const auto& c : inst.clients)
    if (c.multiplicity != 1.0) throw ValidationError("clients.m", "star extraction needs m = 1");
  const double tol = 1e-9;

  std::vector<std::optional<double>> t(nc);
  for (std::size_t j = 0; j < nc; ++j) {
    if (!run.ran_out[j]) {
      t[j] = run.budgets[j];
      continue;
    }
    for (std::size_t i = 0; i < nf; ++i) {
      if (!std::isfinite(run.open_time[i])) continue;
      const double when = std::max(run.open_time[i], inst.dist(j, i));
      if (!t[j] || when < *t[j]) t[j] = when;
    }
  }
  // Distance from j to its closest facility opened strictly before `time`.
  auto reach_before = [&](std::size_t j, double time) {
    double best = kInf;
    for (std::size_t i = 0; i < nf; ++i)
      if (run.open_time[i] < time - tol * std::max(1.0, std::abs(time)))
        best = std::min(best, inst.dist(j, i));
    return best;
  };

  std::vector<FrSolution> stars;
  if (open.empty()) return stars;
  for (std::size_t F : open) {
    std::vector<std::size_t> members;
    for (std::size_t j = 0; j < nc; ++j) {
      if (closest_open(inst.dist, static_cast<Eigen::Index>(j), open) != F) continue;
      if (inst.dist(j, F) > inst.clients[j].penalty) continue;
      if (!t[j]) continue;
      members.push_back(j);
    }
    if (members.empty()) continue;
    std::stable_sort(members.begin(), members.end(),
                     [&](std::size_t a, std::size_t b) { return *t[a] < *t[b]; });
    const int k = static_cast<int>(members.size());
    FrSolution s = FrSolution::zeros(k);
    for (int a = 0; a < k; ++a) {
      const auto j = members[a];
      s.t(a) = *t[j];
      s.d(a) = inst.dist(j, F);
      s.p(a) = inst.clients[j].penalty;
    }
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b)
        s.r(a, b) = std::min(s.t(a), reach_before(members[a], s.t(b)));
    s.f = inst.facilities[F].opening_cost;
    stars.push_back(std::move(s));
  }
  return stars;
}

nlohmann::json to_json(const FrSolution& s) {
  nlohmann::json j;
  j["k"] = s.k();
  auto vec = [](const Eigen::VectorXd& v) {
    nlohmann::json a = nlohmann::json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(number_or_inf(v(i)));
    return a;
  };
  j["t"] = vec(s.t);
  j["d"] = vec(s.d);
  j["p"] = vec(s.p);
  nlohmann::json r = nlohmann::json::array();
  for (int a = 0; a < s.k(); ++a)
    for (int b = a + 1; b < s.k(); ++b) r.push_back({{"j", a}, {"i", b}, {"r", s.r(a, b)}});
  j["r"] = r;
  j["f"] = s.f;
  if (s.z) j["z"] = vec(*s.z);
  return j;
}

}  // namespace flcc
