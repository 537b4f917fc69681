#include <cmath>

#include "flcc/lp.hpp"

namespace flcc {

double flp_lp_lowerbound(const FlpmInstance& inst) {
  const auto nf = static_cast<Eigen::Index>(inst.num_facilities());
  const auto nc = static_cast<Eigen::Index>(inst.num_clients());
  // Layout: y_i, then x_ij (client-major), then z_j for finite penalties.
  std::vector<Eigen::Index> zcol(static_cast<std::size_t>(nc), -1);
  Eigen::Index nvar = nf + nf * nc;
  for (Eigen::Index j = 0; j < nc; ++j)
    if (std::isfinite(inst.clients[static_cast<std::size_t>(j)].penalty)) zcol[j] = nvar++;
  auto x = [&](Eigen::Index j, Eigen::Index i) { return nf + j * nf + i; };

  LinearProgram<double> lp(nvar, ObjSense::Minimize);
  for (Eigen::Index i = 0; i < nf; ++i)
    lp.objective(i) = inst.facilities[static_cast<std::size_t>(i)].opening_cost;
  for (Eigen::Index j = 0; j < nc; ++j) {
    const auto& c = inst.clients[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < nf; ++i) lp.objective(x(j, i)) = c.multiplicity * inst.dist(j, i);
    if (zcol[j] >= 0) lp.objective(zcol[j]) = c.multiplicity * c.penalty;
  }
  Eigen::VectorXd row(nvar);
  for (Eigen::Index j = 0; j < nc; ++j) {
    row.setZero();
    for (Eigen::Index i = 0; i < nf; ++i) row(x(j, i)) = 1.0;
    if (zcol[j] >= 0) row(zcol[j]) = 1.0;
    lp.add_row(row, RowSense::Eq, 1.0);
    for (Eigen::Index i = 0; i < nf; ++i) {
      row.setZero();
      row(x(j, i)) = 1.0;
      row(i) = -1.0;
      lp.add_row(row, RowSense::Le, 0.0);
    }
  }
  const auto res = simplex_solve(lp);
  if (res.status != LpStatus::Optimal)
    throw std::runtime_error("flp_lp_lowerbound: relaxation not solved to optimality");
  return res.value;
}

}  // namespace flcc
