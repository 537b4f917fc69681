#include "flcc/instances.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "flcc/errors.hpp"

namespace flcc {

namespace {

template <typename F>
void check_common(const std::vector<Facility>& facilities, std::size_t n_clients,
                  const Eigen::MatrixXd& dist, F&& client_id) {
  if (facilities.empty())
    throw ValidationError("facilities", "at least one facility required");
  if (n_clients == 0)
    throw ValidationError("clients", "at least one client required");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < facilities.size(); ++i) {
    const auto& fac = facilities[i];
    if (!std::isfinite(fac.opening_cost) || fac.opening_cost < 0.0)
      throw ValidationError("facilities[" + std::to_string(i) + "].opening_cost",
                            "must be finite and nonnegative");
    if (!ids.insert("f:" + fac.id).second)
      throw ValidationError("facilities[" + std::to_string(i) + "].id",
                            "duplicate id '" + fac.id + "'");
  }
  for (std::size_t j = 0; j < n_clients; ++j)
    if (!ids.insert("c:" + client_id(j)).second)
      throw ValidationError("clients[" + std::to_string(j) + "].id",
                            "duplicate id '" + client_id(j) + "'");
  if (dist.rows() != static_cast<Eigen::Index>(n_clients) ||
      dist.cols() != static_cast<Eigen::Index>(facilities.size()))
    throw ValidationError("dist", "expected " + std::to_string(n_clients) + "x" +
                                      std::to_string(facilities.size()) + " matrix");
  for (Eigen::Index j = 0; j < dist.rows(); ++j)
    for (Eigen::Index i = 0; i < dist.cols(); ++i)
      if (!std::isfinite(dist(j, i)) || dist(j, i) < 0.0)
        throw ValidationError("dist[" + std::to_string(j) + "][" + std::to_string(i) + "]",
                              "must be finite and nonnegative");
}

}  // namespace

void validate(const FlpmInstance& inst) {
  check_common(inst.facilities, inst.clients.size(), inst.dist,
               [&](std::size_t j) { return inst.clients[j].id; });
  for (std::size_t j = 0; j < inst.clients.size(); ++j) {
    const auto& c = inst.clients[j];
    const std::string at = "clients[" + std::to_string(j) + "]";
    if (std::isnan(c.penalty) || !(c.penalty > 0.0))
      throw ValidationError(at + ".p", "penalty must be in (0, inf]");
    if (!std::isfinite(c.multiplicity) || !(c.multiplicity > 0.0))
      throw ValidationError(at + ".m", "multiplicity must be finite and positive");
  }
}

void validate(const NccInstance& inst) {
  check_common(inst.facilities, inst.clients.size(), inst.dist,
               [&](std::size_t j) { return inst.clients[j].id; });
  for (std::size_t j = 0; j < inst.clients.size(); ++j)
    if (auto err = ConcaveFn::check(inst.clients[j].g.breakpoints()); !err.empty())
      throw ValidationError("clients[" + std::to_string(j) + "].g", err);
}

void validate(const SirpflInstance& inst) {
  check_common(inst.facilities, inst.clients.size(), inst.dist,
               [&](std::size_t j) { return inst.clients[j].id; });
  if (inst.horizon < 1) throw ValidationError("T", "horizon must be positive");
  if (std::isnan(inst.capacity) || !(inst.capacity > 0.0))
    throw ValidationError("U", "capacity must be positive or inf");
  const Eigen::Index T = inst.horizon;
  for (std::size_t j = 0; j < inst.clients.size(); ++j) {
    const auto& c = inst.clients[j];
    const std::string at = "clients[" + std::to_string(j) + "]";
    if (c.demands.size() != T)
      throw ValidationError(at + ".demands", "expected " + std::to_string(T) + " entries");
    if (c.holding.rows() != T || c.holding.cols() != T)
      throw ValidationError(at + ".holding", "expected TxT matrix");
    bool any = false;
    for (Eigen::Index t = 0; t < T; ++t) {
      const double u = c.demands(t);
      if (!std::isfinite(u) || u < 0.0)
        throw ValidationError(at + ".demands[" + std::to_string(t) + "]",
                              "must be finite and nonnegative");
      if (u > 0.0) {
        any = true;
        if (c.holding(t, t) != 0.0)
          throw ValidationError(at + ".holding[" + std::to_string(t) + "][" +
                                    std::to_string(t) + "]",
                                "same-day holding must be 0");
        if (inst.capacitated() && !inst.splittable && u > inst.capacity)
          throw ValidationError(at + ".demands[" + std::to_string(t) + "]",
                                "exceeds capacity U in the unsplittable variant");
      }
      for (Eigen::Index s = 0; s <= t; ++s)
        if (!std::isfinite(c.holding(s, t)) || c.holding(s, t) < 0.0)
          throw ValidationError(at + ".holding[" + std::to_string(s) + "][" +
                                    std::to_string(t) + "]",
                                "must be finite and nonnegative");
    }
    if (!any) throw ValidationError(at + ".demands", "at least one positive demand required");
  }
}

void validate(const FlSolution& sol, const FlpmInstance& inst, double tol) {
  std::vector<char> is_open(inst.num_facilities(), 0);
  for (auto i : sol.open) {
    if (i >= inst.num_facilities()) throw ValidationError("open", "facility index out of range");
    is_open[i] = 1;
  }
  if (sol.assignment.size() != inst.num_clients())
    throw ValidationError("assignment", "one entry per client required");
  Costs c;
  for (auto i : sol.open) c.opening += inst.facilities[i].opening_cost;
  for (std::size_t j = 0; j < inst.num_clients(); ++j) {
    const auto& cl = inst.clients[j];
    if (const auto& a = sol.assignment[j]) {
      if (*a >= inst.num_facilities() || !is_open[*a])
        throw ValidationError("assignment[" + std::to_string(j) + "]",
                              "assigned facility is not open");
      c.connection += cl.multiplicity * inst.dist(static_cast<Eigen::Index>(j),
                                                  static_cast<Eigen::Index>(*a));
    } else {
      if (!std::isfinite(cl.penalty))
        throw ValidationError("assignment[" + std::to_string(j) + "]",
                              "client with infinite penalty left unassigned");
      c.penalty += cl.multiplicity * cl.penalty;
    }
  }
  c.total = c.opening + c.connection + c.penalty;
  auto close = [&](double a, double b) { return std::abs(a - b) <= tol * (1.0 + std::abs(b)); };
  if (!close(sol.costs.opening, c.opening) || !close(sol.costs.connection, c.connection) ||
      !close(sol.costs.penalty, c.penalty) || !close(sol.costs.total, c.total) ||
      !close(sol.costs.total, sol.costs.opening + sol.costs.connection + sol.costs.penalty))
    throw ValidationError("costs", "cost decomposition inconsistent with assignment");
}

std::size_t closest_open(const Eigen::MatrixXd& dist, Eigen::Index j,
                         const std::vector<std::size_t>& open) {
  if (open.empty()) throw ValidationError("open", "no open facility");
  std::size_t best = open.front();
  for (auto i : open)
    if (dist(j, static_cast<Eigen::Index>(i)) < dist(j, static_cast<Eigen::Index>(best)) ||
        (dist(j, static_cast<Eigen::Index>(i)) == dist(j, static_cast<Eigen::Index>(best)) &&
         i < best))
      best = i;
  return best;
}

FlSolution assign_to_open_set(const FlpmInstance& inst, std::vector<std::size_t> open) {
  std::sort(open.begin(), open.end());
  FlSolution sol;
  sol.open = std::move(open);
  sol.assignment.assign(inst.num_clients(), std::nullopt);
  for (auto i : sol.open) sol.costs.opening += inst.facilities[i].opening_cost;
  for (std::size_t j = 0; j < inst.num_clients(); ++j) {
    const auto& cl = inst.clients[j];
    const auto row = static_cast<Eigen::Index>(j);
    if (!sol.open.empty()) {
      const auto i = closest_open(inst.dist, row, sol.open);
      const double d = inst.dist(row, static_cast<Eigen::Index>(i));
      if (d <= cl.penalty) {
        sol.assignment[j] = i;
        sol.costs.connection += cl.multiplicity * d;
        continue;
      }
    }
    sol.costs.penalty += cl.multiplicity * cl.penalty;
  }
  sol.costs.total = sol.costs.opening + sol.costs.connection + sol.costs.penalty;
  return sol;
}

Costs evaluate_open_set(const FlpmInstance& inst, const std::vector<std::size_t>& open) {
  return assign_to_open_set(inst, open).costs;
}

double ncc_cost(const NccInstance& inst, const std::vector<std::size_t>& open) {
  double total = 0.0;
  for (auto i : open) total += inst.facilities[i].opening_cost;
  for (std::size_t j = 0; j < inst.num_clients(); ++j) {
    const auto row = static_cast<Eigen::Index>(j);
    const auto i = closest_open(inst.dist, row, open);
    total += inst.clients[j].g(inst.dist(row, static_cast<Eigen::Index>(i)));
  }
  return total;
}

}  // namespace flcc
