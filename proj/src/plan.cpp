#include "flcc/plan.hpp"

#include <cmath>

namespace flcc {

PlanCosts price_plan(const SirpflPlan& plan, const SirpflInstance& inst) {
  PlanCosts c;
  for (auto i : plan.open) c.opening += inst.facilities[i].opening_cost;
  for (std::size_t j = 0; j < plan.schedules.size(); ++j) {
    const double d = inst.dist(static_cast<Eigen::Index>(j),
                               static_cast<Eigen::Index>(plan.assignment[j]));
    c.delivery += static_cast<double>(plan.schedules[j].deliveries.size()) * d;
    c.holding += holding_cost(plan.schedules[j].deliveries, DemandSeries::of(inst.clients[j]));
  }
  c.total = c.opening + c.delivery + c.holding;
  return c;
}

std::string check_plan(const SirpflPlan& plan, const SirpflInstance& inst, double tol) {
  if (plan.open.empty()) return "no open facility";
  std::vector<char> is_open(inst.num_facilities(), 0);
  for (auto i : plan.open) {
    if (i >= inst.num_facilities()) return "open facility index out of range";
    is_open[i] = 1;
  }
  if (plan.assignment.size() != inst.num_clients() || plan.schedules.size() != inst.num_clients())
    return "one assignment and schedule per client required";
  for (std::size_t j = 0; j < inst.num_clients(); ++j) {
    if (plan.assignment[j] >= inst.num_facilities() || !is_open[plan.assignment[j]])
      return "client " + inst.clients[j].id + " assigned to a closed facility";
    const auto err = check_schedule(plan.schedules[j], DemandSeries::of(inst.clients[j]),
                                    inst.capacity, inst.splittable, tol);
    if (!err.empty()) return "client " + inst.clients[j].id + ": " + err;
  }
  const PlanCosts c = price_plan(plan, inst);
  auto close = [&](double a, double b) { return std::abs(a - b) <= tol * (1.0 + std::abs(b)); };
  if (!close(plan.costs.opening, c.opening) || !close(plan.costs.delivery, c.delivery) ||
      !close(plan.costs.holding, c.holding) || !close(plan.costs.total, c.total))
    return "recorded costs differ from re-pricing";
  return {};
}

nlohmann::json to_json(const SirpflPlan& plan, const SirpflInstance& inst) {
  using nlohmann::json;
  json open = json::array();
  for (auto i : plan.open) open.push_back(inst.facilities[i].id);
  json assignment = json::object(), schedules = json::object();
  for (std::size_t j = 0; j < plan.assignment.size(); ++j) {
    const auto& id = inst.clients[j].id;
    assignment[id] = inst.facilities[plan.assignment[j]].id;
    json list = json::array();
    for (const auto& del : plan.schedules[j].deliveries) {
      json units = json::object();
      for (const auto& [t, q] : del.units) units[std::to_string(t + 1)] = q;
      list.push_back({{"day", del.day + 1}, {"units", std::move(units)}});
    }
    schedules[id] = std::move(list);
  }
  return {{"open", std::move(open)},
          {"assignment", std::move(assignment)},
          {"schedules", std::move(schedules)},
          {"costs",
           {{"opening", plan.costs.opening},
            {"delivery", plan.costs.delivery},
            {"holding", plan.costs.holding},
            {"total", plan.costs.total}}}};
}

}  // namespace flcc
