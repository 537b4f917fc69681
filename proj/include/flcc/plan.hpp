#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "flcc/instances.hpp"
#include "flcc/lotsizing.hpp"

namespace flcc {

struct PlanCosts {
  double opening = 0.0;
  double delivery = 0.0;  // sum over deliveries of the client-facility distance
  double holding = 0.0;
  double total = 0.0;
};

// A SIRPFL solution: open facilities, one serving facility per client and
// that client's delivery schedule from it.
struct SirpflPlan {
  std::vector<std::size_t> open;
  std::vector<std::size_t> assignment;
  std::vector<Schedule> schedules;
  PlanCosts costs;
};

PlanCosts price_plan(const SirpflPlan& plan, const SirpflInstance& inst);

// Empty when every assigned facility is open, every schedule is feasible for
// its client under the instance's capacity/splittability and the recorded
// costs match a re-pricing.
std::string check_plan(const SirpflPlan& plan, const SirpflInstance& inst, double tol = 1e-7);

// {"open":[ids], "assignment":{client:facility}, "schedules":{client:[{"day",
// "units":{due_day:q}}]}, "costs":{...}}. Days are 1-based.
nlohmann::json to_json(const SirpflPlan& plan, const SirpflInstance& inst);

}  // namespace flcc
