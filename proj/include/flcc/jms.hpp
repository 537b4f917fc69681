#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "flcc/instances.hpp"

namespace flcc {

enum class EventKind { FacilityOpens, ClientConnects, PotentialRunsOut };
enum class ClientStatus { Active, Connected, Exhausted };

struct Event {
  EventKind kind;
  double time = 0.0;
  std::optional<std::size_t> client;
  std::optional<std::size_t> facility;
};

std::string to_string(EventKind kind);
// {"t", "kind", "client"?, "facility"?} with instance ids.
nlohmann::json to_json(const Event& e, const FlpmInstance& inst);

// Simulation state of the penalized dual-fitting algorithm with client
// multiplicities. Budgets of active clients grow with global time; a budget
// freezes at p_j when the potential runs out. Facilities open once the
// offers they receive pay their opening cost.
class JmsState {
 public:
  explicit JmsState(const FlpmInstance& inst);

  double time() const { return time_; }
  ClientStatus status(std::size_t j) const { return status_[j]; }
  double budget(std::size_t j) const;
  std::optional<std::size_t> connection(std::size_t j) const { return conn_[j]; }
  bool is_open(std::size_t i) const { return open_[i]; }
  double open_time(std::size_t i) const { return open_time_[i]; }
  bool any_active() const;
  bool ran_out(std::size_t j) const { return ran_out_[j]; }

  // m_j [alpha_j - d_ij]+ when j is unconnected, m_j [d_i'j - d_ij]+ when it
  // is connected to i'.
  double offer(std::size_t j, std::size_t i) const;
  // Total offer currently made to facility i by all clients.
  double collected(std::size_t i) const;

  // Earliest next event; ties within `tol` ordered facility-opens (by
  // facility), client-connects (by client, facility), potential-runs-out (by
  // client). nullopt when nothing can happen any more.
  std::optional<Event> next_event(double tol = kDefaultTol) const;
  void apply(const Event& e);

 private:
  double facility_event_time(std::size_t i, double tol) const;
  // Constant offer of an inactive client to facility i.
  double frozen_offer(std::size_t j, std::size_t i) const;
  void add_frozen_offers(std::size_t j, double sign);

  const FlpmInstance* inst_;
  double time_ = 0.0;
  std::vector<ClientStatus> status_;
  std::vector<double> alpha_;  // frozen budgets of inactive clients
  std::vector<std::optional<std::size_t>> conn_;
  std::vector<char> ran_out_;
  std::vector<char> open_;
  std::vector<double> open_time_;
  std::vector<double> frozen_;  // per facility: offers of inactive clients
  std::vector<std::vector<std::size_t>> by_distance_;  // per facility, clients sorted by d
};

struct JmsConfig {
  double tol = kDefaultTol;
  bool trace = false;
};

struct JmsResult {
  FlSolution solution;
  std::vector<double> budgets;    // final alpha_j
  std::vector<double> open_time;  // per facility; inf when never opened
  std::vector<char> ran_out;      // potential ran out before any connection
  std::vector<Event> trace;
  std::size_t events = 0;

  // sum_j m_j alpha_j
  double budget_total(const FlpmInstance& inst) const;
};

JmsResult solve_flpm(const FlpmInstance& inst, const JmsConfig& cfg = {});

}  // namespace flcc
