#include "flcc/jms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "flcc/errors.hpp"

namespace flcc {

std::string to_string(EventKind kind) {
  switch (kind) {
    case EventKind::FacilityOpens: return "facility-opens";
    case EventKind::ClientConnects: return "client-connects";
    case EventKind::PotentialRunsOut: return "potential-runs-out";
  }
  return "?";
}

nlohmann::json to_json(const Event& e, const FlpmInstance& inst) {
  nlohmann::json j{{"t", e.time}, {"kind", to_string(e.kind)}};
  if (e.client) j["client"] = inst.clients[*e.client].id;
  if (e.facility) j["facility"] = inst.facilities[*e.facility].id;
  return j;
}

JmsState::JmsState(const FlpmInstance& inst)
    : inst_(&inst),
      status_(inst.num_clients(), ClientStatus::Active),
      alpha_(inst.num_clients(), 0.0),
      conn_(inst.num_clients()),
      ran_out_(inst.num_clients(), 0),
      open_(inst.num_facilities(), 0),
      open_time_(inst.num_facilities(), kInf),
      frozen_(inst.num_facilities(), 0.0),
      by_distance_(inst.num_facilities()) {
  for (std::size_t i = 0; i < inst.num_facilities(); ++i) {
    auto& order = by_distance_[i];
    order.resize(inst.num_clients());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto col = static_cast<Eigen::Index>(i);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
      return inst.dist(static_cast<Eigen::Index>(a), col) < inst.dist(static_cast<Eigen::Index>(b), col);
    });
  }
}

double JmsState::budget(std::size_t j) const {
  return status_[j] == ClientStatus::Active ? time_ : alpha_[j];
}

bool JmsState::any_active() const {
  return std::any_of(status_.begin(), status_.end(),
                     [](auto s) { return s == ClientStatus::Active; });
}

double JmsState::offer(std::size_t j, std::size_t i) const {
  const auto& c = inst_->clients[j];
  const double d = inst_->dist(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
  if (conn_[j]) {
    const double d_conn =
        inst_->dist(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(*conn_[j]));
    return c.multiplicity * std::max(0.0, d_conn - d);
  }
  return c.multiplicity * std::max(0.0, budget(j) - d);
}

double JmsState::frozen_offer(std::size_t j, std::size_t i) const { return offer(j, i); }

double JmsState::collected(std::size_t i) const {
  double total = 0.0;
  for (std::size_t j = 0; j < inst_->num_clients(); ++j) total += offer(j, i);
  return total;
}

void JmsState::add_frozen_offers(std::size_t j, double sign) {
  for (std::size_t i = 0; i < inst_->num_facilities(); ++i)
    if (!open_[i]) frozen_[i] += sign * frozen_offer(j, i);
}

// Offers to i grow piecewise linearly in time with breakpoints at the
// distances of active clients; solve each linear segment in closed form.
double JmsState::facility_event_time(std::size_t i, double tol) const {
  const auto col = static_cast<Eigen::Index>(i);
  const double f = inst_->facilities[i].opening_cost;
  double value = frozen_[i], slope = 0.0;
  std::vector<double> ahead;
  std::vector<double> ahead_m;
  for (auto j : by_distance_[i]) {
    if (status_[j] != ClientStatus::Active) continue;
    const double d = inst_->dist(static_cast<Eigen::Index>(j), col);
    const double m = inst_->clients[j].multiplicity;
    if (d <= time_) {
      value += m * (time_ - d);
      slope += m;
    } else {
      ahead.push_back(d);
      ahead_m.push_back(m);
    }
  }
  if (value >= f - tol * std::max(1.0, f)) return time_;
  double now = time_;
  for (std::size_t k = 0; k < ahead.size(); ++k) {
    if (slope > 0.0 && value + slope * (ahead[k] - now) >= f) return now + (f - value) / slope;
    value += slope * (ahead[k] - now);
    now = ahead[k];
    slope += ahead_m[k];
  }
  return slope > 0.0 ? now + (f - value) / slope : kInf;
}

std::optional<Event> JmsState::next_event(double tol) const {
  const auto& inst = *inst_;
  std::vector<Event> cand;
  for (std::size_t i = 0; i < inst.num_facilities(); ++i) {
    if (open_[i]) continue;
    const double t = facility_event_time(i, tol);
    if (std::isfinite(t)) cand.push_back({EventKind::FacilityOpens, std::max(t, time_), std::nullopt, i});
  }
  for (std::size_t j = 0; j < inst.num_clients(); ++j) {
    if (status_[j] != ClientStatus::Active) continue;
    const auto row = static_cast<Eigen::Index>(j);
    for (std::size_t i = 0; i < inst.num_facilities(); ++i)
      if (open_[i])
        cand.push_back({EventKind::ClientConnects,
                        std::max(time_, inst.dist(row, static_cast<Eigen::Index>(i))), j, i});
    if (std::isfinite(inst.clients[j].penalty))
      cand.push_back({EventKind::PotentialRunsOut, std::max(time_, inst.clients[j].penalty), j,
                      std::nullopt});
  }
  if (cand.empty()) return std::nullopt;
  double earliest = kInf;
  for (const auto& e : cand) earliest = std::min(earliest, e.time);
  const double horizon = earliest + tol * std::max(1.0, std::abs(earliest));
  std::optional<Event> best;
  auto key = [](const Event& e) {
    return std::make_tuple(static_cast<int>(e.kind), e.client.value_or(0), e.facility.value_or(0));
  };
  for (const auto& e : cand)
    if (e.time <= horizon && (!best || key(e) < key(*best))) best = e;
  return best;
}

void JmsState::apply(const Event& e) {
  const auto& inst = *inst_;
  time_ = std::max(time_, e.time);
  switch (e.kind) {
    case EventKind::FacilityOpens: {
      const std::size_t i = *e.facility;
      const auto col = static_cast<Eigen::Index>(i);
      std::vector<std::size_t> joining;
      for (std::size_t j = 0; j < inst.num_clients(); ++j) {
        const auto row = static_cast<Eigen::Index>(j);
        const double d = inst.dist(row, col);
        const double reach = conn_[j] ? inst.dist(row, static_cast<Eigen::Index>(*conn_[j])) : budget(j);
        if (reach - d > 0.0) joining.push_back(j);
      }
      open_[i] = 1;
      open_time_[i] = time_;
      for (auto j : joining) {
        if (status_[j] == ClientStatus::Active) alpha_[j] = time_;
        else add_frozen_offers(j, -1.0);
        status_[j] = ClientStatus::Connected;
        conn_[j] = i;
        add_frozen_offers(j, +1.0);
      }
      break;
    }
    case EventKind::ClientConnects: {
      const std::size_t j = *e.client;
      alpha_[j] = time_;
      status_[j] = ClientStatus::Connected;
      conn_[j] = *e.facility;
      add_frozen_offers(j, +1.0);
      break;
    }
    case EventKind::PotentialRunsOut: {
      const std::size_t j = *e.client;
      alpha_[j] = inst.clients[j].penalty;
      status_[j] = ClientStatus::Exhausted;
      ran_out_[j] = 1;
      add_frozen_offers(j, +1.0);
      break;
    }
  }
}

double JmsResult::budget_total(const FlpmInstance& inst) const {
  double s = 0.0;
  for (std::size_t j = 0; j < budgets.size(); ++j) s += inst.clients[j].multiplicity * budgets[j];
  return s;
}

JmsResult solve_flpm(const FlpmInstance& inst, const JmsConfig& cfg) {
  validate(inst);
  JmsState state(inst);
  JmsResult res;
  const std::size_t n = inst.num_clients() + inst.num_facilities();
  const std::size_t cap = n * n + 1;
  while (state.any_active()) {
    const auto e = state.next_event(cfg.tol);
    if (!e || ++res.events > cap)
      throw std::logic_error("solve_flpm: event loop did not terminate");
    state.apply(*e);
    if (cfg.trace) {
      Event rec = *e;
      rec.time = state.time();
      res.trace.push_back(rec);
    }
  }
  res.solution.assignment.assign(inst.num_clients(), std::nullopt);
  for (std::size_t i = 0; i < inst.num_facilities(); ++i) {
    res.open_time.push_back(state.open_time(i));
    if (state.is_open(i)) {
      res.solution.open.push_back(i);
      res.solution.costs.opening += inst.facilities[i].opening_cost;
    }
  }
  for (std::size_t j = 0; j < inst.num_clients(); ++j) {
    const auto& c = inst.clients[j];
    res.budgets.push_back(state.budget(j));
    res.ran_out.push_back(state.ran_out(j));
    if (auto i = state.connection(j)) {
      res.solution.assignment[j] = *i;
      res.solution.costs.connection +=
          c.multiplicity * inst.dist(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(*i));
    } else {
      res.solution.costs.penalty += c.multiplicity * c.penalty;
    }
  }
  res.solution.costs.total =
      res.solution.costs.opening + res.solution.costs.connection + res.solution.costs.penalty;
  return res;
}

}  // namespace flcc
