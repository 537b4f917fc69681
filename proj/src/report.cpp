#include "flcc/report.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "flcc/errors.hpp"
#include "flcc/generator.hpp"
#include "flcc/jms.hpp"
#include "flcc/lp.hpp"
#include "flcc/oracle.hpp"
#include "flcc/plan.hpp"
#include "flcc/reductions.hpp"

namespace flcc {

namespace {

nlohmann::json opt_number(const std::optional<double>& v) {
  return v ? nlohmann::json(number_or_inf(*v)) : nlohmann::json(nullptr);
}

nlohmann::json ids(const std::vector<Facility>& facilities, const std::vector<std::size_t>& open) {
  nlohmann::json a = nlohmann::json::array();
  for (auto i : open) a.push_back(facilities[i].id);
  return a;
}

nlohmann::json fl_solution_json(const FlSolution& sol, const FlpmInstance& inst) {
  nlohmann::json assign = nlohmann::json::object();
  for (std::size_t j = 0; j < inst.clients.size(); ++j)
    assign[inst.clients[j].id] =
        sol.assignment[j] ? nlohmann::json(inst.facilities[*sol.assignment[j]].id)
                          : nlohmann::json("PENALTY");
  return {{"open", ids(inst.facilities, sol.open)}, {"assignment", assign}};
}

nlohmann::json costs_json(const Costs& c) {
  return {{"opening", c.opening}, {"connection", c.connection}, {"penalty", c.penalty},
          {"total", c.total}};
}

// Nonempty open set for NCC-derived runs: the JMS set, or the cheapest single
// facility when JMS opened nothing.
std::vector<std::size_t> ensure_open(std::vector<std::size_t> open, const NccInstance& ncc,
                                     bool& fallback) {
  fallback = open.empty();
  if (!fallback) return open;
  std::size_t best = 0;
  double best_cost = kInf;
  for (std::size_t i = 0; i < ncc.facilities.size(); ++i) {
    const double c = ncc_cost(ncc, {i});
    if (c < best_cost) {
      best_cost = c;
      best = i;
    }
  }
  return {best};
}

double brute_ncc(const NccInstance& inst, bool override_guard) {
  if (inst.facilities.size() > 12 && !override_guard)
    throw ScaleGuardError("NCC oracle limited to 12 facilities");
  double best = kInf;
  for (const auto& s : nonempty_subsets(inst.facilities.size())) best = std::min(best, ncc_cost(inst, s));
  return best;
}

void finish_ratios(RunReport& r) {
  if (r.oracle && *r.oracle > 0.0) r.ratio = r.total / *r.oracle;
  if (r.lp_bound && *r.lp_bound > 0.0) r.lp_ratio = r.total / *r.lp_bound;
}

SolveOutput solve_flpm_pipeline(const FlpmInstance& inst, const SolveOptions& opts) {
  SolveOutput out;
  RunReport& r = out.report;
  r.algorithm = "jms";
  const auto res = solve_flpm(inst, {opts.tol, opts.trace});
  validate(res.solution, inst);
  r.costs = costs_json(res.solution.costs);
  r.total = res.solution.costs.total;
  r.solution = fl_solution_json(res.solution, inst);
  if (opts.trace)
    for (const auto& e : res.trace) out.trace.push_back(to_json(e, inst));
  if (opts.oracle) r.oracle = brute_flpm(inst, {opts.override_guard}).value;
  if (opts.lp_bound) r.lp_bound = flp_lp_lowerbound(inst);
  return out;
}

SolveOutput solve_ncc_pipeline(const NccInstance& inst, const SolveOptions& opts) {
  SolveOutput out;
  RunReport& r = out.report;
  r.algorithm = "ncc-to-flpm>jms";
  const auto red = ncc_to_flpm(inst);
  const auto res = solve_flpm(red.flpm, {opts.tol, opts.trace});
  const auto open = ensure_open(res.solution.open, inst, r.fallback);

  nlohmann::json assign = nlohmann::json::object();
  double connection = 0.0, opening = 0.0;
  for (auto i : open) opening += inst.facilities[i].opening_cost;
  for (std::size_t j = 0; j < inst.clients.size(); ++j) {
    const auto i = closest_open(inst.dist, static_cast<Eigen::Index>(j), open);
    assign[inst.clients[j].id] = inst.facilities[i].id;
    connection += inst.clients[j].g(inst.dist(j, i));
  }
  r.total = opening + connection;
  r.costs = {{"opening", opening}, {"connection", connection}, {"total", r.total}};
  r.solution = {{"open", ids(inst.facilities, open)}, {"assignment", assign}};
  if (opts.trace)
    for (const auto& e : res.trace) out.trace.push_back(to_json(e, red.flpm));
  if (opts.oracle) r.oracle = brute_ncc(inst, opts.override_guard);
  if (opts.lp_bound) r.lp_bound = flp_lp_lowerbound(red.flpm);
  return out;
}

SolveOutput solve_sirpfl_pipeline(const SirpflInstance& inst, const SolveOptions& opts) {
  SolveOutput out;
  RunReport& r = out.report;
  r.algorithm = "sirpfl-to-ncc>ncc-to-flpm>jms>lift";
  const auto sred = sirpfl_to_ncc(inst, exact_schedule_oracle(inst));
  const auto nred = ncc_to_flpm(sred.ncc);
  const auto res = solve_flpm(nred.flpm, {opts.tol, opts.trace});
  const auto open = ensure_open(res.solution.open, sred.ncc, r.fallback);
  const SirpflPlan plan = lift_solution(open, inst, sred);
  if (const auto err = check_plan(plan, inst); !err.empty())
    throw std::logic_error("lifted plan invalid: " + err);
  r.total = plan.costs.total;
  r.costs = {{"opening", plan.costs.opening}, {"delivery", plan.costs.delivery},
             {"holding", plan.costs.holding}, {"total", plan.costs.total}};
  r.solution = to_json(plan, inst);
  if (opts.trace)
    for (const auto& e : res.trace) out.trace.push_back(to_json(e, nred.flpm));
  if (opts.oracle) r.oracle = brute_sirpfl(inst, {opts.override_guard}).value;
  if (opts.lp_bound) r.lp_bound = flp_lp_lowerbound(nred.flpm);
  return out;
}

std::uint64_t mix(std::uint64_t seed, int index) {
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(index + 1);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

}  // namespace

nlohmann::json RunReport::to_json() const {
  nlohmann::json j;
  j["instance_id"] = instance_id;
  j["digest"] = digest;
  j["kind"] = to_string(kind);
  j["variant"] = variant;
  j["algorithm"] = algorithm;
  j["config"] = config;
  j["costs"] = costs;
  j["total"] = total;
  j["oracle"] = opt_number(oracle);
  j["lp_bound"] = opt_number(lp_bound);
  j["ratio"] = opt_number(ratio);
  j["lp_ratio"] = opt_number(lp_ratio);
  j["millis"] = millis;
  j["fallback"] = fallback;
  j["size"] = {{"n_fac", n_fac}, {"n_cli", n_cli}, {"T", horizon}};
  j["solution"] = solution;
  return j;
}

std::string fnv1a_digest(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

SolveOutput solve_instance(const AnyInstance& inst, const SolveOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  SolveOutput out = std::visit(
      [&](const auto& x) -> SolveOutput {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, FlpmInstance>) return solve_flpm_pipeline(x, opts);
        else if constexpr (std::is_same_v<T, NccInstance>) return solve_ncc_pipeline(x, opts);
        else return solve_sirpfl_pipeline(x, opts);
      },
      inst);
  RunReport& r = out.report;
  r.kind = static_cast<InstanceKind>(inst.index());
  r.variant = to_string(r.kind);
  r.digest = fnv1a_digest(serialize_instance(inst));
  r.config = {{"tol", opts.tol}, {"oracle", opts.oracle}, {"lp_bound", opts.lp_bound}};
  std::visit(
      [&](const auto& x) {
        r.n_fac = x.facilities.size();
        r.n_cli = x.clients.size();
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, SirpflInstance>) r.horizon = x.horizon;
      },
      inst);
  finish_ratios(r);
  if (opts.timing)
    r.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                   .count();
  return out;
}

Suite suite_from_string(const std::string& s) {
  if (s == "flp") return Suite::Flp;
  if (s == "ncc") return Suite::Ncc;
  if (s == "sirpfl-u") return Suite::SirpflU;
  if (s == "sirpfl-s") return Suite::SirpflS;
  if (s == "sirpfl-us") return Suite::SirpflUs;
  throw ValidationError("suite", "unknown suite '" + s + "'");
}

std::string to_string(Suite s) {
  switch (s) {
    case Suite::Flp: return "flp";
    case Suite::Ncc: return "ncc";
    case Suite::SirpflU: return "sirpfl-u";
    case Suite::SirpflS: return "sirpfl-s";
    case Suite::SirpflUs: return "sirpfl-us";
  }
  return "?";
}

AnyInstance bench_instance(Suite suite, std::uint64_t seed, int index) {
  std::mt19937_64 rng(mix(seed, index));
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  GenParams p;
  p.seed = rng();
  switch (suite) {
    case Suite::Flp:
      p.variant = GenParams::Variant::Flp;
      p.n_fac = pick(1, 5);
      p.n_cli = pick(1, 7);
      return generate_flpm(p);
    case Suite::Ncc:
      p.variant = GenParams::Variant::Ncc;
      p.n_fac = pick(1, 5);
      p.n_cli = pick(1, 6);
      return generate_ncc(p);
    default:
      p.variant = GenParams::Variant::Sirpfl;
      p.n_fac = pick(1, 4);
      p.n_cli = pick(1, 4);
      p.horizon = pick(1, 4);
      p.max_demand = 3;
      if (suite != Suite::SirpflU) {
        p.capacity = pick(2, 4);
        p.splittable = suite == Suite::SirpflS;
      }
      return generate_sirpfl(p);
  }
}

std::vector<RunReport> run_bench(const BenchOptions& opts) {
  if (opts.count < 0) throw ValidationError("count", "must be nonnegative");
  std::vector<RunReport> out(opts.count);
  SolveOptions so;
  so.oracle = true;
  so.lp_bound = true;
  so.timing = opts.timing;
  auto work = [&](int i) {
    out[i] = solve_instance(bench_instance(opts.suite, opts.seed, i), so).report;
    out[i].instance_id = to_string(opts.suite) + "-" + std::to_string(i);
    out[i].variant = to_string(opts.suite);
  };
  if (!opts.parallel) {
    for (int i = 0; i < opts.count; ++i) work(i);
    return out;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const unsigned workers = std::max(1U, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i; (i = next++) < opts.count;) {
        try {
          work(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::string bench_csv(const std::vector<RunReport>& reports) {
  std::ostringstream os;
  os << "instance_id,variant,n_fac,n_cli,T,alg_cost,opt_cost,lp_bound,ratio,lp_ratio,millis\n";
  double max_ratio = 0.0, sum_ratio = 0.0;
  std::size_t n_ratio = 0;
  for (const auto& r : reports) {
    os << r.instance_id << ',' << r.variant << ',' << r.n_fac << ',' << r.n_cli << ','
       << r.horizon << ',' << fmt(r.total) << ',' << fmt(r.oracle) << ',' << fmt(r.lp_bound)
       << ',' << fmt(r.ratio) << ',' << fmt(r.lp_ratio) << ',' << fmt(r.millis) << '\n';
    if (r.ratio) {
      max_ratio = std::max(max_ratio, *r.ratio);
      sum_ratio += *r.ratio;
      ++n_ratio;
    }
  }
  const std::string variant = reports.empty() ? "" : reports.front().variant;
  if (n_ratio > 0) {
    os << "max," << variant << ",,,,,,," << fmt(max_ratio) << ",,\n";
    os << "mean," << variant << ",,,,,,," << fmt(sum_ratio / static_cast<double>(n_ratio)) << ",,\n";
  }
  return os.str();
}

nlohmann::json bench_json(const std::vector<RunReport>& reports) {
  nlohmann::json rows = nlohmann::json::array();
  double max_ratio = 0.0, sum_ratio = 0.0;
  std::size_t n_ratio = 0;
  for (const auto& r : reports) {
    rows.push_back(r.to_json());
    if (r.ratio) {
      max_ratio = std::max(max_ratio, *r.ratio);
      sum_ratio += *r.ratio;
      ++n_ratio;
    }
  }
  nlohmann::json agg = {{"count", reports.size()}, {"with_ratio", n_ratio}};
  agg["max_ratio"] = n_ratio ? nlohmann::json(max_ratio) : nlohmann::json(nullptr);
  agg["mean_ratio"] =
      n_ratio ? nlohmann::json(sum_ratio / static_cast<double>(n_ratio)) : nlohmann::json(nullptr);
  return {{"reports", rows}, {"aggregate", agg}};
}

}  // namespace flcc
