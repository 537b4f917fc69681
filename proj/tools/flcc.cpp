#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "flcc/errors.hpp"
#include "flcc/frlp.hpp"
#include "flcc/generator.hpp"
#include "flcc/report.hpp"
#include "flcc/serialization.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw flcc::ParseError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct SolveArgs {
  std::string in, kind = "flpm", trace;
  bool oracle = false, lp_bound = false, orlib = false, no_timing = false, override_guard = false;
  double tol = flcc::kDefaultTol;
};

int cmd_solve(const SolveArgs& a) {
  const auto text = slurp(a.in);
  const auto kind = flcc::instance_kind_from_string(a.kind);
  flcc::AnyInstance inst;
  if (a.orlib) {
    if (kind != flcc::InstanceKind::Flpm) throw flcc::ValidationError("kind", "ORLIB input is flpm");
    inst = flcc::read_orlib(text);
  } else {
    inst = flcc::parse_instance(text, kind);
  }
  flcc::SolveOptions opts;
  opts.oracle = a.oracle;
  opts.lp_bound = a.lp_bound;
  opts.tol = a.tol;
  opts.trace = !a.trace.empty();
  opts.timing = !a.no_timing;
  opts.override_guard = a.override_guard;
  const auto out = flcc::solve_instance(inst, opts);
  if (opts.trace) {
    std::ofstream tf(a.trace);
    if (!tf) throw std::runtime_error("cannot write '" + a.trace + "'");
    tf << out.trace.dump(1) << '\n';
  }
  auto report = out.report;
  report.instance_id = a.in;
  std::cout << report.to_json().dump(2) << '\n';
  return 0;
}

struct FrlpArgs {
  int k = 1;
  double lambda_f = 1.0;
  std::vector<std::int64_t> m;
  std::string program = "phat";
  int chain_check = 0;
  double eps = 0.01;
  std::uint64_t seed = 1;
};

int cmd_frlp(const FrlpArgs& a) {
  nlohmann::json out;
  out["k"] = a.k;
  out["lambda_f"] = a.lambda_f;
  out["program"] = a.program;
  flcc::FrProgramResult res;
  if (a.program == "p") {
    res = flcc::solve_P(a.k, a.lambda_f);
  } else if (a.program == "phat") {
    std::vector<std::int64_t> m = a.m.empty() ? std::vector<std::int64_t>(a.k, 1) : a.m;
    if (static_cast<int>(m.size()) != a.k) throw flcc::ValidationError("m", "needs k entries");
    res = flcc::solve_phat(a.k, m, a.lambda_f);
    out["m"] = m;
  } else {
    throw flcc::ValidationError("program", "expected 'phat' or 'p'");
  }
  out["o_k"] = flcc::number_or_inf(res.value);
  out["argmax solution"] = flcc::to_json(res.argmax);
  out["patterns_solved"] = res.patterns_solved;
  out["patterns_total"] = res.patterns_total;

  if (a.chain_check > 0) {
    std::mt19937_64 rng(a.seed);
    int step1 = 0, step1_eq = 0, step2 = 0, final_ok = 0, chain = 0, literal = 0, feasible = 0;
    for (int n = 0; n < a.chain_check; ++n) {
      const auto s = flcc::random_feasible_P(a.k, rng);
      const auto rep = flcc::verify_chain(s, a.lambda_f, a.eps);
      step1 += rep.step1_ok;
      step1_eq += rep.step1_equal;
      step2 += rep.step2_ok;
      final_ok += rep.final_ok;
      chain += rep.chain_ok;
      literal += rep.literal_used;
      feasible += rep.p1_feasible && rep.p2_feasible && rep.phat_feasible;
    }
    out["chain_check"] = {{"trials", a.chain_check}, {"eps", a.eps},
                          {"step1_holds", step1}, {"step1_equal", step1_eq},
                          {"step2_within_eps", step2},
                          {"final_dominates", final_ok}, {"chain_holds", chain},
                          {"all_feasible", feasible}, {"literal_phat_sufficed", literal}};
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

struct BenchArgs {
  std::string suite = "flp", format = "csv";
  int count = 10;
  std::uint64_t seed = 1;
  bool parallel = false, timing = false;
};

int cmd_bench(const BenchArgs& a) {
  flcc::BenchOptions opts;
  opts.suite = flcc::suite_from_string(a.suite);
  opts.count = a.count;
  opts.seed = a.seed;
  opts.parallel = a.parallel;
  opts.timing = a.timing;
  const auto reports = flcc::run_bench(opts);
  if (a.format == "json")
    std::cout << flcc::bench_json(reports).dump(2) << '\n';
  else
    std::cout << flcc::bench_csv(reports);
  return 0;
}

struct GenerateArgs {
  std::string kind = "flpm", variant;
  int n_fac = 3, n_cli = 4, horizon = 3, max_demand = 3;
  std::string capacity = "inf";
  bool unsplittable = false;
  std::uint64_t seed = 1;
};

int cmd_generate(const GenerateArgs& a) {
  flcc::GenParams p;
  p.n_fac = a.n_fac;
  p.n_cli = a.n_cli;
  p.horizon = a.horizon;
  p.max_demand = a.max_demand;
  p.seed = a.seed;
  p.splittable = !a.unsplittable;
  p.capacity = flcc::number_or_inf(
      a.capacity == "inf" ? nlohmann::json("inf") : nlohmann::json(std::stod(a.capacity)), "U");
  const auto kind = flcc::instance_kind_from_string(a.kind);
  flcc::AnyInstance inst;
  if (kind == flcc::InstanceKind::Flpm) {
    using V = flcc::GenParams::Variant;
    p.variant = a.variant == "ufl" ? V::Ufl : a.variant == "flpm" ? V::Flpm : V::Flp;
    inst = flcc::generate_flpm(p);
  } else if (kind == flcc::InstanceKind::Ncc) {
    p.variant = flcc::GenParams::Variant::Ncc;
    inst = flcc::generate_ncc(p);
  } else {
    p.variant = flcc::GenParams::Variant::Sirpfl;
    inst = flcc::generate_sirpfl(p);
  }
  std::cout << flcc::serialize_instance(inst) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Facility location with penalties, concave connection costs and star inventory routing"};
  app.require_subcommand(1);

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Run the pipeline for one instance");
  solve->add_option("--in", sa.in, "Instance file")->required();
  solve->add_option("--kind", sa.kind, "flpm | ncc | sirpfl")->capture_default_str();
  solve->add_flag("--oracle", sa.oracle, "Also compute the exact optimum");
  solve->add_flag("--lp-bound", sa.lp_bound, "Also compute the LP lower bound");
  solve->add_option("--trace", sa.trace, "Write the event trace to this file");
  solve->add_option("--tol", sa.tol, "Event tie tolerance")->capture_default_str();
  solve->add_flag("--orlib", sa.orlib, "Input is in ORLIB format");
  solve->add_flag("--no-timing", sa.no_timing, "Report millis as 0");
  solve->add_flag("--override-guard", sa.override_guard, "Lift the oracle size limits");

  FrlpArgs fa;
  auto* frlp = app.add_subcommand("frlp", "Factor-revealing program laboratory");
  frlp->add_option("--k", fa.k, "Number of star clients")->required();
  frlp->add_option("--lambda-f", fa.lambda_f, "Facility factor")->required();
  frlp->add_option("--m", fa.m, "Multiplicities (default all 1)")->delimiter(',');
  frlp->add_option("--program", fa.program, "phat | p")->capture_default_str();
  frlp->add_option("--chain-check", fa.chain_check, "Random feasible points for the chain check");
  frlp->add_option("--eps", fa.eps, "Discretization slack")->capture_default_str();
  frlp->add_option("--seed", fa.seed, "Sampler seed")->capture_default_str();

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Generated benchmark suite with oracle and LP bound");
  bench->add_option("--suite", ba.suite, "flp | ncc | sirpfl-u | sirpfl-s | sirpfl-us")->required();
  bench->add_option("--count", ba.count, "Instances")->capture_default_str();
  bench->add_option("--seed", ba.seed, "Seed")->capture_default_str();
  bench->add_flag("--parallel", ba.parallel, "Spread instances over threads");
  bench->add_option("--format", ba.format, "csv | json")->capture_default_str();
  bench->add_flag("--timing", ba.timing, "Fill the millis column (breaks byte-identical output)");

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "Print a random instance");
  gen->add_option("--kind", ga.kind, "flpm | ncc | sirpfl")->capture_default_str();
  gen->add_option("--variant", ga.variant, "ufl | flp | flpm (flpm kind only)");
  gen->add_option("--facilities", ga.n_fac)->capture_default_str();
  gen->add_option("--clients", ga.n_cli)->capture_default_str();
  gen->add_option("--T", ga.horizon)->capture_default_str();
  gen->add_option("--U", ga.capacity, "Capacity or inf")->capture_default_str();
  gen->add_option("--max-demand", ga.max_demand)->capture_default_str();
  gen->add_flag("--unsplittable", ga.unsplittable);
  gen->add_option("--seed", ga.seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*solve) return cmd_solve(sa);
    if (*frlp) return cmd_frlp(fa);
    if (*bench) return cmd_bench(ba);
    if (*gen) return cmd_generate(ga);
  } catch (const flcc::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const flcc::ValidationError& e) {
    std::cerr << "invalid " << e.what() << '\n';
    return 2;
  } catch (const flcc::ScaleGuardError& e) {
    std::cerr << "scale guard: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
