#include "flcc/generator.hpp"

#include <random>

#include "flcc/errors.hpp"

namespace flcc {

namespace {

void check_params(const GenParams& p) {
  if (p.n_fac < 1 || p.n_cli < 1) throw ValidationError("params", "counts must be positive");
  if (p.horizon < 1) throw ValidationError("params.T", "horizon must be positive");
  if (p.max_demand < 1) throw ValidationError("params.max_demand", "must be positive");
  if (!(p.capacity > 0.0)) throw ValidationError("params.U", "capacity must be positive");
}

// Seeds are mixed so that nearby seeds give unrelated streams.
std::mt19937_64 make_rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    0x9e3779b9u};
  return std::mt19937_64(seq);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Eigen::MatrixXd client_facility_block(const MetricSpace& m, int n_fac, int n_cli) {
  return m.dist.block(n_fac, 0, n_cli, n_fac);
}

std::vector<Facility> random_facilities(std::mt19937_64& rng, int n_fac) {
  std::vector<Facility> out;
  for (int i = 0; i < n_fac; ++i) out.push_back({"f" + std::to_string(i), uniform(rng, 0.1, 1.5)});
  return out;
}

}  // namespace

MetricSpace random_metric(const GenParams& params) {
  check_params(params);
  auto rng = make_rng(params.seed);
  Eigen::MatrixXd pts(params.n_fac + params.n_cli, 2);
  for (Eigen::Index r = 0; r < pts.rows(); ++r)
    for (Eigen::Index c = 0; c < 2; ++c) pts(r, c) = uniform(rng, 0.0, 1.0);
  return {euclidean_distances(pts)};
}

// Cost draws use a second stream so the point set is shared by all variants.
FlpmInstance generate_flpm(const GenParams& params) {
  const MetricSpace metric = random_metric(params);
  auto rng = make_rng(params.seed ^ 0x5bd1e995ULL);
  FlpmInstance inst;
  inst.facilities = random_facilities(rng, params.n_fac);
  for (int j = 0; j < params.n_cli; ++j) {
    FlpmClient c{"c" + std::to_string(j)};
    if (params.variant != GenParams::Variant::Ufl && uniform(rng, 0.0, 1.0) < 0.5)
      c.penalty = uniform(rng, 0.05, 1.0);
    if (params.variant == GenParams::Variant::Flpm) c.multiplicity = uniform(rng, 0.5, 2.0);
    inst.clients.push_back(std::move(c));
  }
  inst.dist = client_facility_block(metric, params.n_fac, params.n_cli);
  validate(inst);
  return inst;
}

NccInstance generate_ncc(const GenParams& params) {
  const MetricSpace metric = random_metric(params);
  auto rng = make_rng(params.seed ^ 0x5bd1e995ULL);
  NccInstance inst;
  inst.facilities = random_facilities(rng, params.n_fac);
  for (int j = 0; j < params.n_cli; ++j) {
    const int pieces = std::uniform_int_distribution<int>(1, 4)(rng);
    std::vector<Breakpoint> pts{{0.0, 0.0}};
    double slope = uniform(rng, 0.5, 2.0);
    for (int k = 0; k < pieces; ++k) {
      if (k > 0) slope *= uniform(rng, 0.0, 1.0);
      const double width = uniform(rng, 0.1, 0.6);
      pts.push_back({pts.back().x + width, pts.back().y + slope * width});
    }
    inst.clients.push_back({"c" + std::to_string(j), ConcaveFn(std::move(pts))});
  }
  inst.dist = client_facility_block(metric, params.n_fac, params.n_cli);
  validate(inst);
  return inst;
}

SirpflInstance generate_sirpfl(const GenParams& params) {
  const MetricSpace metric = random_metric(params);
  auto rng = make_rng(params.seed ^ 0x5bd1e995ULL);
  SirpflInstance inst;
  inst.facilities = random_facilities(rng, params.n_fac);
  inst.horizon = params.horizon;
  inst.capacity = params.capacity;
  inst.splittable = params.splittable;
  int max_u = params.max_demand;
  if (inst.capacitated() && !inst.splittable)
    max_u = std::min<int>(max_u, static_cast<int>(std::floor(inst.capacity)));
  if (max_u < 1) throw ValidationError("params.U", "capacity below one unit");
  const Eigen::Index T = params.horizon;
  for (int j = 0; j < params.n_cli; ++j) {
    SirpflClient c{"c" + std::to_string(j), Eigen::VectorXd::Zero(T), Eigen::MatrixXd::Zero(T, T)};
    std::uniform_int_distribution<int> demand(0, max_u);
    while (c.demands.sum() == 0.0)
      for (Eigen::Index t = 0; t < T; ++t) c.demands(t) = demand(rng);
    const double rate = uniform(rng, 0.05, 0.5);
    for (Eigen::Index s = 0; s < T; ++s)
      for (Eigen::Index t = s; t < T; ++t) c.holding(s, t) = rate * double(t - s);
    inst.clients.push_back(std::move(c));
  }
  inst.dist = client_facility_block(metric, params.n_fac, params.n_cli);
  validate(inst);
  return inst;
}

}  // namespace flcc
