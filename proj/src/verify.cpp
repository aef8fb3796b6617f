#include "dlnlda/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "dlnlda/config.hpp"
#include "dlnlda/dynamics.hpp"
#include "dlnlda/network.hpp"
#include "dlnlda/objective.hpp"
#include "dlnlda/oracle.hpp"
#include "dlnlda/sampling.hpp"

namespace dlnlda {

namespace {

double relative_l2(const Vector& got, const Vector& want) {
  const double denom = want.norm();
  return denom == 0.0 ? got.norm() : (got - want).norm() / denom;
}

struct Tracker {
  InvariantCheck check;
  void observe(double residual) {
    // NaN must register as a failure.
    if (!(residual <= check.worst)) check.worst = std::isnan(residual) ? INFINITY : residual;
    ++check.samples;
  }
};

Tracker tracker(std::string module, std::string name, double tolerance) {
  return Tracker{InvariantCheck{std::move(module), std::move(name), tolerance, 0.0, 0}};
}

void verify_objective(int trials, Xoshiro256& rng, std::vector<InvariantCheck>& out) {
  auto ortho = tracker("objective", "orthogonality |w.grad|/(|w||grad|), d in 2..16", 1e-10);
  auto homog = tracker("objective", "homogeneity |L(aw)-L(w)|/L(w), a in {1e-3,0.5,2,1e3}", 1e-12);
  auto fd = tracker("objective", "analytic vs central FD gradient (h=1e-6), rel l2, d<=8", 1e-6);
  auto fd_ortho = tracker("objective", "FD gradient orthogonal to w", 1e-4);
  auto bound = tracker("objective", "loss >= lambda_min, (lambda_min - L)/lambda_min", 1e-10);
  auto eig_res = tracker("oracle", "generalized eigen residual |Sw v - l Sb v| / |Sw v|", 1e-8);
  auto eig_attain = tracker("oracle", "L(v_min) = lambda_min, relative", 1e-8);

  constexpr double kAlphas[] = {1e-3, 0.5, 2.0, 1e3};
  for (int trial = 0; trial < trials; ++trial) {
    const Eigen::Index dim = random_dim(rng, 2, 16);
    const ScatterPair pair = random_pair(rng, dim);
    const EffectiveWeights w(random_vector(rng, dim, -1.0, 1.0));
    ortho.observe(orthogonality_residual(w, pair));
    for (double alpha : kAlphas) homog.observe(homogeneity_residual(w, pair, alpha));

    const auto optimum = oracle::generalized_eig_min(pair);
    bound.observe(std::max(0.0, (optimum.lambda_min - rayleigh_loss(w, pair)) / optimum.lambda_min));
    const Vector sw_v = pair.s_w() * optimum.v_min;
    eig_res.observe((sw_v - optimum.lambda_min * (pair.s_b() * optimum.v_min)).norm() / sw_v.norm());
    eig_attain.observe(std::abs(rayleigh_loss(EffectiveWeights(optimum.v_min), pair) - optimum.lambda_min) /
                       optimum.lambda_min);

    const Eigen::Index small = random_dim(rng, 2, 8);
    const ScatterPair small_pair = random_pair(rng, small);
    const double norm = std::pow(10.0, rng.uniform(-1.0, 1.0));
    const Vector v = random_vector(rng, small, -1.0, 1.0, norm);
    const Vector numeric = oracle::fd_gradient(
        [&](const Vector& x) { return oracle::rayleigh_quotient(small_pair, x); }, v, 1e-6);
    fd.observe(relative_l2(rayleigh_gradient(EffectiveWeights(v), small_pair), numeric));
    fd_ortho.observe(std::abs(v.dot(numeric)) / (v.norm() * numeric.norm() + kOrthogonalityGuard));
  }
  for (auto* t : {&ortho, &homog, &fd, &fd_ortho, &bound, &eig_res, &eig_attain}) out.push_back(t->check);
}

void verify_network(int trials, Xoshiro256& rng, std::vector<InvariantCheck>& out) {
  auto round_trip = tracker("network", "effective_weights(balanced_init(w0)) = w0, relative", 1e-14);
  auto fresh = tracker("network", "balance residual of a fresh balanced stack", 1e-15);
  auto layer_fd = tracker("network", "layer gradients vs FD of u -> L(prod u), rel l2", 1e-6);
  auto composed = tracker("network", "chain-rule dw/dt from layers vs effective rhs, rel l2", 1e-10);

  for (int trial = 0; trial < trials; ++trial) {
    const Eigen::Index dim = random_dim(rng, 2, 6);
    const Eigen::Index depth = random_dim(rng, 1, 10);
    const ScatterPair pair = random_pair(rng, dim);

    const Vector w0 = random_vector(rng, dim, 0.1, 3.0);
    const LayerStack balanced = balanced_init(w0, depth);
    const Vector back = effective_weights(balanced).values();
    round_trip.observe(((back - w0).array().abs() / w0.array()).maxCoeff());
    fresh.observe(balance_residual(balanced).max_residual);

    const Vector grad = rayleigh_gradient(effective_weights(balanced), pair);
    const Vector via_layers = effective_velocity_from_layers(balanced, layer_gradients(balanced, grad));
    composed.observe(relative_l2(via_layers, effective_flow_rhs(effective_weights(balanced), pair, depth)));

    Matrix u(depth, dim);
    for (Eigen::Index k = 0; k < depth; ++k)
      for (Eigen::Index i = 0; i < dim; ++i) u(k, i) = rng.uniform(0.5, 1.5);
    const LayerStack stack(u);
    const Matrix analytic = layer_gradients(stack, rayleigh_gradient(effective_weights(stack), pair));
    const Vector flat = Eigen::Map<const Vector>(u.data(), u.size());
    const Vector numeric = oracle::fd_gradient(
        [&](const Vector& x) {
          const Matrix layers = Eigen::Map<const Matrix>(x.data(), depth, dim);
          return oracle::rayleigh_quotient(pair, layers.colwise().prod().transpose());
        },
        flat, 1e-6);
    layer_fd.observe(relative_l2(Eigen::Map<const Vector>(analytic.data(), analytic.size()), numeric));
  }
  for (auto* t : {&round_trip, &fresh, &layer_fd, &composed}) out.push_back(t->check);
}

void verify_dynamics(int trials, Xoshiro256& rng, std::vector<InvariantCheck>& out) {
  auto agree = tracker("dynamics", "per-layer vs effective rk4 flow w(t), rel l2 (dt=1e-3, T=2)", 1e-8);
  auto drift = tracker("dynamics", "rk4 quasi-norm max relative drift", 1e-8);
  auto balance = tracker("dynamics", "rk4 per-layer balance residual", 1e-8);
  auto monotone = tracker("dynamics", "rk4 loss increase between snapshots", 1e-12);
  auto bound = tracker("dynamics", "snapshot loss below lambda_min", 1e-10);

  constexpr Eigen::Index kDepths[] = {1, 2, 5};
  constexpr Eigen::Index kDims[] = {2, 5};
  for (int trial = 0; trial < trials; ++trial) {
    const Eigen::Index depth = kDepths[rng.next() % 3];
    const Eigen::Index dim = kDims[rng.next() % 2];
    const ScatterPair pair = random_pair(rng, dim);
    const EffectiveWeights w0(random_vector(rng, dim, 0.5, 1.5));
    const double lambda_min = oracle::generalized_eig_min(pair).lambda_min;

    FlowConfig config;
    config.depth = depth;
    config.step = 1e-3;
    config.total = steps_for_horizon(2.0, config.step);
    config.integrator = Integrator::rk4;
    config.record_every = 100;
    config.mode = FlowMode::effective;
    const Trajectory eff = integrate_flow(w0, pair, config);
    config.mode = FlowMode::per_layer;
    const Trajectory layered = integrate_flow(w0, pair, config);

    const std::size_t common = std::min(eff.snapshots.size(), layered.snapshots.size());
    for (std::size_t s = 0; s < common; ++s)
      agree.observe(relative_l2(layered.snapshots[s].w.values(), eff.snapshots[s].w.values()));
    if (eff.status != layered.status) agree.observe(INFINITY);

    drift.observe(conservation_report(eff.snapshots, depth).max_relative_drift);
    for (std::size_t s = 0; s < layered.snapshots.size(); ++s) {
      balance.observe(layered.snapshots[s].balance_residual);
      bound.observe(std::max(0.0, lambda_min - layered.snapshots[s].loss));
      if (s > 0) monotone.observe(std::max(0.0, layered.snapshots[s].loss - layered.snapshots[s - 1].loss));
    }
  }
  for (auto* t : {&agree, &drift, &balance, &monotone, &bound}) out.push_back(t->check);
}

}  // namespace

VerifyScope parse_verify_scope(std::string_view text) {
  if (text == "objective") return VerifyScope::objective;
  if (text == "network") return VerifyScope::network;
  if (text == "dynamics") return VerifyScope::dynamics;
  if (text == "all") return VerifyScope::all;
  throw ConfigError("scope: expected objective, network, dynamics or all, got '" + std::string(text) + "'");
}

bool VerificationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const InvariantCheck& c) { return c.passed(); });
}

std::string VerificationReport::render() const {
  std::ostringstream out;
  char line[512];
  std::snprintf(line, sizeof line, "%-4s  %-9s  %-10s  %-10s  %7s  %s\n", "", "module", "tolerance", "worst",
                "samples", "invariant");
  out << line;
  for (const auto& c : checks) {
    std::snprintf(line, sizeof line, "%-4s  %-9s  %-10.3e  %-10.3e  %7d  %s\n", c.passed() ? "PASS" : "FAIL",
                  c.module.c_str(), c.tolerance, c.worst, c.samples, c.name.c_str());
    out << line;
  }
  return out.str();
}

VerificationReport verify_suite(VerifyScope scope, int trials, std::uint64_t seed) {
  require(trials >= 1, "verify_suite: trials must be at least 1");
  Xoshiro256 rng(seed);
  VerificationReport report;
  if (scope == VerifyScope::objective || scope == VerifyScope::all) verify_objective(trials, rng, report.checks);
  if (scope == VerifyScope::network || scope == VerifyScope::all) verify_network(trials, rng, report.checks);
  if (scope == VerifyScope::dynamics || scope == VerifyScope::all) verify_dynamics(trials, rng, report.checks);
  return report;
}

}  // namespace dlnlda
