#include "dlnlda/dynamics.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <type_traits>

namespace dlnlda {

std::string_view to_string(Integrator integrator) noexcept {
  switch (integrator) {
    case Integrator::explicit_euler: return "explicit-euler";
    case Integrator::rk4: return "rk4";
  }
  return "unknown";
}

std::string_view to_string(FlowMode mode) noexcept {
  switch (mode) {
    case FlowMode::per_layer: return "per-layer";
    case FlowMode::effective: return "effective";
  }
  return "unknown";
}

std::string_view to_string(RunStatus status) noexcept {
  switch (status) {
    case RunStatus::completed: return "completed";
    case RunStatus::positivity_breach: return "positivity-breach";
    case RunStatus::non_finite: return "non-finite";
  }
  return "unknown";
}

void FlowConfig::validate() const {
  require(depth >= 1, "flow config: depth must be at least 1");
  require(step > 0.0 && std::isfinite(step), "flow config: step must be positive");
  require(total >= 1, "flow config: total must be at least 1");
  require(record_every >= 1, "flow config: record_every must be at least 1");
}

std::int64_t steps_for_horizon(double horizon, double dt) {
  require(horizon > 0.0 && dt > 0.0, "steps_for_horizon: horizon and dt must be positive");
  return static_cast<std::int64_t>(std::llround(horizon / dt));
}

namespace {

// A Runge-Kutta stage left the positive orthant.
struct StageBreach {};

Vector effective_rhs_unchecked(const Vector& w, const ScatterPair& pair, Eigen::Index depth) {
  const Vector grad = rayleigh_gradient(EffectiveWeights(w), pair);
  const double exponent = 2.0 - 2.0 / static_cast<double>(depth);
  const double scale = static_cast<double>(depth);
  Vector out(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i)
    out(i) = -scale * std::pow(w(i), exponent) * grad(i);
  return out;
}

Vector product_over_layers(const Matrix& u) { return u.colwise().prod().transpose(); }

// -dL/du for every layer entry; u is depth x dim.
Matrix layer_velocity(const Matrix& u, const ScatterPair& pair) {
  const Vector w = product_over_layers(u);
  const Vector grad = rayleigh_gradient(EffectiveWeights(w), pair);
  Matrix out(u.rows(), u.cols());
  for (Eigen::Index k = 0; k < u.rows(); ++k)
    for (Eigen::Index i = 0; i < u.cols(); ++i) out(k, i) = -grad(i) * (w(i) / u(k, i));
  return out;
}

template <typename State>
State advance(const State& s, double h, Integrator integrator,
              const std::function<State(const State&)>& rhs) {
  if (integrator == Integrator::explicit_euler) return s + h * rhs(s);
  auto checked = [&](const State& x) -> State {
    if (!((x.array() > 0.0).all())) throw StageBreach{};
    return rhs(x);
  };
  const State k1 = rhs(s);
  const State k2 = checked(s + 0.5 * h * k1);
  const State k3 = checked(s + 0.5 * h * k2);
  const State k4 = checked(s + h * k3);
  return s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

struct Recorder {
  const ScatterPair& pair;
  Eigen::Index depth;
  Trajectory& out;
  std::int64_t last_recorded = -1;

  void record(std::int64_t step, double t, const Vector& w, const Matrix* layers) {
    TrajectorySnapshot snap;
    snap.t = t;
    snap.w = EffectiveWeights(w);
    snap.loss = rayleigh_loss(snap.w, pair);
    snap.quasi_norm = quasi_norm(snap.w, depth);
    snap.grad_norm = rayleigh_gradient(snap.w, pair).norm();
    if (layers != nullptr) {
      snap.layers = *layers;
      snap.balance_residual = balance_residual(LayerStack(*layers)).max_residual;
    }
    if (!out.snapshots.empty() && !out.first_unstable_step) {
      const double prev = out.snapshots.back().loss;
      if (snap.loss > prev * (1.0 + kInstabilityJump)) out.first_unstable_step = step;
    }
    out.snapshots.push_back(std::move(snap));
    last_recorded = step;
  }
};

// Fixed-step integration with snapshot recording. A Matrix state is a layer
// stack (depth x dim); a Vector state is the effective weights.
template <typename State>
Trajectory drive(State state, const ScatterPair& pair, const FlowConfig& config,
                 double time_per_step, const std::function<State(const State&)>& rhs,
                 const std::function<Vector(const State&)>& to_w) {
  Trajectory traj;
  Recorder rec{pair, config.depth, traj};
  auto record = [&](std::int64_t step, const State& s) {
    const Matrix* layers = nullptr;
    if constexpr (std::is_same_v<State, Matrix>) layers = &s;
    rec.record(step, static_cast<double>(step) * time_per_step, to_w(s), layers);
  };

  record(0, state);
  std::int64_t step = 1;
  for (; step <= config.total; ++step) {
    State next;
    try {
      next = advance<State>(state, config.step, config.integrator, rhs);
    } catch (const StageBreach&) {
      traj.status = RunStatus::positivity_breach;
    }
    if (traj.status == RunStatus::completed) {
      if (!next.allFinite()) {
        traj.status = RunStatus::non_finite;
      } else if (!((next.array() > 0.0).all())) {
        traj.status = RunStatus::positivity_breach;
      }
    }
    if (traj.status != RunStatus::completed) {
      traj.failed_step = step;
      traj.diagnostic = std::string(traj.status == RunStatus::non_finite
                                        ? "non-finite state"
                                        : "positivity breach") +
                        " at step " + std::to_string(step);
      break;
    }
    state = std::move(next);
    if (step % config.record_every == 0 || step == config.total) record(step, state);
  }
  if (traj.failed_step && rec.last_recorded != step - 1) record(step - 1, state);
  return traj;
}

}  // namespace

Vector effective_flow_rhs(const EffectiveWeights& w, const ScatterPair& pair,
                          Eigen::Index depth) {
  require(depth >= 1, "effective_flow_rhs: depth must be at least 1");
  require_dim(w.size(), pair.dim(), "effective_flow_rhs: w");
  require((w.values().array() > 0.0).all(), "effective_flow_rhs: w must be strictly positive");
  return effective_rhs_unchecked(w.values(), pair, depth);
}

Vector effective_velocity_from_layers(const LayerStack& stack, const Matrix& layer_grads) {
  if (layer_grads.rows() != stack.depth() || layer_grads.cols() != stack.dim())
    throw DimensionMismatch("effective_velocity_from_layers: gradient shape mismatch");
  const Vector w = effective_weights(stack).values();
  Vector out = Vector::Zero(stack.dim());
  for (Eigen::Index k = 0; k < stack.depth(); ++k)
    for (Eigen::Index i = 0; i < stack.dim(); ++i)
      out(i) += (w(i) / stack(k, i)) * (-layer_grads(k, i));
  return out;
}

Trajectory integrate_flow(const EffectiveWeights& w0, const ScatterPair& pair,
                          const FlowConfig& config) {
  config.validate();
  require_dim(w0.size(), pair.dim(), "integrate_flow: w0");
  require((w0.values().array() > 0.0).all(), "integrate_flow: w0 must be strictly positive");
  if (config.mode == FlowMode::per_layer)
    return integrate_layer_flow(balanced_init(w0.values(), config.depth), pair, config);

  const Eigen::Index depth = config.depth;
  return drive<Vector>(
      w0.values(), pair, config, config.step,
      [&](const Vector& w) { return effective_rhs_unchecked(w, pair, depth); },
      [](const Vector& w) { return w; });
}

Trajectory integrate_layer_flow(const LayerStack& stack0, const ScatterPair& pair,
                                const FlowConfig& config) {
  config.validate();
  require_dim(stack0.dim(), pair.dim(), "integrate_layer_flow: stack");
  require(stack0.depth() == config.depth, "integrate_layer_flow: config depth differs from stack");
  return drive<Matrix>(
      stack0.weights(), pair, config, config.step,
      [&](const Matrix& u) { return layer_velocity(u, pair); },
      [](const Matrix& u) { return product_over_layers(u); });
}

Trajectory gd_run(const LayerStack& stack0, const ScatterPair& pair, const FlowConfig& config) {
  config.validate();
  require(config.mode == FlowMode::per_layer, "gd_run: descent acts on layer parameters (mode per-layer)");
  require_dim(stack0.dim(), pair.dim(), "gd_run: stack");
  require(stack0.depth() == config.depth, "gd_run: config depth differs from stack");
  FlowConfig descent = config;
  descent.integrator = Integrator::explicit_euler;
  return drive<Matrix>(
      stack0.weights(), pair, descent, 1.0,
      [&](const Matrix& u) { return layer_velocity(u, pair); },
      [](const Matrix& u) { return product_over_layers(u); });
}

double quasi_norm(const EffectiveWeights& w, Eigen::Index depth) {
  require(depth >= 1, "quasi_norm: depth must be at least 1");
  const double exponent = 2.0 / static_cast<double>(depth);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) sum += std::pow(std::abs(w[i]), exponent);
  return sum;
}

ConservationReport conservation_report(const std::vector<TrajectorySnapshot>& snapshots,
                                       Eigen::Index depth) {
  require(!snapshots.empty(), "conservation_report: empty trajectory");
  ConservationReport report;
  report.initial = quasi_norm(snapshots.front().w, depth);
  report.argmax_time = snapshots.front().t;
  for (const auto& snap : snapshots) {
    const double drift = std::abs(quasi_norm(snap.w, depth) - report.initial) / report.initial;
    if (drift > report.max_relative_drift) {
      report.max_relative_drift = drift;
      report.argmax_time = snap.t;
    }
  }
  return report;
}

}  // namespace dlnlda
