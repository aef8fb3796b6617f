#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dlnlda/network.hpp"
#include "dlnlda/objective.hpp"
#include "dlnlda/scatter.hpp"

namespace dlnlda {

enum class Integrator { explicit_euler, rk4 };
enum class FlowMode { per_layer, effective };

std::string_view to_string(Integrator integrator) noexcept;
std::string_view to_string(FlowMode mode) noexcept;

/// Settings shared by continuous flow and discrete descent.
///
/// `step` is dt for flow and the learning rate for descent; `total` is the
/// number of steps (epochs), so a flow covers the horizon T = total * step.
/// Snapshots are taken at step 0, every `record_every` steps, and at the
/// final step.
struct FlowConfig {
  Eigen::Index depth = 1;
  double step = 1e-3;
  std::int64_t total = 1;
  Integrator integrator = Integrator::rk4;
  FlowMode mode = FlowMode::effective;
  std::int64_t record_every = 1;

  void validate() const;
};

/// Steps needed to reach `horizon` with step size `dt` (rounded to nearest).
std::int64_t steps_for_horizon(double horizon, double dt);

struct TrajectorySnapshot {
  double t = 0.0;  // flow time, or epoch index for descent
  EffectiveWeights w;
  double loss = 0.0;
  double quasi_norm = 0.0;
  double balance_residual = 0.0;
  double grad_norm = 0.0;
  Matrix layers;  // depth x dim layer state; empty in effective mode
};

enum class RunStatus { completed, positivity_breach, non_finite };

std::string_view to_string(RunStatus status) noexcept;

struct Trajectory {
  std::vector<TrajectorySnapshot> snapshots;
  RunStatus status = RunStatus::completed;
  /// Step at which the state first became invalid (breach or non-finite).
  std::optional<std::int64_t> failed_step;
  /// First snapshot step whose loss exceeds the previous snapshot's by >10%.
  std::optional<std::int64_t> first_unstable_step;
  std::string diagnostic;
};

inline constexpr double kInstabilityJump = 0.10;

/// dw_i/dt = -L * w_i^(2 - 2/L) * (grad L)_i. Requires all w_i > 0.
Vector effective_flow_rhs(const EffectiveWeights& w, const ScatterPair& pair,
                          Eigen::Index depth);

/// dw_i/dt assembled from per-layer gradients by the chain rule:
/// sum_k (w_i / u_i^(k)) * (-g_i^(k)).
Vector effective_velocity_from_layers(const LayerStack& stack,
                                      const Matrix& layer_grads);

/// Integrates the gradient flow from w0. In per-layer mode the stack starts
/// balanced (balanced_init(w0, depth)) and all depth*dim coordinates are
/// integrated; in effective mode the w-space ODE is integrated directly.
Trajectory integrate_flow(const EffectiveWeights& w0, const ScatterPair& pair,
                          const FlowConfig& config);

/// Per-layer flow from an arbitrary (possibly unbalanced) stack.
Trajectory integrate_layer_flow(const LayerStack& stack0,
                                const ScatterPair& pair,
                                const FlowConfig& config);

/// Full-batch gradient descent on the layer parameters; all layers are updated
/// simultaneously from one loss evaluation per epoch. A positivity breach or
/// non-finite state ends the run; the last valid state is always the final
/// snapshot. config.mode must be per_layer and config.depth must match the
/// stack.
Trajectory gd_run(const LayerStack& stack0, const ScatterPair& pair,
                  const FlowConfig& config);

/// sum_i |w_i|^(2/L).
double quasi_norm(const EffectiveWeights& w, Eigen::Index depth);

struct ConservationReport {
  double initial = 0.0;
  double max_relative_drift = 0.0;
  double argmax_time = 0.0;
};

ConservationReport conservation_report(
    const std::vector<TrajectorySnapshot>& snapshots, Eigen::Index depth);

}  // namespace dlnlda
