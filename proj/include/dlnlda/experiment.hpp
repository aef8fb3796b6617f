#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include <json.hpp>

#include "dlnlda/config.hpp"
#include "dlnlda/dynamics.hpp"
#include "dlnlda/oracle.hpp"
#include "dlnlda/scatter.hpp"

namespace dlnlda {

struct DepthResult {
  Eigen::Index depth = 1;
  std::filesystem::path table_path;
  std::vector<TrajectorySnapshot> snapshots;
  ConservationReport conservation;
  RunStatus status = RunStatus::completed;
  std::optional<std::int64_t> failed_epoch;
  std::optional<std::int64_t> first_unstable_epoch;
  std::string diagnostic;

  double initial_loss() const { return snapshots.front().loss; }
  double final_loss() const { return snapshots.back().loss; }
  double final_epoch() const { return snapshots.back().t; }
  /// min_i w_i / max_i w_i at the final snapshot.
  double final_sparsity_ratio() const;
};

struct RunArtifact {
  ExperimentConfig config;
  ScatterPair pair;
  oracle::GeneralizedEigenResult optimum;
  std::vector<DepthResult> depths;

  nlohmann::json to_json() const;
};

/// One shared scatter pair from config.seed, then for every depth: balanced
/// init from the configured magnitudes, gradient descent, trajectory table
/// written to <output_dir>/L<depth>.<csv|json>, and artifact.json. A failed
/// depth (positivity breach, non-finite) is recorded and the remaining depths
/// still run. Filesystem failures throw IoError.
RunArtifact run_experiment(const ExperimentConfig& config);

/// Same, with a caller-supplied scatter pair (its dim must equal config.dim).
RunArtifact run_experiment(const ExperimentConfig& config, const ScatterPair& pair);

std::filesystem::path table_path(const ExperimentConfig& config, Eigen::Index depth);

}  // namespace dlnlda
