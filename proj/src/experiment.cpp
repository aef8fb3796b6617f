#include "dlnlda/experiment.hpp"

#include <system_error>

#include "dlnlda/network.hpp"
#include "dlnlda/table.hpp"

namespace dlnlda {

namespace {

nlohmann::json optional_json(const std::optional<std::int64_t>& value) {
  return value ? nlohmann::json(*value) : nlohmann::json(nullptr);
}

nlohmann::json vector_json(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

DepthResult run_depth(const ExperimentConfig& config, const ScatterPair& pair, Eigen::Index depth) {
  FlowConfig flow;
  flow.depth = depth;
  flow.step = config.eta;
  flow.total = config.epochs;
  flow.integrator = Integrator::explicit_euler;
  flow.mode = FlowMode::per_layer;
  flow.record_every = config.record_every;

  Trajectory traj = gd_run(balanced_init(config.initial_magnitudes(), depth), pair, flow);

  DepthResult result;
  result.depth = depth;
  result.table_path = table_path(config, depth);
  result.conservation = conservation_report(traj.snapshots, depth);
  result.status = traj.status;
  result.failed_epoch = traj.failed_step;
  result.first_unstable_epoch = traj.first_unstable_step;
  result.diagnostic = traj.diagnostic;
  result.snapshots = std::move(traj.snapshots);
  return result;
}

}  // namespace

double DepthResult::final_sparsity_ratio() const {
  const Vector& w = snapshots.back().w.values();
  return w.minCoeff() / w.maxCoeff();
}

std::filesystem::path table_path(const ExperimentConfig& config, Eigen::Index depth) {
  return config.output_dir / ("L" + std::to_string(depth) + "." + std::string(to_string(config.format)));
}

RunArtifact run_experiment(const ExperimentConfig& config) {
  config.validate();
  return run_experiment(config, synthesize_scatter(config.dim, config.seed, config.spread));
}

RunArtifact run_experiment(const ExperimentConfig& config, const ScatterPair& pair) {
  config.validate();
  if (pair.dim() != config.dim) throw ConfigError("scatter pair dim does not match config dim");
  ensure_directory(config.output_dir);

  RunArtifact artifact{config, pair, oracle::generalized_eig_min(pair), {}};
  for (Eigen::Index depth : config.depths) {
    DepthResult result = run_depth(config, pair, depth);
    write_text_file(result.table_path, emit_table(result.snapshots, config.dim, config.format));
    artifact.depths.push_back(std::move(result));
  }
  write_text_file(config.output_dir / "artifact.json", artifact.to_json().dump(2) + "\n");
  return artifact;
}

nlohmann::json RunArtifact::to_json() const {
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& r : depths) {
    runs.push_back({{"depth", r.depth},
                    {"table", r.table_path.filename().string()},
                    {"rows", r.snapshots.size()},
                    {"status", to_string(r.status)},
                    {"failed_epoch", optional_json(r.failed_epoch)},
                    {"diagnostic", r.diagnostic},
                    {"first_unstable_epoch", optional_json(r.first_unstable_epoch)},
                    {"final_epoch", r.final_epoch()},
                    {"initial_loss", r.initial_loss()},
                    {"final_loss", r.final_loss()},
                    {"final_loss_gap", r.final_loss() - optimum.lambda_min},
                    {"final_w", vector_json(r.snapshots.back().w.values())},
                    {"conservation",
                     {{"initial", r.conservation.initial},
                      {"max_relative_drift", r.conservation.max_relative_drift},
                      {"argmax_time", r.conservation.argmax_time}}}});
  }
  return {{"config", config_to_json(config)},
          {"scatter", scatter_to_json(pair, config.seed, config.spread)},
          {"oracle", {{"lambda_min", optimum.lambda_min}, {"v_min", vector_json(optimum.v_min)}}},
          {"runs", std::move(runs)}};
}

}  // namespace dlnlda
