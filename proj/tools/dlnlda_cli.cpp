// dlnlda: run depth-comparison experiments, invariant sweeps and scatter
// synthesis for the Rayleigh-quotient diagonal linear network model.
//
// Exit codes: 0 success, 1 invariant failure, 2 invalid config, 3 I/O failure.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include "dlnlda/config.hpp"
#include "dlnlda/experiment.hpp"
#include "dlnlda/scatter.hpp"
#include "dlnlda/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

int run_command(const std::string& config_path, const std::map<std::string, std::string>& overrides) {
  dlnlda::ExperimentConfig config = config_path.empty() ? dlnlda::ExperimentConfig{} : dlnlda::load_config(config_path);
  for (const auto& [name, value] : overrides) dlnlda::apply_override(config, name, value);
  config.validate();

  const dlnlda::RunArtifact artifact = dlnlda::run_experiment(config);
  std::printf("lambda_min = %.17g\n", artifact.optimum.lambda_min);
  std::printf("%6s  %-17s  %8s  %-12s  %-12s  %-12s  %-10s  %s\n", "depth", "status", "rows", "initial_loss",
              "final_loss", "q_drift", "min/max w", "first_unstable");
  bool bound_ok = true;
  for (const auto& r : artifact.depths) {
    const std::string unstable = r.first_unstable_epoch ? std::to_string(*r.first_unstable_epoch) : "-";
    std::printf("%6lld  %-17s  %8zu  %-12.6g  %-12.6g  %-12.3e  %-10.3e  %s\n", static_cast<long long>(r.depth),
                std::string(dlnlda::to_string(r.status)).c_str(), r.snapshots.size(), r.initial_loss(), r.final_loss(),
                r.conservation.max_relative_drift, r.final_sparsity_ratio(), unstable.c_str());
    if (r.final_loss() < artifact.optimum.lambda_min - 1e-10) bound_ok = false;
  }
  std::printf("artifact: %s\n", (config.output_dir / "artifact.json").string().c_str());
  if (!bound_ok) {
    std::fprintf(stderr, "final loss fell below lambda_min\n");
    return kExitInvariant;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gradient dynamics of the Rayleigh-quotient objective on diagonal linear networks"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run the depth-comparison experiment");
  std::string config_path;
  run->add_option("--config", config_path, "Flat JSON experiment config");
  std::map<std::string, std::string> overrides;
  for (const char* name :
       {"dim", "depths", "eta", "epochs", "seed", "spread", "init_magnitudes", "record_every", "output_dir", "format"}) {
    run->add_option_function<std::string>(
        std::string("--") + name, [&overrides, name](const std::string& v) { overrides[name] = v; },
        std::string("Override config field ") + name);
  }

  auto* verify = app.add_subcommand("verify", "Run randomized invariant checks");
  std::string scope = "all";
  int trials = 100;
  std::uint64_t verify_seed = 8086;
  verify->add_option("--scope", scope, "objective | network | dynamics | all")->capture_default_str();
  verify->add_option("--trials", trials, "Random draws per invariant")->capture_default_str();
  verify->add_option("--seed", verify_seed, "Seed for the random draws")->capture_default_str();

  auto* synth = app.add_subcommand("synth", "Print a synthesized scatter pair as JSON");
  long long dim = 5;
  std::uint64_t synth_seed = 8086;
  std::string spread_text = "0.4,0.6";
  synth->add_option("--dim", dim, "Dimension")->capture_default_str();
  synth->add_option("--seed", synth_seed, "Seed")->capture_default_str();
  synth->add_option("--spread", spread_text, "lo,hi")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return run_command(config_path, overrides);
    if (*verify) {
      const auto report = dlnlda::verify_suite(dlnlda::parse_verify_scope(scope), trials, verify_seed);
      std::cout << report.render();
      return report.all_passed() ? kExitOk : kExitInvariant;
    }
    if (*synth) {
      const auto bounds = dlnlda::parse_number_list(spread_text);
      if (bounds.size() != 2) throw dlnlda::ConfigError("spread: expected lo,hi");
      const dlnlda::Spread spread{bounds[0], bounds[1]};
      const auto pair = dlnlda::synthesize_scatter(dim, synth_seed, spread);
      std::cout << dlnlda::scatter_to_json(pair, synth_seed, spread).dump(2) << "\n";
      return kExitOk;
    }
  } catch (const dlnlda::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
