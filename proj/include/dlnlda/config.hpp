#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dlnlda/scatter.hpp"
#include "dlnlda/types.hpp"

namespace dlnlda {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TableFormat { csv, json };

std::string_view to_string(TableFormat format) noexcept;
TableFormat parse_table_format(std::string_view text);

/// Experiment description. Defaults reproduce the depth comparison run:
/// d = 5, L in {1, 2, 5, 10, 20}, eta = 0.005, 100000 epochs, seed 8086,
/// spread [0.4, 0.6], all-ones initial magnitudes.
struct ExperimentConfig {
  Eigen::Index dim = 5;
  std::vector<Eigen::Index> depths{1, 2, 5, 10, 20};
  double eta = 0.005;
  std::int64_t epochs = 100000;
  std::uint64_t seed = 8086;
  Spread spread{0.4, 0.6};
  std::optional<Vector> init_magnitudes;  // nullopt means "ones"
  std::int64_t record_every = 100;
  std::filesystem::path output_dir = "out";
  TableFormat format = TableFormat::csv;

  /// Throws ConfigError naming the offending field.
  void validate() const;

  Vector initial_magnitudes() const;
};

/// Flat JSON document with the field names above. Missing keys keep their
/// defaults; unknown keys are rejected. init_magnitudes is "ones" or an array.
ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ExperimentConfig& config);

ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies one `--name value` style override. Lists (depths, spread,
/// init_magnitudes) are comma separated.
void apply_override(ExperimentConfig& config, std::string_view name,
                    std::string_view value);

std::vector<double> parse_number_list(std::string_view text);

}  // namespace dlnlda
