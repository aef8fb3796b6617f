#include "dlnlda/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

namespace dlnlda {

namespace {

const std::set<std::string, std::less<>> kKnownKeys = {
    "dim",   "depths",         "eta",          "epochs",     "seed", "spread",
    "init_magnitudes", "record_every", "output_dir", "format"};

template <typename T>
T parse_integer(std::string_view text, std::string_view field) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end)
    throw ConfigError(std::string(field) + ": not an integer: '" + std::string(text) + "'");
  return value;
}

double parse_double(std::string_view text, std::string_view field) {
  const std::string owned(text);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(owned, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != owned.size())
    throw ConfigError(std::string(field) + ": not a number: '" + owned + "'");
  return value;
}

std::vector<std::string_view> split_commas(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    std::string_view part = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
    parts.push_back(part);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return parts;
}

}  // namespace

std::string_view to_string(TableFormat format) noexcept {
  return format == TableFormat::csv ? "csv" : "json";
}

TableFormat parse_table_format(std::string_view text) {
  if (text == "csv") return TableFormat::csv;
  if (text == "json") return TableFormat::json;
  throw ConfigError("format: expected csv or json, got '" + std::string(text) + "'");
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  for (auto part : split_commas(text)) out.push_back(parse_double(part, "list"));
  return out;
}

void ExperimentConfig::validate() const {
  if (dim < 1) throw ConfigError("dim: must be at least 1");
  if (depths.empty()) throw ConfigError("depths: must be non-empty");
  for (auto depth : depths)
    if (depth < 1) throw ConfigError("depths: every depth must be at least 1");
  if (!(eta > 0.0 && std::isfinite(eta))) throw ConfigError("eta: must be positive");
  if (epochs < 1) throw ConfigError("epochs: must be at least 1");
  if (!(spread.lo > 0.0) || !(spread.hi >= spread.lo) || !std::isfinite(spread.hi))
    throw ConfigError("spread: need 0 < lo <= hi");
  if (record_every < 1) throw ConfigError("record_every: must be at least 1");
  if (output_dir.empty()) throw ConfigError("output_dir: must be set");
  if (init_magnitudes) {
    if (init_magnitudes->size() != dim)
      throw ConfigError("init_magnitudes: length " + std::to_string(init_magnitudes->size()) +
                        " does not match dim " + std::to_string(dim));
    if (!init_magnitudes->allFinite() || !((init_magnitudes->array() > 0.0).all()))
      throw ConfigError("init_magnitudes: entries must be positive");
  }
}

Vector ExperimentConfig::initial_magnitudes() const {
  return init_magnitudes ? *init_magnitudes : Vector::Ones(dim);
}

ExperimentConfig config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
  for (const auto& [key, _] : doc.items())
    if (!kKnownKeys.contains(key)) throw ConfigError("config: unknown key '" + key + "'");

  ExperimentConfig config;
  try {
    if (doc.contains("dim")) config.dim = doc.at("dim").get<Eigen::Index>();
    if (doc.contains("depths")) config.depths = doc.at("depths").get<std::vector<Eigen::Index>>();
    if (doc.contains("eta")) config.eta = doc.at("eta").get<double>();
    if (doc.contains("epochs")) config.epochs = doc.at("epochs").get<std::int64_t>();
    if (doc.contains("seed")) config.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("spread")) {
      const auto bounds = doc.at("spread").get<std::vector<double>>();
      if (bounds.size() != 2) throw ConfigError("spread: expected [lo, hi]");
      config.spread = {bounds[0], bounds[1]};
    }
    if (doc.contains("init_magnitudes")) {
      const auto& init = doc.at("init_magnitudes");
      if (init.is_string()) {
        if (init.get<std::string>() != "ones")
          throw ConfigError("init_magnitudes: expected \"ones\" or an array");
        config.init_magnitudes.reset();
      } else {
        const auto values = init.get<std::vector<double>>();
        config.init_magnitudes = Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
      }
    }
    if (doc.contains("record_every")) config.record_every = doc.at("record_every").get<std::int64_t>();
    if (doc.contains("output_dir")) config.output_dir = doc.at("output_dir").get<std::string>();
    if (doc.contains("format")) config.format = parse_table_format(doc.at("format").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  config.validate();
  return config;
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
  nlohmann::json doc{{"dim", config.dim},
                     {"depths", config.depths},
                     {"eta", config.eta},
                     {"epochs", config.epochs},
                     {"seed", config.seed},
                     {"spread", {config.spread.lo, config.spread.hi}},
                     {"record_every", config.record_every},
                     {"output_dir", config.output_dir.string()},
                     {"format", to_string(config.format)}};
  if (config.init_magnitudes) {
    doc["init_magnitudes"] = std::vector<double>(config.init_magnitudes->data(),
                                                 config.init_magnitudes->data() + config.init_magnitudes->size());
  } else {
    doc["init_magnitudes"] = "ones";
  }
  return doc;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

void apply_override(ExperimentConfig& config, std::string_view name, std::string_view value) {
  if (name == "dim") {
    config.dim = parse_integer<Eigen::Index>(value, name);
  } else if (name == "depths") {
    config.depths.clear();
    for (auto part : split_commas(value)) config.depths.push_back(parse_integer<Eigen::Index>(part, name));
  } else if (name == "eta") {
    config.eta = parse_double(value, name);
  } else if (name == "epochs") {
    config.epochs = parse_integer<std::int64_t>(value, name);
  } else if (name == "seed") {
    config.seed = parse_integer<std::uint64_t>(value, name);
  } else if (name == "spread") {
    const auto bounds = parse_number_list(value);
    if (bounds.size() != 2) throw ConfigError("spread: expected lo,hi");
    config.spread = {bounds[0], bounds[1]};
  } else if (name == "init_magnitudes") {
    if (value == "ones") {
      config.init_magnitudes.reset();
    } else {
      const auto values = parse_number_list(value);
      config.init_magnitudes = Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
    }
  } else if (name == "record_every") {
    config.record_every = parse_integer<std::int64_t>(value, name);
  } else if (name == "output_dir") {
    config.output_dir = std::string(value);
  } else if (name == "format") {
    config.format = parse_table_format(value);
  } else {
    throw ConfigError("unknown override '" + std::string(name) + "'");
  }
}

}  // namespace dlnlda
