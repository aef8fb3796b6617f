#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dlnlda/config.hpp"
#include "dlnlda/dynamics.hpp"

namespace dlnlda {

/// One parsed trajectory row. Columns, in order:
///   t, loss, grad_norm, quasi_norm, balance_residual, w_1 .. w_d
struct TableRow {
  double t = 0.0;
  double loss = 0.0;
  double grad_norm = 0.0;
  double quasi_norm = 0.0;
  double balance_residual = 0.0;
  std::vector<double> w;

  friend bool operator==(const TableRow&, const TableRow&) = default;
};

std::vector<std::string> table_columns(Eigen::Index dim);

/// CSV: header row then one row per snapshot, every value printed with 17
/// significant digits, '\n' terminated. JSON: array of objects keyed by the
/// same column names.
std::string emit_table(const std::vector<TrajectorySnapshot>& snapshots,
                       Eigen::Index dim, TableFormat format);

std::vector<TableRow> parse_table(std::string_view text, Eigen::Index dim,
                                  TableFormat format);

TableRow to_row(const TrajectorySnapshot& snapshot);

/// Writes the bytes to `path`; throws IoError with the path on failure.
void write_text_file(const std::filesystem::path& path, std::string_view bytes);
std::string read_text_file(const std::filesystem::path& path);

/// Rows emitted for a run of `epochs` steps at stride `record_every`: epoch 0,
/// every multiple of the stride, and the final epoch.
std::int64_t expected_row_count(std::int64_t epochs, std::int64_t record_every);

}  // namespace dlnlda
