#include "dlnlda/table.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dlnlda {

namespace {

void append_number(std::string& out, double value) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", value);
  out.append(buf, static_cast<std::size_t>(n));
}

std::vector<double> row_values(const TableRow& row) {
  std::vector<double> values{row.t, row.loss, row.grad_norm, row.quasi_norm, row.balance_residual};
  values.insert(values.end(), row.w.begin(), row.w.end());
  return values;
}

TableRow row_from_values(const std::vector<double>& values) {
  TableRow row;
  row.t = values[0];
  row.loss = values[1];
  row.grad_norm = values[2];
  row.quasi_norm = values[3];
  row.balance_residual = values[4];
  row.w.assign(values.begin() + 5, values.end());
  return row;
}

double parse_cell(const std::string& cell) {
  char* end = nullptr;
  const double value = std::strtod(cell.c_str(), &end);
  if (cell.empty() || end != cell.c_str() + cell.size())
    throw std::invalid_argument("table: malformed number '" + cell + "'");
  return value;
}

}  // namespace

std::vector<std::string> table_columns(Eigen::Index dim) {
  std::vector<std::string> cols{"t", "loss", "grad_norm", "quasi_norm", "balance_residual"};
  for (Eigen::Index i = 1; i <= dim; ++i) cols.push_back("w_" + std::to_string(i));
  return cols;
}

TableRow to_row(const TrajectorySnapshot& snapshot) {
  const Vector& w = snapshot.w.values();
  return TableRow{snapshot.t,
                  snapshot.loss,
                  snapshot.grad_norm,
                  snapshot.quasi_norm,
                  snapshot.balance_residual,
                  std::vector<double>(w.data(), w.data() + w.size())};
}

std::string emit_table(const std::vector<TrajectorySnapshot>& snapshots, Eigen::Index dim,
                       TableFormat format) {
  require(!snapshots.empty(), "emit_table: no snapshots");
  for (const auto& snap : snapshots) require_dim(snap.w.size(), dim, "emit_table: snapshot w");
  const auto cols = table_columns(dim);

  if (format == TableFormat::json) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& snap : snapshots) {
      const auto values = row_values(to_row(snap));
      nlohmann::json obj = nlohmann::json::object();
      for (std::size_t c = 0; c < cols.size(); ++c) obj[cols[c]] = values[c];
      doc.push_back(std::move(obj));
    }
    return doc.dump(1) + "\n";
  }

  std::string out;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (c != 0) out += ',';
    out += cols[c];
  }
  out += '\n';
  for (const auto& snap : snapshots) {
    const auto values = row_values(to_row(snap));
    for (std::size_t c = 0; c < values.size(); ++c) {
      if (c != 0) out += ',';
      append_number(out, values[c]);
    }
    out += '\n';
  }
  return out;
}

std::vector<TableRow> parse_table(std::string_view text, Eigen::Index dim, TableFormat format) {
  const auto cols = table_columns(dim);
  std::vector<TableRow> rows;

  if (format == TableFormat::json) {
    const auto doc = nlohmann::json::parse(text);
    for (const auto& obj : doc) {
      std::vector<double> values;
      for (const auto& col : cols) values.push_back(obj.at(col).get<double>());
      rows.push_back(row_from_values(values));
    }
    return rows;
  }

  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("table: missing header");
  std::string expected;
  for (std::size_t c = 0; c < cols.size(); ++c) expected += (c ? "," : "") + cols[c];
  if (line != expected) throw std::invalid_argument("table: unexpected header '" + line + "'");
  while (std::getline(in, line)) {
    std::vector<double> values;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) values.push_back(parse_cell(cell));
    if (values.size() != cols.size())
      throw std::invalid_argument("table: row has " + std::to_string(values.size()) + " cells");
    rows.push_back(row_from_values(values));
  }
  return rows;
}

void write_text_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::int64_t expected_row_count(std::int64_t epochs, std::int64_t record_every) {
  return epochs / record_every + 1 + (epochs % record_every != 0 ? 1 : 0);
}

}  // namespace dlnlda
