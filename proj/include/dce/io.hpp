#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace dce::io {

/// Writes `content` next to `path` and renames it into place, so readers
/// never observe a partial file. Creates parent directories.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Shortest-safe round trip: 17 significant digits, '.' decimal point.
std::string format_double(double x);

/// Matrix CSV: header "<row_label>,1,2,...,cols", then one row per index
/// starting at 1 with the row index in the first column.
std::string matrix_csv(const Eigen::MatrixXd& m, const std::string& row_label = "I");
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m,
                      const std::string& row_label = "I");

/// Column-oriented table with a header of column names.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;  ///< data[c][row]

  std::size_t rows() const { return data.empty() ? 0 : data.front().size(); }
  void add_column(std::string name, std::vector<double> values);
  const std::vector<double>& column(const std::string& name) const;
};

std::string table_csv(const Table& t);
void write_table_csv(const std::filesystem::path& path, const Table& t);

/// Readers throw InvalidArgument with the file name and line on malformed input.
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);
Table read_table_csv(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace dce::io
