#include "dce/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "dce/errors.hpp"

namespace dce::io {

namespace fs = std::filesystem;

void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("io", "cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw InvalidArgument("io", "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw InvalidArgument("io", "cannot move " + tmp.string() + " into place: " + ec.message());
  }
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string matrix_csv(const Eigen::MatrixXd& m, const std::string& row_label) {
  std::string s = row_label;
  for (Eigen::Index j = 0; j < m.cols(); ++j) s += "," + std::to_string(j + 1);
  s += '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    s += std::to_string(i + 1);
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      s += ',';
      s += format_double(m(i, j));
    }
    s += '\n';
  }
  return s;
}

void write_matrix_csv(const fs::path& path, const Eigen::MatrixXd& m, const std::string& row_label) {
  write_atomic(path, matrix_csv(m, row_label));
}

void Table::add_column(std::string name, std::vector<double> values) {
  if (!data.empty() && values.size() != rows()) {
    throw InvalidArgument("io", "column '" + name + "' has the wrong length");
  }
  columns.push_back(std::move(name));
  data.push_back(std::move(values));
}

const std::vector<double>& Table::column(const std::string& name) const {
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] == name) return data[c];
  }
  throw InvalidArgument("io", "no column named '" + name + "'");
}

std::string table_csv(const Table& t) {
  std::string s;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (c) s += ',';
    s += t.columns[c];
  }
  s += '\n';
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.data.size(); ++c) {
      if (c) s += ',';
      s += format_double(t.data[c][r]);
    }
    s += '\n';
  }
  return s;
}

void write_table_csv(const fs::path& path, const Table& t) { write_atomic(path, table_csv(t)); }

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const fs::path& path, int line) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    throw InvalidArgument("io", path.string() + ":" + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

std::vector<std::vector<std::string>> read_rows(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("io", "cannot open " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(split(line));
  }
  if (rows.empty()) throw InvalidArgument("io", path.string() + ": empty file");
  return rows;
}

}  // namespace

Eigen::MatrixXd read_matrix_csv(const fs::path& path) {
  const auto rows = read_rows(path);
  const std::size_t cols = rows.front().size() - 1;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size() - 1), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != cols + 1) {
      throw InvalidArgument("io", path.string() + ":" + std::to_string(r + 1) + ": wrong cell count");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(c)) =
          parse_double(rows[r][c + 1], path, static_cast<int>(r + 1));
    }
  }
  return m;
}

Table read_table_csv(const fs::path& path) {
  const auto rows = read_rows(path);
  Table t;
  t.columns = rows.front();
  t.data.assign(t.columns.size(), {});
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != t.columns.size()) {
      throw InvalidArgument("io", path.string() + ":" + std::to_string(r + 1) + ": wrong cell count");
    }
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      t.data[c].push_back(parse_double(rows[r][c], path, static_cast<int>(r + 1)));
    }
  }
  return t;
}

void write_json(const fs::path& path, const nlohmann::json& j) { write_atomic(path, j.dump(2) + "\n"); }

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("io", "cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument("io", path.string() + ": " + e.what());
  }
}

}  // namespace dce::io
