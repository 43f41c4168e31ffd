#include "corrdet/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "corrdet/special.hpp"

namespace corrdet {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void close_checked(std::ofstream& out, const std::string& path) {
  out.close();
  if (!out) throw std::runtime_error("write failed: " + path);
}

double parse_double(const std::string& cell, const std::string& path, std::size_t line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
  if (used == 0 || used != cell.size()) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": not a number: '" + cell + "'");
  }
  return v;
}

}  // namespace

std::string qq_path(const std::string& path) { return path + ".qq.csv"; }

DataMatrix read_data_csv(const std::string& path, bool header) {
  auto in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (header && lineno == 1) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(parse_double(cell, path, lineno));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path + ": no data rows");
  RowMatrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  }
  return DataMatrix(std::move(m));
}

void write_data_csv(const DataMatrix& x, const std::string& path) {
  auto out = open_out(path);
  for (Index i = 0; i < x.p(); ++i) {
    for (Index j = 0; j < x.n(); ++j) out << (j ? "," : "") << format_double(x(i, j));
    out << '\n';
  }
  close_checked(out, path);
}

nlohmann::json result_to_json(const SimResult& result) {
  nlohmann::json j;
  j["config"] = result.config;
  j["consts"] = result.consts;
  j["ks"] = result.ks;
  j["ks_pvalue"] = result.ks_pvalue;
  j["moments"] = {{"mean", result.mean}, {"var", result.var}};
  const auto sorted = sorted_copy(result.z);
  nlohmann::json q;
  for (double pr : {0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99}) q[format_double(pr)] = quantile(sorted, pr);
  j["z_quantiles"] = q;
  j["retried"] = result.retried;
  j["wall_seconds"] = result.wall_seconds;
  j["z"] = result.z;
  return j;
}

void export_results(const SimResult& result, const std::string& path, ExportFormat format) {
  {
    auto out = open_out(path);
    if (format == ExportFormat::kJson) {
      out << result_to_json(result).dump(2) << '\n';
    } else {
      out << "z\n";
      for (double z : result.z) out << format_double(z) << '\n';
    }
    close_checked(out, path);
  }
  const std::string qq = qq_path(path);
  auto out = open_out(qq);
  out << "theoretical,empirical\n";
  const auto sorted = sorted_copy(result.z);
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    out << format_double(normal_quantile((static_cast<double>(i) + 0.5) / n)) << ',' << format_double(sorted[i])
        << '\n';
  }
  close_checked(out, qq);
}

std::vector<double> import_z(const std::string& path) {
  auto in = open_in(path);
  const int first = in.peek();
  if (first == '{') {
    nlohmann::json j;
    try {
      in >> j;
      return j.at("z").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(path + ": " + e.what());
    }
  }
  std::vector<double> z;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    z.push_back(parse_double(line, path, lineno));
  }
  return z;
}

}  // namespace corrdet
