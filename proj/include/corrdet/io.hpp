#pragma once

#include <string>
#include <vector>

#include "corrdet/corrmat.hpp"
#include "corrdet/simharness.hpp"

namespace corrdet {

/// Comma-separated, one data row per line; `header` skips the first line.
DataMatrix read_data_csv(const std::string& path, bool header = false);
void write_data_csv(const DataMatrix& x, const std::string& path);

enum class ExportFormat { kJson, kCsv };

nlohmann::json result_to_json(const SimResult& result);

/// Writes the result and, next to it, `<path>.qq.csv` with the pairs
/// (Phi^{-1}((i - 0.5)/N), z_(i)).
void export_results(const SimResult& result, const std::string& path, ExportFormat format);

/// z samples from a file written by export_results (either format).
std::vector<double> import_z(const std::string& path);

std::string qq_path(const std::string& path);

}  // namespace corrdet
