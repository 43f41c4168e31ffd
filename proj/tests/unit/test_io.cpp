#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "corrdet/io.hpp"
#include "corrdet/special.hpp"

using namespace corrdet;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("corrdet_test_" + name)).string();
}

SimResult small_result() {
  SimConfig c;
  c.p = 15;
  c.n = 40;
  c.law = standardize(TailLaw::pareto(3.5));
  c.reps = 25;
  c.seed = 3;
  return run_clt_experiment(c);
}

long count_lines(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  long k = 0;
  while (std::getline(in, line)) ++k;
  return k;
}

}  // namespace

TEST(Export, JsonRoundTripIsExact) {
  const auto res = small_result();
  const auto path = temp_path("roundtrip.json");
  export_results(res, path, ExportFormat::kJson);
  EXPECT_EQ(import_z(path), res.z);
  std::ifstream in(path);
  const auto j = nlohmann::json::parse(in);
  for (const char* key : {"config", "consts", "ks", "ks_pvalue", "moments", "z_quantiles", "wall_seconds"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["config"]["reps"], 25);
}

TEST(Export, CsvRoundTripAndLineCount) {
  const auto res = small_result();
  const auto path = temp_path("roundtrip.csv");
  export_results(res, path, ExportFormat::kCsv);
  EXPECT_EQ(import_z(path), res.z);
  EXPECT_EQ(count_lines(path), 26);
}

TEST(Export, QqEndpoints) {
  const auto res = small_result();
  const auto path = temp_path("qq.json");
  export_results(res, path, ExportFormat::kJson);
  std::ifstream in(qq_path(path));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "theoretical,empirical");
  std::vector<std::pair<double, double>> rows;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    rows.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
  }
  ASSERT_EQ(rows.size(), 25u);
  EXPECT_DOUBLE_EQ(rows.front().first, normal_quantile(0.5 / 25));
  EXPECT_DOUBLE_EQ(rows.back().first, normal_quantile(24.5 / 25));
  EXPECT_DOUBLE_EQ(rows.front().second, *std::min_element(res.z.begin(), res.z.end()));
}

TEST(Export, UnwritablePathReported) {
  try {
    export_results(small_result(), "/nonexistent-dir/x.json", ExportFormat::kJson);
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent-dir/x.json"), std::string::npos);
  }
}

TEST(DataCsv, RoundTripAndHeader) {
  SimConfig c;
  const auto x = sample_matrix(GaussianLaw{}, 4, 9, StreamId{1, 1, 0});
  const auto path = temp_path("data.csv");
  write_data_csv(x, path);
  EXPECT_EQ(read_data_csv(path).values(), x.values());
  const auto hpath = temp_path("data_header.csv");
  {
    std::ofstream out(hpath);
    out << "a,b,c\n1,2,3\n4,5,6.5\n";
  }
  const auto h = read_data_csv(hpath, true);
  EXPECT_EQ(h.p(), 2);
  EXPECT_EQ(h.n(), 3);
  EXPECT_EQ(h(1, 2), 6.5);
  EXPECT_THROW(read_data_csv(hpath, false), std::runtime_error);
}

TEST(DataCsv, Malformed) {
  const auto path = temp_path("ragged.csv");
  {
    std::ofstream out(path);
    out << "1,2,3\n4,5\n";
  }
  EXPECT_THROW(read_data_csv(path), std::runtime_error);
  EXPECT_THROW(read_data_csv(temp_path("missing.csv")), std::runtime_error);
}
