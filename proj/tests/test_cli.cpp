#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bellsieve/cli.hpp"

namespace {

using namespace bellsieve;
using nlohmann::json;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "bellsieve");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

TEST(Cli, IncompleteAnalyzerOddPump) {
  const auto r = run({"bsa", "--circuit", "incomplete_bsa", "--pump", "hg01", "--all-bell"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["pump"], "HG01");
  EXPECT_EQ(doc["report"]["class_count"], 3);
  EXPECT_TRUE(doc["coincidence_basis_only"].get<bool>());
  EXPECT_DOUBLE_EQ(doc["table"]["states"]["phi-"]["A_h+B_h"].get<double>(), 0.5);
  EXPECT_DOUBLE_EQ(doc["success"]["average"].get<double>(), 1.0);
}

TEST(Cli, CompleteAnalyzer) {
  const auto odd = json::parse(run({"bsa", "--circuit", "complete_bsa", "--pump", "hg01", "--all-hyper"}).out);
  EXPECT_EQ(odd["report"]["class_count"], 4);
  EXPECT_DOUBLE_EQ(odd["report"]["bits"].get<double>(), 2.0);
  EXPECT_TRUE(odd["table"]["states"].contains("hyper-psi+"));
  const auto even = json::parse(run({"bsa", "--circuit", "complete_bsa", "--pump", "gauss"}).out);
  EXPECT_EQ(even["report"]["class_count"], 4);
  EXPECT_FALSE(even["coincidence_basis_only"].get<bool>());
}

TEST(Cli, BsaCsvAndOverlap) {
  const auto r = run({"bsa", "--circuit", "incomplete_bsa", "--pump", "hg01", "--state", "psi+",
                      "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"state", "event", "probability"}));
  EXPECT_EQ(rows[1][2], "0.5");
  const auto mixed = json::parse(run({"bsa", "--circuit", "incomplete_bsa", "--pump", "hg01",
                                      "--overlap", "0.88"}).out);
  EXPECT_NEAR(mixed["success"]["average"].get<double>(), 0.94, 1e-12);
  EXPECT_EQ(mixed["success"]["policy"], "error");
}

TEST(Cli, HomDipAndPeak) {
  for (const auto& [pump, at_zero] : {std::pair{"gauss", "0"}, std::pair{"hg01", "1"}}) {
    const auto r = run({"hom", "--pump", pump, "--state", "psi+", "--delays", "-1000:1000:500"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.starts_with("# pump="));
    const auto rows = csv_rows(r.out);
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows[3][3], at_zero) << pump;
    EXPECT_EQ(rows[1][3], rows[5][3]);
    EXPECT_EQ(rows[2][3], rows[4][3]);
    EXPECT_NEAR(std::stod(rows[1][3]), 0.5, 1e-6);
  }
  const auto singlet = csv_rows(run({"hom", "--pump", "hg01", "--state", "psi-", "--delays", "0:0:1"}).out);
  EXPECT_EQ(singlet[1][3], "0");
}

TEST(Cli, HomJson) {
  const auto r = run({"hom", "--all-bell", "--format", "json", "--delays", "0:20:20"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["curves"].size(), 4u);
  EXPECT_DOUBLE_EQ(doc["curves"]["psi-"][0]["p_coinc"].get<double>(), 1.0);
}

TEST(Cli, FieldMaps) {
  const auto zero = run({"field", "--pump", "gauss", "--state", "psi+", "--points", "5", "--x2", "1e-4",
                         "--y2", "2e-4"});
  ASSERT_EQ(zero.code, 0) << zero.err;
  const auto rows = csv_rows(zero.out);
  ASSERT_EQ(rows.size(), 26u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i][4], "0");

  const auto phi = csv_rows(run({"field", "--pump", "hg01", "--state", "phi+", "--points", "5"}).out);
  for (std::size_t i = 1; i < phi.size(); ++i)
    if (phi[i][1] == "0") {
      EXPECT_EQ(phi[i][4], "0") << phi[i][0];
    }
  bool any_nonzero = false;
  for (std::size_t i = 1; i < phi.size(); ++i) any_nonzero |= phi[i][4] != "0";
  EXPECT_TRUE(any_nonzero);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"hom", "--delays", "1:0:1"}).code, cli::kBadConfig);
  EXPECT_EQ(run({"hom", "--delays", "a:b:c"}).code, cli::kBadConfig);
  EXPECT_EQ(run({"field", "--z", "0"}).code, cli::kBadConfig);
  EXPECT_EQ(run({"field", "--points", "1"}).code, cli::kBadConfig);
  EXPECT_EQ(run({"bsa", "--circuit", "no_such_circuit"}).code, cli::kBadConfig);
  EXPECT_EQ(run({"bsa", "--circuit", "incomplete_bsa", "--pump", "lg10"}).code, cli::kBadConfig);
  EXPECT_EQ(run({"bsa", "--circuit", "incomplete_bsa", "--all-hyper"}).code, cli::kBadConfig);
  EXPECT_EQ(run({"bsa", "--circuit", "incomplete_bsa", "--overlap", "2"}).code, cli::kBadConfig);
  EXPECT_EQ(run({"bsa", "--bogus"}).code, cli::kBadConfig);
  EXPECT_EQ(run({}).code, cli::kBadConfig);
  EXPECT_EQ(run({"--help"}).code, cli::kOk);

  const auto path = std::filesystem::temp_directory_path() / "bellsieve_bad_schema.json";
  std::ofstream(path) << R"({"paths": ["1"], "source_paths": ["1", "2"]})";
  const auto r = run({"bsa", "--circuit", path.string()});
  EXPECT_EQ(r.code, cli::kBadSchema);
  EXPECT_NE(r.err.find("schema error"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(Cli, FixtureDirectoryOverride) {
  const auto dir = std::filesystem::temp_directory_path() / "bellsieve_fixtures";
  std::filesystem::create_directories(dir);
  std::filesystem::copy_file(BELLSIEVE_FIXTURE_DIR "/incomplete_bsa.json", dir / "renamed.json",
                             std::filesystem::copy_options::overwrite_existing);
  ::setenv("BELLSIEVE_FIXTURES", dir.c_str(), 1);
  const auto r = run({"bsa", "--circuit", "renamed", "--pump", "hg01"});
  const auto missing = run({"bsa", "--circuit", "incomplete_bsa"});
  ::unsetenv("BELLSIEVE_FIXTURES");
  std::filesystem::remove_all(dir);
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(missing.code, cli::kBadConfig);
}

TEST(Cli, OutputIsByteStable) {
  const std::vector<std::string> args{"bsa", "--circuit", "complete_bsa", "--pump", "hg01", "--overlap", "0.85"};
  EXPECT_EQ(run(args).out, run(args).out);
}

TEST(Cli, WritesOutFile) {
  const auto path = std::filesystem::temp_directory_path() / "bellsieve_hom.csv";
  const auto r = run({"hom", "--delays", "0:0:1", "--out", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  const std::string text((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(text, run({"hom", "--delays", "0:0:1"}).out);
  std::filesystem::remove(path);
}

}  // namespace
