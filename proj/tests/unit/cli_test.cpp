#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "wiener/cli.hpp"

using namespace wiener;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::vector<const char*> argv{"wiener-approx"};
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

void expect_same_values(const std::vector<std::string>& args) {
  auto csv = invoke(args);
  auto with_json = args;
  with_json.insert(with_json.end(), {"--format", "json"});
  auto js = invoke(with_json);
  ASSERT_EQ(csv.code, js.code) << csv.err << js.err;
  auto table = parse_csv(csv.out);
  auto doc = nlohmann::json::parse(js.out);
  ASSERT_EQ(doc["rows"].size() + 1, table.size());
  const auto& header = table.front();
  for (std::size_t i = 1; i < table.size(); ++i) {
    const auto& row = doc["rows"][i - 1];
    ASSERT_EQ(row.size(), header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
      const auto& cell = row[header[c]];
      if (cell.is_number()) {
        double a = std::stod(table[i][c]);
        double b = cell.get<double>();
        EXPECT_NEAR(a, b, 1e-15 * std::abs(b)) << header[c];
      } else if (cell.is_string()) {
        EXPECT_EQ(table[i][c], cell.get<std::string>()) << header[c];
      }
    }
  }
}

}  // namespace

TEST(Cli, ExactExample) {
  auto r = invoke({"exact", "--psi", "pow:s=1", "--d", "1", "--p", "inf", "--q", "inf", "--m", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto table = parse_csv(r.out);
  ASSERT_EQ(table.size(), 2u);
  EXPECT_EQ(table[0][1], "sigma");
  EXPECT_EQ(table[1][1], "0.5");
}

TEST(Cli, LatticeExample) {
  auto r = invoke({"lattice", "--r", "inf", "--d", "2", "--s", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto table = parse_csv(r.out);
  EXPECT_EQ(table[0], (std::vector<std::string>{"s", "V", "nu"}));
  EXPECT_EQ(table[1][1], "9");
}

TEST(Cli, OrderAuditExamplePasses) {
  auto r = invoke({"order-audit", "--psi", "pow:s=2", "--d", "1", "--p", "2", "--q", "2", "--m-start", "8",
                   "--m-stop", "4096"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("verdict: PASS"), std::string::npos);
}

TEST(Cli, FailedAuditExitsWithTwo) {
  auto r = invoke({"order-audit", "--psi", "pow:s=2", "--p", "2", "--q", "2", "--m-start", "8", "--m-stop", "64",
                   "--spread", "1.0001"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("verdict: FAIL"), std::string::npos);
}

TEST(Cli, InvalidInputExitsWithOne) {
  EXPECT_EQ(invoke({"exact", "--p", "0", "--m", "1"}).code, 1);
  EXPECT_EQ(invoke({"exact", "--psi", "wave:s=1", "--m", "1"}).code, 1);
  EXPECT_EQ(invoke({"exact", "--m-start", "9", "--m-stop", "3"}).code, 1);
  EXPECT_EQ(invoke({"nonsense"}).code, 1);
  EXPECT_EQ(invoke({"exact", "--p", "1", "--q", "2", "--d", "2", "--psi", "pow:s=1", "--m", "1"}).code, 1);
  auto r = invoke({"exact", "--p", "-1", "--m", "1"});
  EXPECT_NE(r.err.find("p"), std::string::npos);
}

TEST(Cli, InfLiteralAccepted) {
  EXPECT_EQ(invoke({"exact", "--p", "inf", "--q", "1", "--r", "inf", "--m", "2"}).code, 0);
}

TEST(Cli, CsvAndJsonCarryEqualValues) {
  expect_same_values({"exact", "--psi", "geom:b=2", "--p", "1", "--q", "2", "--m-list", "0,1,2,5"});
  expect_same_values({"order-audit", "--psi", "pow:s=2", "--p", "1", "--q", "2", "--m-start", "8", "--m-stop", "256"});
  expect_same_values({"lp-audit", "--psi", "pow:s=2", "--p", "4", "--q", "2", "--m-start", "8", "--m-stop", "64"});
  expect_same_values({"greedy", "--seed", "4", "--m-list", "1,2,3"});
  expect_same_values({"oracle", "--psi", "pow:s=1", "--p", "2", "--q", "1", "--m-start", "1", "--m-stop", "3"});
  expect_same_values({"lattice", "--r", "0.5", "--d", "3", "--s-min", "0", "--s-max", "6"});
}

TEST(Cli, Deterministic) {
  for (auto args : std::vector<std::vector<std::string>>{
           {"greedy", "--seed", "9", "--m-list", "1,4"},
           {"lp-audit", "--psi", "pow:s=2", "--p", "1", "--q", "2", "--m-start", "8", "--m-stop", "32"},
           {"exact", "--psi", "exp:a=1,s=2", "--d", "2", "--p", "2", "--q", "1", "--m-start", "1", "--m-stop", "40"}}) {
    auto a = invoke(args);
    auto b = invoke(args);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.err, b.err);
  }
}

TEST(Cli, OutputFile) {
  auto path = std::filesystem::temp_directory_path() / "wiener_cli_output_test.csv";
  std::filesystem::remove(path);
  auto r = invoke({"lattice", "--r", "1", "--d", "2", "--s", "1", "--output", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), "s,V,nu\n1,5,4\n");
  std::filesystem::remove(path);
}

TEST(Cli, GreedyFieldFile) {
  auto path = std::filesystem::temp_directory_path() / "wiener_cli_field_test.json";
  {
    std::ofstream out(path);
    out << "[[[0], 1, 0], [[1], 0.5, 0], [[-1], 0, 0.5], [[2], 0.25, 0]]";
  }
  auto r = invoke({"greedy", "--field", path.string(), "--p", "1", "--m", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto table = parse_csv(r.out);
  EXPECT_EQ(table[1][1], "1.25");
  std::filesystem::remove(path);
}
