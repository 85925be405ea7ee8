#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "bubblefem/errors.hpp"
#include "cli.hpp"

using namespace bubblefem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "bubblefem");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
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

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path.string();
}

double max_column(const std::vector<std::vector<std::string>>& rows, std::size_t col) {
  double m = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) m = std::max(m, std::stod(rows[i][col]));
  return m;
}

}  // namespace

TEST(Cli, CoeffReportsCanonicalAndCompatSigns) {
  const auto r = call({"coeff", "--epsilon", "-1", "--kappa", "0", "--lambda", "1", "--length", "1.5708", "--order", "2",
                       "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  double c = 0, compat = 0, closed = 0;
  for (const auto& row : parse_csv(r.out)) {
    if (row[0] == "c1") c = std::stod(row[1]);
    if (row[0] == "paper_compat_c") compat = std::stod(row[1]);
    if (row[0] == "c_closed_form") closed = std::stod(row[1]);
  }
  EXPECT_NEAR(c, -0.2062, 5e-4);
  EXPECT_NEAR(compat, 0.2062, 5e-4);
  EXPECT_NEAR(closed, c, 1e-12);
  const auto table = call({"coeff"});
  EXPECT_NE(table.out.find("+0.2062"), std::string::npos);
}

TEST(Cli, CoeffCubicFlagsClosedFormMismatch) {
  const auto r = call({"coeff", "--epsilon", "-0.3", "--kappa", "0.7", "--lambda", "1.3", "--length", "0.8", "--order", "3",
                       "--u0", "1", "--ul", "2", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_TRUE(doc["summary"]["closed_form_mismatch"].get<bool>());
}

TEST(Cli, TablesCsvAllPass) {
  const auto r = call({"tables", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 29u);
  const std::vector<std::string> head{"x_or_t", "paper_exact", "paper_bubble", "paper_linear", "computed_bubble",
                                      "computed_linear", "pass"};
  for (std::size_t i = 0; i < head.size(); ++i) EXPECT_EQ(rows[0][i], head[i]);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i][6], "true");
  EXPECT_EQ(call({"tables", "--sign-compat", "false"}).code, cli::kExitAcceptance);
}

TEST(Cli, SteadyBubbleErrorBelowLinear) {
  const auto bub = call({"steady", "--format", "csv"});
  const auto lin = call({"steady", "--format", "csv", "--enrichment", "linear"});
  ASSERT_EQ(bub.code, 0) << bub.err;
  ASSERT_EQ(lin.code, 0) << lin.err;
  const auto rb = parse_csv(bub.out);
  const auto rl = parse_csv(lin.out);
  EXPECT_EQ(rb[0], (std::vector<std::string>{"x", "u_numeric", "u_exact", "abs_error"}));
  EXPECT_EQ(rb.size(), 52u);
  EXPECT_LT(max_column(rb, 3), max_column(rl, 3));
}

TEST(Cli, SteadyUnknownExactLeavesColumnsEmpty) {
  const auto r = call({"steady", "--kappa", "1", "--elements", "4", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  EXPECT_EQ(rows[1][2], "");
}

TEST(Cli, TransientCsvAndJson) {
  const auto r = call({"transient", "--format", "csv", "--elements", "8", "--stride", "50"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"t", "x", "u_numeric", "u_exact", "abs_error"}));
  EXPECT_EQ(rows.size(), 1u + 3u * 9u);  // t = 0, 0.5, 1 at 9 nodes
  const auto j = call({"transient", "--format", "json", "--sign-compat", "false", "--dt", "0.05"});
  ASSERT_EQ(j.code, 0) << j.err;
  const auto doc = nlohmann::json::parse(j.out);
  EXPECT_EQ(doc["command"], "transient");
  EXPECT_NEAR(doc["summary"]["decay_rate_exact"].get<double>(), 2.0, 1e-15);
  EXPECT_LT(doc["summary"]["bubble_c"].get<double>(), 0.0);
}

TEST(Cli, OutputIsDeterministic) {
  const auto a = call({"steady", "--format", "json", "--samples", "3"});
  const auto b = call({"steady", "--format", "json", "--samples", "3"});
  EXPECT_EQ(a.out, b.out);
  const auto c = call({"convergence", "--format", "csv", "--counts", "10", "20"});
  const auto d = call({"convergence", "--format", "csv", "--counts", "10", "20"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(c.out, d.out);
  EXPECT_EQ(parse_csv(c.out).size(), 7u);
}

TEST(Cli, ConfigFileWithFlagOverride) {
  const auto path = temp_file("bubblefem_cfg.json", R"({
  "elements": 10,
  "enrichment": "linear",
  "format": "csv",
  "left_bc": {"type": "dirichlet", "value": 1.5}
})");
  const auto r = call({"steady", "--config", path});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(parse_csv(r.out).size(), 12u);
  const auto o = call({"steady", "--config", path, "--elements", "20"});
  EXPECT_EQ(parse_csv(o.out).size(), 22u);
}

TEST(Cli, ConfigErrorsNameLineAndField) {
  const auto bad_type = temp_file("bubblefem_bad_type.json", "{\n  \"dt\": 0.1,\n  \"elements\": \"ten\"\n}\n");
  const auto r = call({"steady", "--config", bad_type});
  EXPECT_EQ(r.code, cli::kExitValidation);
  EXPECT_NE(r.err.find(":3: field 'elements'"), std::string::npos) << r.err;

  const auto malformed = temp_file("bubblefem_malformed.json", "{\n  \"dt\": 0.1,\n  \"elements\" 4\n}\n");
  const auto m = call({"steady", "--config", malformed});
  EXPECT_EQ(m.code, cli::kExitValidation);
  EXPECT_NE(m.err.find(":3:"), std::string::npos) << m.err;

  const auto unknown = temp_file("bubblefem_unknown.json", "{\"elemnts\": 4}");
  EXPECT_NE(call({"steady", "--config", unknown}).err.find("unknown field"), std::string::npos);
  EXPECT_EQ(call({"steady", "--config", "/nonexistent/cfg.json"}).code, cli::kExitValidation);
}

TEST(Cli, ValidationAndNumericalExitCodes) {
  EXPECT_EQ(call({"steady", "--enrichment", "quartic"}).code, cli::kExitValidation);
  EXPECT_EQ(call({"steady", "--elements", "0"}).code, cli::kExitValidation);
  EXPECT_EQ(call({"transient", "--dt", "-1"}).code, cli::kExitValidation);
  EXPECT_EQ(call({"transient", "--kappa", "1"}).code, cli::kExitValidation);
  EXPECT_EQ(call({"steady", "--left-flux", "0", "--right-flux", "0"}).code, cli::kExitValidation);
  EXPECT_EQ(call({"steady", "--left-flux", "0", "--left-dirichlet", "1"}).code, cli::kExitValidation);
  EXPECT_EQ(call({"convergence", "--kappa", "1"}).code, cli::kExitValidation);
  EXPECT_EQ(call({"nosuch"}).code, cli::kExitValidation);
  EXPECT_EQ(call({}).code, cli::kExitValidation);
  EXPECT_EQ(call({"coeff", "--epsilon", "0", "--lambda", "1", "--length", "1e-70"}).code, cli::kExitNumerical);
}

TEST(Cli, HelpListsFlags) {
  const auto r = call({"--help"});
  EXPECT_EQ(r.code, 0);
  for (const char* flag : {"--config", "--format", "--out", "--quad-points", "--sign-compat", "--dt", "--counts"})
    EXPECT_NE(r.out.find(flag), std::string::npos) << flag;
}

TEST(Cli, WritesOutFile) {
  const auto path = (std::filesystem::temp_directory_path() / "bubblefem_tables.csv").string();
  std::filesystem::remove(path);
  const auto r = call({"tables", "--format", "csv", "--out", path});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(parse_csv(buf.str()).size(), 29u);
}

TEST(Cli, ExecuteDirectly) {
  cli::RunConfig cfg;
  cfg.command = cli::Command::selftest;
  cfg.format = cli::Format::csv;
  std::ostringstream out, err;
  EXPECT_EQ(cli::execute(cfg, out, err), 0) << err.str();
  EXPECT_NE(out.str().find("id,status,title,detail"), std::string::npos);
}
