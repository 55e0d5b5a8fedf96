#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "run_config.hpp"

using namespace nessctl;
using nlohmann::json;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

// Rows as JSON objects, via the JSON-lines writer.
std::vector<json> run_json(int (*cmd)(const RunConfig&, std::ostream&), RunConfig cfg,
                           int* code = nullptr) {
  cfg.format = Format::Json;
  std::ostringstream out;
  const int rc = cmd(cfg, out);
  if (code) *code = rc;
  std::vector<json> rows;
  for (const auto& l : lines_of(out.str()))
    if (!l.empty()) rows.push_back(json::parse(l));
  return rows;
}

}  // namespace

TEST_CASE("csv quoting and number formatting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  CHECK(format_number(1.5) == "1.5");
  CHECK(format_number(0.1) == "0.1");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("exit codes per status") {
  CHECK(exit_code_for(ness::Status::Ok) == 0);
  CHECK(exit_code_for(ness::Status::NonUnique) == 2);
  CHECK(exit_code_for(ness::Status::ClosureViolation) == 3);
  CHECK(exit_code_for(ness::Status::VacuumVanishes) == 3);
  CHECK(exit_code_for(ness::Status::SingularEigenbasis) == 3);
}

TEST_CASE("config parsing") {
  SUBCASE("defaults") {
    const auto c = parse_config(json::object());
    CHECK(c.sizes == std::vector<int>{4});
    CHECK(c.w.values() == std::vector<double>{1.5});
    CHECK(c.baths.gamma21 == 1.0);
    CHECK(c.format == Format::Csv);
    CHECK(c.jobs == 1);
    CHECK(!c.solver.max_chi);
  }
  SUBCASE("full document") {
    const auto c = parse_config(json::parse(R"({
      "sizes": {"start": 2, "stop": 8, "step": 2},
      "w": {"start": 0, "stop": 1, "step": 0.5},
      "mu": 4, "delta": {"re": 0.5, "im": 0},
      "gamma11": 0.1, "gamma21": 0.2, "gamma12": 0.3, "gamma22": 0.4,
      "trunc_tol": 1e-10, "max_chi": 32, "format": "json", "jobs": 3})"));
    CHECK(c.sizes == std::vector<int>{2, 4, 6, 8});
    CHECK(c.w.values() == std::vector<double>{0, 0.5, 1});
    CHECK(c.w.swept());
    CHECK(!c.mu.swept());
    CHECK(c.delta == 0.5);
    CHECK(c.baths.gamma22 == 0.4);
    CHECK(c.solver.trunc_tol == 1e-10);
    CHECK(*c.solver.max_chi == 32);
    CHECK(c.format == Format::Json);
    CHECK(c.jobs == 3);
  }
  SUBCASE("list of sizes and null max_chi") {
    const auto c = parse_config(json::parse(R"({"sizes": [3, 5], "max_chi": null})"));
    CHECK(c.sizes == std::vector<int>{3, 5});
    CHECK(!c.solver.max_chi);
  }
  SUBCASE("rejections") {
    for (const char* bad :
         {R"({"bogus": 1})", R"({"gamma11": -1})", R"({"delta": {"re": 1, "im": 0.5}})",
          R"({"format": "xml"})", R"({"jobs": 0})", R"({"sizes": 0})", R"({"max_chi": 0})",
          R"({"w": {"start": 1, "stop": 0, "step": 0.1}})", R"({"sizes": 2.5})", "[1]"}) {
      CAPTURE(bad);
      CHECK_THROWS_AS(parse_config(json::parse(bad)), UsageError);
    }
  }
  SUBCASE("override values") {
    CHECK(parse_value("3") == json(3));
    CHECK(parse_value("[2,4]") == json::array({2, 4}));
    CHECK(parse_value("json") == json("json"));
  }
}

TEST_CASE("ness command examples") {
  RunConfig cfg;
  std::ostringstream out;
  CHECK(cmd_ness(cfg, out) == kOk);
  const auto rows = lines_of(out.str());
  REQUIRE(rows.size() == 2);
  const auto header = split_csv(rows[0]);
  const auto cells = split_csv(rows[1]);
  CHECK(header.front() == "N");
  CHECK(header.back() == "status");
  CHECK(cells.size() == header.size());
  CHECK(cells.back() == "ok");
  CHECK(out.str().find("\r\n") != std::string::npos);

  cfg.sizes = {4};
  cfg.w = {1, 1, 0};
  cfg.mu = {0, 0, 0};
  int code = -1;
  auto degenerate = run_json(cmd_ness, cfg, &code);
  CHECK(code == kDegenerate);
  CHECK(degenerate.at(0)["status"] == "non_unique");
  CHECK(degenerate.at(0)["eec"].is_null());

  RunConfig closed;
  closed.baths = {0, 0, 0, 0};
  CHECK(run_json(cmd_ness, closed, &code).at(0)["status"] == "non_unique");
  CHECK(code == kDegenerate);

  RunConfig two_sizes;
  two_sizes.sizes = {4, 6};
  CHECK_THROWS_AS(cmd_ness(two_sizes, out), UsageError);
  RunConfig single;
  single.sizes = {1};
  CHECK_THROWS_AS(cmd_ness(single, out), UsageError);
  RunConfig swept;
  swept.w = {0, 1, 0.5};
  CHECK_THROWS_AS(cmd_ness(swept, out), UsageError);
}

TEST_CASE("sweep-size reproduces the odd/even pattern") {
  RunConfig cfg;
  cfg.w = {0, 0, 0};
  cfg.mu = {4, 4, 0};
  for (int n = 2; n <= 12; ++n) cfg.sizes.push_back(n);
  cfg.sizes.erase(cfg.sizes.begin());  // drop the default 4
  cfg.jobs = 2;
  const auto rows = run_json(cmd_sweep_size, cfg);
  REQUIRE(rows.size() == 11);
  double last_even = 1e9;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const int n = rows[k]["N"];
    CHECK(n == static_cast<int>(k) + 2);
    CHECK(rows[k]["status"] == "ok");
    const double eec = rows[k]["eec"];
    if (n % 2) {
      CHECK(eec <= 1e-10);
    } else {
      CHECK(eec > 1e-10);
      CHECK(eec < last_even);
      last_even = eec;
    }
  }
}

TEST_CASE("sweep-size at mu = 0 mirrors the parity pattern") {
  RunConfig cfg;
  cfg.w = {2, 2, 0};
  cfg.mu = {0, 0, 0};
  cfg.sizes = {2, 3, 4, 5};
  const auto rows = run_json(cmd_sweep_size, cfg);
  REQUIRE(rows.size() == 4);
  CHECK(double(rows[0]["eec"]) <= 1e-10);
  CHECK(double(rows[1]["eec"]) > 0.1);
  CHECK(double(rows[2]["eec"]) <= 1e-10);
  CHECK(double(rows[3]["eec"]) > 0.1);
}

TEST_CASE("output is deterministic apart from timings and independent of --jobs") {
  RunConfig cfg;
  cfg.sizes = {2, 3, 4, 5, 6};
  auto strip = [](std::vector<json> rows) {
    for (auto& r : rows) r.erase("runtimeSeconds");
    return rows;
  };
  const auto a = strip(run_json(cmd_sweep_size, cfg));
  cfg.jobs = 3;
  const auto b = strip(run_json(cmd_sweep_size, cfg));
  CHECK(a == b);
}

TEST_CASE("phase-grid") {
  RunConfig cfg;
  cfg.sizes = {4, 6};
  const auto single = run_json(cmd_phase_grid, cfg);
  const auto sweep = run_json(cmd_sweep_size, cfg);
  REQUIRE(single.size() == 2);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(single[k]["eec"] == sweep[k]["eec"]);
    CHECK(double(single[k]["equilibriumBoundaryMu"]) == 3.0);
    CHECK(single[k]["fitSlope"].is_number());
  }

  cfg.w = {0.5, 1.0, 0.5};
  cfg.mu = {0, 1, 1};
  cfg.jobs = 2;
  const auto grid = run_json(cmd_phase_grid, cfg);
  REQUIRE(grid.size() == 8);
  CHECK(grid[0]["w"] == 0.5);
  CHECK(grid[0]["mu"] == 0.0);
  CHECK(grid[0]["N"] == 4);
  CHECK(grid[1]["N"] == 6);
  CHECK(grid[7]["w"] == 1.0);
  CHECK(grid[7]["mu"] == 1.0);
}

TEST_CASE("occupancy command writes one column per site of the widest chain") {
  RunConfig cfg;
  cfg.sizes = {2, 3};
  std::ostringstream out;
  CHECK(cmd_occupancy(cfg, out) == kOk);
  const auto rows = lines_of(out.str());
  REQUIRE(rows.size() == 3);
  const auto header = split_csv(rows[0]);
  CHECK(std::count(header.begin(), header.end(), "occupancy3") == 1);
  CHECK(std::count(header.begin(), header.end(), "occupancy4") == 0);
  const auto first = split_csv(rows[1]);
  const auto col3 = std::find(header.begin(), header.end(), "occupancy3") - header.begin();
  CHECK(first.size() == header.size());
  CHECK(first[col3].empty());
  const auto second = split_csv(rows[2]);
  const double occ = std::stod(second[col3]);
  CHECK(occ >= 0.0);
  CHECK(occ <= 1.0);
}

TEST_CASE("bench reports a median and a slope only for several sizes") {
  RunConfig cfg;
  cfg.sizes = {3};
  auto rows = run_json(cmd_bench, cfg);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0]["logLogSlope"].is_null());
  CHECK(double(rows[0]["runtimeMin"]) <= double(rows[0]["runtimeSeconds"]));
  CHECK(double(rows[0]["runtimeSeconds"]) <= double(rows[0]["runtimeMax"]));
  cfg.sizes = {2, 4};
  rows = run_json(cmd_bench, cfg);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0]["logLogSlope"].is_number());
}

TEST_CASE("fold dump") {
  const auto path = std::filesystem::temp_directory_path() / "nessctl_fold_dump_test.json";
  RunConfig cfg;
  cfg.sizes = {3};
  cfg.dump_fold = path.string();
  std::ostringstream out;
  CHECK(cmd_ness(cfg, out) == kOk);
  std::ifstream in(path);
  const json dump = json::parse(in);
  CHECK(dump.contains("state"));
  CHECK(dump["state"]["bondDims"].size() == 7);
  CHECK(dump["state"]["peakBond"].is_number());
  std::filesystem::remove(path);
  CHECK_THROWS_AS(cmd_sweep_size(cfg, out), UsageError);
}
