#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hdgmv/csv.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() / "hdgmv_cli_io";
  fs::create_directories(dir);
  const fs::path out = dir / ("out" + std::to_string(counter) + ".txt");
  const fs::path err = dir / ("err" + std::to_string(counter) + ".txt");
  ++counter;
  const std::string cmd = std::string(HDGMV_CLI_PATH) + " " + args + " > " + out.string() +
                          " 2> " + err.string();
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(raw);
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("limits subcommand emits the closed-form row") {
  const RunResult r = run_cli("limits --c 0.5 --lb 1.0");
  REQUIRE(r.exit_code == 0);
  // loss_traditional = 1, loss_fm = 5/9, loss_bps = 0.5.
  CHECK(r.out.find("0.5,1,") != std::string::npos);
  CHECK(r.out.find(",1,") != std::string::npos);
  CHECK(r.out.find("0.5555555555555556") != std::string::npos);
  std::istringstream lines(r.out);
  std::string comment, header, row;
  std::getline(lines, comment);
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK(comment.rfind("# config", 0) == 0);
  CHECK(header.rfind("c,l_b,alpha_fm,alpha_bps,loss_traditional", 0) == 0);
  // Full row: c, l_b, alpha_fm = 2/3, alpha_bps = 0.5, losses 1, 5/9, 0.5, 1,
  // then the three differences.
  CHECK(row.rfind("0.5,1,0.6666666666666666,0.5,1,0.5555555555555556,0.5,1,", 0) == 0);
}

TEST_CASE("unknown subcommand and missing config fail with exit 1") {
  CHECK(run_cli("frobnicate").exit_code == 1);
  const RunResult r = run_cli("simulate --config /nonexistent.json --seed 1");
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("nonexistent") != std::string::npos);
  // Seeds are mandatory.
  CHECK(run_cli("simulate --n 60 --c 0.5 --ctilde 0.5 --reps 3").exit_code == 1);
  CHECK(run_cli("gen-data --p 5 --t 30").exit_code == 1);
}

TEST_CASE("help lists flags with defaults") {
  for (const std::string sub : {"limits", "gen-data", "simulate", "verify-lemmas", "backtest"}) {
    const RunResult r = run_cli(sub + " --help");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("--") != std::string::npos);
  }
  CHECK(run_cli("simulate --help").out.find("--seed") != std::string::npos);
  const std::string bt_help = run_cli("backtest --help").out;
  CHECK(bt_help.find("--input") != std::string::npos);
  CHECK(bt_help.find("200") != std::string::npos);  // window defaults are shown
}

TEST_CASE("verify-lemmas smoke run") {
  const RunResult r = run_cli("verify-lemmas --p 40 --n 80 --m 80 --reps 20 --seed 5");
  REQUIRE(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j.contains("pass"));
  CHECK(j["case"]["p"] == 40);
  CHECK(j["tolerances"]["sandwich_rel"] == 0.05);
  CHECK(j["sandwich_raw"].contains("mc_mean"));
}

TEST_CASE("gen-data fixture loads losslessly and reruns identically") {
  const fs::path dir = temp_dir("hdgmv_cli_gen");
  const RunResult r =
      run_cli("gen-data --scenario t5 --p 5 --t 40 --seed 99 --out " + dir.string());
  REQUIRE(r.exit_code == 0);

  const hdgmv::ReturnsDataset ds = hdgmv::load_returns_csv((dir / "returns.csv").string());
  CHECK(ds.asset_count() == 5);
  CHECK(ds.length() == 40);

  const nlohmann::json params = nlohmann::json::parse(slurp(dir / "params.json"));
  CHECK(params["config"]["master_seed"] == 99);
  CHECK(params["mu"].size() == 5);
  CHECK(params["sigma"].size() == 5);

  const std::string first = slurp(dir / "returns.csv");
  const fs::path dir2 = temp_dir("hdgmv_cli_gen2");
  run_cli("gen-data --scenario t5 --p 5 --t 40 --seed 99 --out " + dir2.string());
  CHECK(slurp(dir2 / "returns.csv") == first);
}

TEST_CASE("simulate writes provenance-stamped outputs deterministically") {
  const fs::path dir = temp_dir("hdgmv_cli_sim");
  const std::string base =
      "simulate --scenario t5 --n 60 --c 0.5 --ctilde 0.5 --reps 4 --seed 7 --threads 1 --out ";
  REQUIRE(run_cli(base + dir.string()).exit_code == 0);
  const std::string cells = slurp(dir / "cells.csv");
  CHECK(cells.rfind("# config", 0) == 0);
  CHECK(cells.find("\"master_seed\":7") != std::string::npos);

  const nlohmann::json report = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(report["config"]["repetitions"] == 4);
  REQUIRE(report["cells"].size() == 1);
  CHECK(report["cells"][0]["status"] == "ok");

  // Rerun from the embedded config reproduces the CSV byte for byte.
  const fs::path cfg_path = dir / "rerun_config.json";
  {
    std::ofstream cfg(cfg_path);
    cfg << report["config"].dump();
  }
  const fs::path dir2 = temp_dir("hdgmv_cli_sim2");
  REQUIRE(run_cli("simulate --config " + cfg_path.string() + " --threads 2 --out " +
                  dir2.string())
              .exit_code == 0);
  CHECK(slurp(dir2 / "cells.csv") == cells);
}

TEST_CASE("backtest subcommand end to end") {
  const fs::path gen_dir = temp_dir("hdgmv_cli_bt_data");
  REQUIRE(run_cli("gen-data --scenario t5 --p 6 --t 120 --seed 11 --out " + gen_dir.string())
              .exit_code == 0);
  const std::string input = (gen_dir / "returns.csv").string();

  const fs::path out1 = temp_dir("hdgmv_cli_bt1");
  const std::string args = "backtest --input " + input +
                           " --n 30 --m 20 --step 10 --assets 4 --seed 3 --out ";
  REQUIRE(run_cli(args + out1.string()).exit_code == 0);
  const std::string csv1 = slurp(out1 / "backtest.csv");
  CHECK(csv1.rfind("# config", 0) == 0);
  CHECK(csv1.find("date_end,strategy,emp_oos_variance,emp_oos_relative_loss") !=
        std::string::npos);

  const fs::path out2 = temp_dir("hdgmv_cli_bt2");
  REQUIRE(run_cli(args + out2.string()).exit_code == 0);
  CHECK(slurp(out2 / "backtest.csv") == csv1);

  const nlohmann::json summary = nlohmann::json::parse(slurp(out1 / "summary.json"));
  CHECK(summary["strategies"].contains("bps"));

  // Subset selection without a seed is a usage error.
  CHECK(run_cli("backtest --input " + input + " --n 30 --m 20 --assets 4").exit_code == 1);
  // Malformed input is a validation error.
  const fs::path bad = fs::temp_directory_path() / "hdgmv_bad.csv";
  {
    std::ofstream f(bad);
    f << "date,A,B\n2021-01-01,0.1\n";
  }
  CHECK(run_cli("backtest --input " + bad.string()).exit_code == 1);
}
