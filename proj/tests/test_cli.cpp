#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "lamsa/dispatch.hpp"

namespace fs = std::filesystem;

namespace {

int run_count = 0;

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() /
                       ("lamsa_cli_" + tag + "_" + std::to_string(++run_count) + "_" +
                        std::to_string(::getpid()));
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("validate reports the shipped design feasible") {
  const fs::path out = fresh_dir("validate");
  CHECK(lamsa::dispatch({"validate", "--out", out.string()}) == 0);
  const std::string report = slurp(out / "feasibility.json");
  CHECK(report.find("\"feasible\": true") != std::string::npos);
  CHECK(report.find("violated_constraints") != std::string::npos);
  fs::remove_all(out);
}

TEST_CASE("validate exits 4 on an infeasible design") {
  const fs::path cfg = fresh_dir("cfg") / "bad.ini";
  write_file(cfg, "[beam]\nlength_mm = 50\n");  // outside (37.5, 43.4...] band? stays in bounds
  // 50 < 51.43 so still feasible; push past the Eq. 2 cap instead
  write_file(cfg, "[beam]\nlength_mm = 52\n");
  const fs::path out = fresh_dir("validate4");
  CHECK(lamsa::dispatch({"validate", "--config", cfg.string(), "--out", out.string()}) == 4);
  fs::remove_all(out);
  fs::remove_all(cfg.parent_path());
}

TEST_CASE("config errors exit 2, simulation failures exit 3") {
  const fs::path cfg = fresh_dir("cfg2") / "typo.ini";
  write_file(cfg, "[beam]\nlength = 40\n");
  CHECK(lamsa::dispatch({"validate", "--config", cfg.string(), "--out",
                         fresh_dir("e2").string()}) == 2);

  const fs::path nofire = fresh_dir("cfg3") / "nofire.ini";
  write_file(nofire, "[geometry]\nlatch_fraction = 1.0\n");
  CHECK(lamsa::dispatch({"simulate", "--cycles", "1", "--config", nofire.string(), "--out",
                         fresh_dir("e3").string()}) == 3);

  CHECK(lamsa::dispatch({"frobnicate"}) == 2);
  fs::remove_all(cfg.parent_path());
  fs::remove_all(nofire.parent_path());
}

TEST_CASE("an existing output directory is never overwritten") {
  const fs::path out = fresh_dir("noclobber");
  fs::create_directories(out);
  CHECK(lamsa::dispatch({"validate", "--out", out.string()}) == 2);
  fs::remove_all(out);
}

TEST_CASE("identical config and seed give byte-identical outputs") {
  const fs::path out1 = fresh_dir("det1"), out2 = fresh_dir("det2");
  REQUIRE(lamsa::dispatch({"simulate", "--cycles", "2", "--seed", "7", "--out",
                           out1.string()}) == 0);
  REQUIRE(lamsa::dispatch({"simulate", "--cycles", "2", "--seed", "7", "--out",
                           out2.string()}) == 0);
  for (const char* name : {"cycle_trace.csv", "cycle_summary.json", "trajectory.csv",
                           "per_cycle.json", "config_echo.ini"}) {
    CHECK(slurp(out1 / name) == slurp(out2 / name));
    CHECK(!slurp(out1 / name).empty());
  }
  // header stamp carries the tool version and config hash
  const std::string head = slurp(out1 / "cycle_trace.csv").substr(0, 200);
  CHECK(head.find("tool_version=") != std::string::npos);
  CHECK(head.find("config_hash=") != std::string::npos);
  fs::remove_all(out1);
  fs::remove_all(out2);
}

TEST_CASE("sweep writes one row per area and jobs do not change results") {
  const fs::path out1 = fresh_dir("sw1"), out2 = fresh_dir("sw2");
  REQUIRE(lamsa::dispatch({"sweep", "--areas", "1000:4500:500", "--jobs", "1", "--out",
                           out1.string()}) == 0);
  REQUIRE(lamsa::dispatch({"sweep", "--areas", "1000:4500:500", "--jobs", "4", "--out",
                           out2.string()}) == 0);
  const std::string csv1 = slurp(out1 / "sweep.csv");
  CHECK(csv1 == slurp(out2 / "sweep.csv"));
  // 2 header lines + 1 column line + 8 rows
  int lines = 0;
  for (char c : csv1) lines += c == '\n';
  CHECK(lines == 11);
  fs::remove_all(out1);
  fs::remove_all(out2);
}

TEST_CASE("steer runs a script file end to end") {
  const fs::path script = fresh_dir("script") / "demo.txt";
  write_file(script, "0 0 12\n0 2 12\n0.8 0 12\n0.8 2 -12\n");
  const fs::path out = fresh_dir("steer");
  CHECK(lamsa::dispatch({"steer", "--script", script.string(), "--out", out.string()}) == 0);
  CHECK(!slurp(out / "trajectory.csv").empty());
  fs::remove_all(out);
  fs::remove_all(script.parent_path());
}

TEST_CASE("optimize subcommand reports both searches") {
  const fs::path out = fresh_dir("optlen");
  CHECK(lamsa::dispatch({"optimize", "--what", "beam-length", "--out", out.string()}) == 0);
  const std::string report = slurp(out / "beam_length.json");
  CHECK(report.find("\"best_length_mm\": 40.0") != std::string::npos);
  fs::remove_all(out);
}
