#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "windingkit/config.hpp"

namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args) {
  std::string cmd = std::string(WINDINGKIT_BIN) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  if (status < 0) return -1;
#ifdef WEXITSTATUS
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
#else
  return status;
#endif
}

std::string config(const std::string& name) {
  return std::string(WINDINGKIT_CONFIG_DIR) + "/" + name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("solenoid-check command") {
  fs::path out = fs::path("cli_out") / "solenoid";
  fs::remove_all(out);
  int rc = run_cli("solenoid-check --config " + config("solenoid_small.json") + " --out " +
                   out.string());
  CHECK(rc == 0);
  std::string csv = slurp(out / "solenoid_check.csv");
  CHECK(csv.rfind("n_theta,n_phi,interior_max_rel_err,exterior_leak_rel,zero_current_max\n", 0) ==
        0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);  // header + two refinements
  CHECK(fs::exists(out / "manifest.json"));
  std::string manifest = slurp(out / "manifest.json");
  CHECK(manifest.find("\"tool\"") != std::string::npos);
  CHECK(manifest.find("\"config\"") != std::string::npos);
}

TEST_CASE("sweep command emits the pinned CSV schema and is bit-reproducible") {
  fs::path out1 = fs::path("cli_out") / "sweep1";
  fs::path out2 = fs::path("cli_out") / "sweep2";
  fs::remove_all(out1);
  fs::remove_all(out2);
  std::string base = "sweep --config " + config("sweep_small.json") + " --seed 42 --out ";
  CHECK(run_cli(base + out1.string()) == 0);
  CHECK(run_cli(base + out2.string()) == 0);

  std::string csv1 = slurp(out1 / "sweep.csv");
  std::string csv2 = slurp(out2 / "sweep.csv");
  CHECK(csv1 == csv2);
  CHECK(csv1.rfind("lambda,objective,residual_l2_sq,current_l2_sq,bound_ratio,c0_error,c1_error\n",
                   0) == 0);

  // every bound_ratio stays within the paper bound
  std::istringstream lines(csv1);
  std::string line;
  std::getline(lines, line);  // header
  int rows = 0;
  while (std::getline(lines, line)) {
    rows++;
    std::istringstream cells(line);
    std::string cell;
    for (int c = 0; c < 5; c++) std::getline(cells, cell, ',');
    CHECK(std::stod(cell) <= 1.0 + 1e-10);
  }
  CHECK(rows == 10);
}

TEST_CASE("kernel command emits the pinned JSON keys") {
  fs::path out = fs::path("cli_out") / "kernel";
  fs::remove_all(out);
  int rc = run_cli("kernel --config " + config("kernel_small.json") + " --out " + out.string());
  CHECK(rc == 0);
  std::string js = slurp(out / "kernel.json");
  for (const char* key : {"pairing_value", "kernel_residual", "iterations",
                          "fp_residual_history", "svd_spectrum"})
    CHECK(js.find(std::string("\"") + key + "\"") != std::string::npos);
}

TEST_CASE("density command writes both sweeps and the contrast summary") {
  fs::path out = fs::path("cli_out") / "density";
  fs::remove_all(out);
  int rc = run_cli("density --config " + config("density_small.json") + " --out " + out.string());
  CHECK(rc == 0);
  CHECK(fs::exists(out / "sweep_case_a.csv"));
  CHECK(fs::exists(out / "sweep_case_b.csv"));
  std::string js = slurp(out / "density_summary.json");
  CHECK(js.find("residual_ratio_a_over_b") != std::string::npos);

  auto value_of = [&](const std::string& key) {
    auto pos = js.find("\"" + key + "\"");
    REQUIRE(pos != std::string::npos);
    pos = js.find(':', pos);
    return std::stod(js.substr(pos + 1));
  };
  CHECK(value_of("residual_rel_b") < 1e-3);
  CHECK(value_of("residual_ratio_a_over_b") > 10.0);
  CHECK(value_of("current_ratio_a_over_b") > 10.0);
}

TEST_CASE("containment margin validation") {
  wk::ExperimentConfig cfg;
  cfg.grid = {32, 32};
  cfg.cws.major_radius = 3;
  cfg.cws.minor_radius = 1;

  wk::TorusSurface fat;    // leaves no margin at all
  fat.major_radius = 3;
  fat.minor_radius = 0.95;
  CHECK_THROWS_AS(cfg.validate_containment(fat), std::invalid_argument);

  wk::TorusSurface fine;
  fine.major_radius = 3;
  fine.minor_radius = 0.2;
  CHECK_NOTHROW(cfg.validate_containment(fine));

  wk::TorusSurface outside;  // pushed through the wall
  outside.major_radius = 3;
  outside.minor_radius = 0.2;
  outside.pose.translation = {1.2, 0, 0};
  CHECK_THROWS_AS(cfg.validate_containment(outside), std::invalid_argument);
}

TEST_CASE("config serialization round-trips through JSON") {
  wk::ExperimentConfig cfg = wk::load_config(config("density_small.json"));
  std::string dumped = wk::config_to_json(cfg);
  CHECK(dumped.find("plasma_case_a") != std::string::npos);
  CHECK(dumped.find("rotation_rows") != std::string::npos);
}

TEST_CASE("usage and config errors exit with code 1") {
  CHECK(run_cli("sweep --config /nonexistent.json --out cli_out/none") == 1);
  CHECK(run_cli("kernel --config " + config("broken.json") + " --out cli_out/none") == 1);
  // sweep without plasma geometry
  CHECK(run_cli("sweep --config " + config("kernel_small.json") + " --out cli_out/none") == 1);
}
