// Spawns the installed command-line binary and checks its contract:
// artifact files, exit codes for config errors and divergence.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "remote_track/config.hpp"
#include "remote_track/vanderpol.hpp"

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(RT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

// Scenario 2 with a short horizon so the CLI tests stay quick.
std::string short_config_text() {
  rtrack::ScenarioConfig cfg = rtrack::parse_config(rtrack::kScenario2Config);
  cfg.t_end = 5.0;
  cfg.t_tail = 4.0;
  cfg.expansion_pairs = 200;
  return rtrack::serialize_config(cfg);
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("run produces the three artifacts and exits 0") {
  TempDir dir("rt_cli_run");
  const fs::path cfg = dir.path / "short.cfg";
  std::ofstream(cfg) << short_config_text();
  CHECK(run_cli("run --config " + cfg.string() + " --out " +
                dir.path.string()) == 0);
  CHECK(fs::exists(dir.path / "run_trajectory.csv"));
  CHECK(fs::exists(dir.path / "run_frames.log"));
  CHECK(fs::exists(dir.path / "run_metrics.csv"));

  std::ifstream frames(dir.path / "run_frames.log");
  std::string first;
  std::getline(frames, first);
  CHECK(first.rfind("k=0 bits=", 0) == 0);
}

TEST_CASE("config errors exit with status 1") {
  TempDir dir("rt_cli_cfg");
  const fs::path cfg = dir.path / "bad.cfg";
  std::ofstream(cfg) << short_config_text() << "\n[channel]\nbogus = 1\n";
  CHECK(run_cli("run --config " + cfg.string() + " --out " +
                dir.path.string()) == 1);
  CHECK(run_cli("run --config " + (dir.path / "missing.cfg").string()) == 1);
}

TEST_CASE("divergence exits with status 2") {
  TempDir dir("rt_cli_div");
  rtrack::ScenarioConfig cfg = rtrack::parse_config(rtrack::kScenario2Config);
  cfg.t_end = 5.0;
  cfg.expansion_pairs = 200;
  cfg.state_ceiling = 1.0;  // y(0) = 5 trips the ceiling immediately
  const fs::path path = dir.path / "diverge.cfg";
  std::ofstream(path) << rtrack::serialize_config(cfg);
  CHECK(run_cli("run --config " + path.string() + " --out " +
                dir.path.string()) == 2);
}

TEST_CASE("sweep writes one deterministic row per grid point") {
  TempDir dir("rt_cli_sweep");
  const fs::path cfg = dir.path / "short.cfg";
  std::ofstream(cfg) << short_config_text();
  CHECK(run_cli("sweep --config " + cfg.string() + " --out " +
                dir.path.string() + " --grid k=4,8 --grid T=0.5") == 0);
  std::ifstream sweep(dir.path / "sweep.csv");
  REQUIRE(sweep.good());
  std::string line;
  std::getline(sweep, line);  // header
  std::getline(sweep, line);
  CHECK(line.rfind("\"k=4 T=0.5\",ok", 0) == 0);
  std::getline(sweep, line);
  CHECK(line.rfind("\"k=8 T=0.5\",ok", 0) == 0);
}
