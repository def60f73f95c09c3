// Drives the installed-style CLI binary end to end: exit codes, artifact
// schemas, and byte-identical reruns.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

namespace fs = std::filesystem;

const char* cli_path() { return JAMSIM_CLI_PATH; }

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("jamsim_cli_" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string str() const { return path.string(); }
};

int run(const std::string& args) {
  const std::string cmd =
      std::string(cli_path()) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double json_number(const std::string& text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\":");
  REQUIRE(pos != std::string::npos);
  const auto start = text.find(':', pos) + 1;
  return std::stod(text.substr(start));
}

}  // namespace

TEST_CASE("invalid input exits with code 2") {
  CHECK(run("simulate --N 0 --c 1 --runs 1 --seed 1") == 2);
  CHECK(run("simulate --N 100 --c 1 --runs 10") == 2);  // seed is mandatory
  CHECK(run("simulate --N 100 --c 200 --runs 1 --seed 1") == 2);
  CHECK(run("bogus-subcommand") == 2);
  CHECK(run("validate --preset not-a-preset --seed 1") == 2);
  CHECK(run("") == 2);  // a subcommand is required
  CHECK(run("--help") == 0);
}

TEST_CASE("fluid artifacts carry the hitting time") {
  TempDir dir;
  CHECK(run("fluid --c 1 --dt 1e-3 --output-dir " + dir.str()) == 0);
  const std::string json = slurp(dir.path / "fluid.json");
  const double t_star = json_number(json, "T_star");
  CHECK(t_star == doctest::Approx(0.69314718055994531).epsilon(1e-6));
  const std::string csv = slurp(dir.path / "fluid.csv");
  CHECK(csv.substr(0, 4) == "t,z\n");
  CHECK(csv.find("\r") == std::string::npos);
}

TEST_CASE("diffusion artifacts carry sigma_sq") {
  TempDir dir;
  CHECK(run("diffusion --N 1000 --c 2 --output-dir " + dir.str()) == 0);
  const std::string json = slurp(dir.path / "diffusion.json");
  CHECK(json_number(json, "sigma_sq") ==
        doctest::Approx(1.0 / 9.0).epsilon(1e-7));
  const std::string csv = slurp(dir.path / "diffusion.csv");
  CHECK(csv.substr(0, 9) == "t,beta,m\n");
}

TEST_CASE("simulate batch: summary schema and trajectory dump") {
  TempDir dir;
  CHECK(run("simulate --N 500 --c 1 --runs 50 --seed 7 --dump-trajectories 2 "
            "--output-dir " +
            dir.str()) == 0);
  const std::string json = slurp(dir.path / "summary.json");
  CHECK(json_number(json, "runs") == 50);
  CHECK(json_number(json, "N") == 500);
  const double mean = json_number(json, "mean_hitting_fraction");
  CHECK(mean > 0.5);
  CHECK(mean < 0.9);
  CHECK(fs::exists(dir.path / "trajectory_0.csv"));
  CHECK(fs::exists(dir.path / "trajectory_1.csv"));
  const std::string csv = slurp(dir.path / "trajectory_0.csv");
  CHECK(csv.substr(0, 9) == "step,Z,M\n");
}

TEST_CASE("graph batch carries the source tag") {
  TempDir dir;
  CHECK(run("graph --N 200 --c 2 --runs 50 --seed 3 --output-dir " +
            dir.str()) == 0);
  const std::string json = slurp(dir.path / "graph_summary.json");
  CHECK(json.find("\"source\": \"graph\"") != std::string::npos);
}

TEST_CASE("byte-identical artifacts for identical config and seed") {
  TempDir a, b;
  const std::string args =
      "clt --N 2000 --c 1 --runs 300 --seed 99 --threads 2 --output-dir ";
  // Exit code reports the statistical verdict (0/1), never an input error;
  // the artifacts must be byte-identical either way.
  const int code_a = run(args + a.str());
  const int code_b = run(args + b.str());
  CHECK(code_a == code_b);
  CHECK(code_a < 2);
  CHECK(slurp(a.path / "clt_verdict.json") ==
        slurp(b.path / "clt_verdict.json"));
  CHECK(slurp(a.path / "clt_samples.csv") ==
        slurp(b.path / "clt_samples.csv"));
  // different thread count, same bytes
  TempDir c;
  CHECK(run("clt --N 2000 --c 1 --runs 300 --seed 99 --threads 1 "
            "--output-dir " +
            c.str()) == code_a);
  CHECK(slurp(a.path / "clt_samples.csv") ==
        slurp(c.path / "clt_samples.csv"));
}

TEST_CASE("config file + flag precedence") {
  TempDir dir;
  const fs::path cfg = dir.path / "exp.toml";
  {
    std::ofstream out(cfg);
    out << "[kernel]\ntype = \"er\"\nN = 400\nc = 1.0\n\n"
        << "[run]\nruns = 20\nseed = 5\n";
  }
  CHECK(run("simulate --config " + cfg.string() + " --output-dir " +
            dir.str()) == 0);
  const std::string json = slurp(dir.path / "summary.json");
  CHECK(json_number(json, "runs") == 20);
  CHECK(json_number(json, "seed") == 5);
  // flags override the config file
  CHECK(run("simulate --config " + cfg.string() + " --runs 8 --output-dir " +
            dir.str()) == 0);
  CHECK(json_number(slurp(dir.path / "summary.json"), "runs") == 8);
  // unknown config keys are rejected
  {
    std::ofstream out(cfg, std::ios::app);
    out << "surprise = 1\n";
  }
  CHECK(run("simulate --config " + cfg.string() + " --output-dir " +
            dir.str()) == 2);
}

TEST_CASE("bounds subcommand prints the budget") {
  TempDir dir;
  CHECK(run("bounds --N 10000 --c 1 --T 1 --output-dir " + dir.str()) == 0);
  const std::string json = slurp(dir.path / "budget.json");
  CHECK(json_number(json, "sup_dev_bound") ==
        doctest::Approx(0.077156448746028241).epsilon(1e-9));
  CHECK(json_number(json, "lp_bound") ==
        doctest::Approx(0.054637464752026809).epsilon(1e-9));
}

TEST_CASE("ctime subcommand produces fluid, variance and summary") {
  TempDir dir;
  CHECK(run("ctime --N 500 --c 1 --lambda 1 --runs 5 --seed 2 --tmax 2 "
            "--dump-trajectories 1 --output-dir " +
            dir.str()) == 0);
  CHECK(fs::exists(dir.path / "ctime_fluid.csv"));
  CHECK(fs::exists(dir.path / "ctime_variance.csv"));
  CHECK(fs::exists(dir.path / "ctime_trajectory_0.csv"));
  const std::string json = slurp(dir.path / "ctime_summary.json");
  CHECK(json_number(json, "lambda") == 1.0);
  const std::string csv = slurp(dir.path / "ctime_trajectory_0.csv");
  CHECK(csv.substr(0, 7) == "time,Z\n");
}

TEST_CASE("validate smoke preset passes and writes a report") {
  TempDir dir;
  CHECK(run("validate --preset smoke --output-dir " + dir.str()) == 0);
  const std::string json = slurp(dir.path / "validate.json");
  CHECK(json.find("\"pass\": true") != std::string::npos);
}

TEST_CASE("validate er-c1 preset passes") {
  TempDir dir;
  CHECK(run("validate --preset er-c1 --output-dir " + dir.str()) == 0);
}

TEST_CASE("environment variables stand in for flags") {
  TempDir dir;
  const std::string cmd = std::string("JAMSIM_SEED=5 ") + cli_path() +
                          " simulate --N 300 --c 1 --runs 10 --output-dir " +
                          dir.str() + " >/dev/null 2>&1";
  CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  CHECK(json_number(slurp(dir.path / "summary.json"), "seed") == 5);
}
