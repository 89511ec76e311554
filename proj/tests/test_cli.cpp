#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <unistd.h>
#include <vector>

#include "cli.hpp"

using namespace nlsb::cli;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() /
             ("nlsb_cli_" + std::to_string(::getpid()) + "_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

ParseResult parse(std::vector<std::string> args) {
  args.insert(args.begin(), "nlsb");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return parse_config(static_cast<int>(argv.size()), argv.data());
}

std::set<std::string> files_in(const std::filesystem::path& dir) {
  std::set<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) out.insert(e.path().filename().string());
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_args(std::vector<std::string> args) {
  const auto p = parse(std::move(args));
  if (!p.config) return p.exit_code;
  return run(*p.config);
}

}  // namespace

TEST_CASE("flag parsing") {
  const auto ok = parse({"shoot", "--g", "1*s^3", "--N", "1", "--lambda", "1"});
  REQUIRE(ok.config.has_value());
  CHECK(ok.config->subcommand == "shoot");
  CHECK(ok.config->dimension == 1);
  CHECK(*ok.config->lambda == 1.0);

  const auto neg = parse({"shoot", "--g", "1*s^3", "--N", "1", "--lambda", "-1"});
  CHECK_FALSE(neg.config.has_value());
  CHECK(neg.exit_code == 1);
  CHECK(neg.message.find("no positive solutions exist for lambda <= 0") != std::string::npos);

  const auto a0 = parse({"normalize", "--g", "1*s^3", "--N", "1", "--a", "0"});
  CHECK_FALSE(a0.config.has_value());
  CHECK(a0.exit_code == 1);
  CHECK(a0.message.find("domain error") != std::string::npos);

  CHECK(parse({"shoot", "--frobnicate", "2"}).exit_code == 1);
  CHECK(parse({"shoot", "--g", "1*s^", "--N", "1", "--lambda", "1"}).exit_code == 1);
  CHECK(parse({"shoot", "--g", "1*s^3", "--N", "x", "--lambda", "1"}).exit_code == 1);
  const auto missing = parse({"shoot", "--g", "1*s^3"});
  CHECK(missing.message.find("N") != std::string::npos);
  CHECK(missing.message.find("lambda") != std::string::npos);
  CHECK(parse({}).exit_code == 1);
  CHECK(parse({"bogus"}).exit_code == 1);
}

TEST_CASE("config files, precedence and environment") {
  const auto dir = fresh_dir("config");
  const auto file = dir / "run.cfg";
  std::ofstream(file) << "# cubic on the line\ng = 1*s^3\nN = 1   # dimension\nlambda = 4\njobs = 2\n"
                      << "step_tolerance = 1e-12\n";
  auto p = parse({"shoot", "--config", file.string(), "--lambda", "9"});
  REQUIRE(p.config.has_value());
  CHECK(*p.config->lambda == 9.0);
  CHECK(p.config->jobs == 2);
  CHECK(p.config->overrides.at("step_tolerance") == 1e-12);

  std::ofstream(dir / "bad.cfg") << "g = 1*s^3\ncolour = blue\nflavour = 1\n";
  const auto bad = parse({"shoot", "--config", (dir / "bad.cfg").string()});
  CHECK(bad.exit_code == 1);
  CHECK(bad.message.find("colour") != std::string::npos);
  CHECK(bad.message.find("flavour") != std::string::npos);

  std::ofstream(dir / "broken.cfg") << "g 1*s^3\n";
  CHECK(parse({"shoot", "--config", (dir / "broken.cfg").string()}).exit_code == 1);

  const auto map = read_config_file(file.string());
  CHECK(map.at("N") == "1");

  ::setenv("NLSB_OUTPUT_DIR", (dir / "env").c_str(), 1);
  p = parse({"check", "--g", "1*s^3", "--N", "2"});
  ::unsetenv("NLSB_OUTPUT_DIR");
  REQUIRE(p.config.has_value());
  CHECK(p.config->output_dir == (dir / "env").string());
  CHECK(run(*p.config) == 0);
  CHECK(files_in(dir / "env") == std::set<std::string>{"report.json"});
}

TEST_CASE("exit codes and file sets") {
  const auto root = fresh_dir("runs");
  CHECK(run_args({"check", "--g", "1*s^5", "--N", "3", "--output", (root / "check").string()}) == 1);
  CHECK(files_in(root / "check") == std::set<std::string>{"report.json"});

  CHECK(run_args({"shoot", "--g", "1*s^3", "--N", "1", "--lambda", "1", "--output",
                  (root / "shoot").string()}) == 0);
  CHECK(files_in(root / "shoot") == std::set<std::string>{"profile_shoot.csv", "report.json"});

  CHECK(run_args({"ground-state", "--N", "2", "--p", "3", "--output", (root / "gs").string()}) == 0);
  CHECK(files_in(root / "gs") == std::set<std::string>{"profile_ground_state.csv", "report.json"});
  CHECK(run_args({"ground-state", "--N", "3", "--p", "5", "--output", (root / "gs2").string()}) == 1);

  CHECK(run_args({"branch", "--g", "1*s^3", "--N", "1", "--lambda-min", "0.1", "--lambda-max", "10",
                  "--points-per-decade", "3", "--output", (root / "branch").string()}) == 0);
  CHECK(files_in(root / "branch") == std::set<std::string>{"branch.csv", "report.json"});
  std::ifstream csv(root / "branch" / "branch.csv");
  int rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  CHECK(rows == 1 + 7);

  // A sweep where every shoot fails still leaves its outputs.
  CHECK(run_args({"branch", "--g", "1*s^3", "--N", "1", "--lambda-min", "0.1", "--lambda-max", "10",
                  "--points-per-decade", "1", "--launch-scale", "0.5", "--output",
                  (root / "degenerate").string()}) == 2);
  CHECK(files_in(root / "degenerate") == std::set<std::string>{"branch.csv", "report.json"});
  CHECK(slurp(root / "degenerate" / "branch.csv").find("failed") != std::string::npos);

  CHECK(run_args({"normalize", "--g", "1*s^3", "--N", "1", "--a", "8", "--lambda-min", "0.01",
                  "--lambda-max", "100", "--points-per-decade", "4", "--output",
                  (root / "normalize").string()}) == 0);
  CHECK(files_in(root / "normalize") == std::set<std::string>{"profile_root_0.csv", "report.json"});
}

TEST_CASE("repeated runs are byte-identical") {
  const auto root = fresh_dir("repeat");
  for (const char* name : {"a", "b"}) {
    REQUIRE(run_args({"normalize", "--g", "1*s^2 + 1*s^5", "--N", "2", "--a", "3", "--lambda-min",
                      "0.001", "--lambda-max", "1000", "--points-per-decade", "6", "--jobs", "2",
                      "--output", (root / name).string()}) == 0);
  }
  const auto files = files_in(root / "a");
  CHECK(files == std::set<std::string>{"profile_root_0.csv", "profile_root_1.csv", "report.json"});
  for (const auto& f : files) {
    CAPTURE(f);
    CHECK(slurp(root / "a" / f) == slurp(root / "b" / f));
  }
}
