#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <stdexcept>

#include "nlsb/nlsb.h"

namespace nlsb::cli {

namespace {

const std::vector<std::pair<std::string, std::string>> kSubcommands = {
    {"check", "hypotheses and case label for g in dimension N"},
    {"shoot", "decaying solution at one frequency"},
    {"branch", "mass curve over a frequency range"},
    {"ground-state", "ground state of mu s^p at frequency 1"},
    {"normalize", "all frequencies whose solution has mass a"},
    {"verify", "acceptance suite"},
};

const std::vector<std::string> kOverrideKeys = {
    "step_tolerance", "max_scaled_radius", "amplitude_tolerance", "decay_threshold",
    "cone_width",     "divergence_threshold", "node_spacing",     "launch_scale"};

struct Key {
  std::string name;
  std::string help;
  std::string type = "REAL";
};

const std::vector<Key> kKeys = {
    {"g", "nonlinearity, e.g. \"1*s^2 + 1*s^5\"", "SPEC"},
    {"N", "space dimension", "INT"},
    {"lambda", "frequency for shoot"},
    {"lambda_min", "lower end of the sweep"},
    {"lambda_max", "upper end of the sweep"},
    {"points_per_decade", "sweep density", "INT"},
    {"a", "prescribed mass for normalize"},
    {"p", "exponent for ground-state"},
    {"mu", "coefficient for ground-state"},
    {"output", "output directory (default $NLSB_OUTPUT_DIR or .)", "DIR"},
    {"jobs", "worker threads", "INT"},
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string flag_name(const std::string& key) {
  std::string f = key;
  for (auto& c : f) {
    if (c == '_') c = '-';
  }
  return "--" + f;
}

double to_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || trim(text.substr(used)) != "") {
    throw std::invalid_argument(key + ": not a number: '" + text + "'");
  }
  return v;
}

int to_int(const std::string& key, const std::string& text) {
  const double v = to_double(key, text);
  if (v != static_cast<int>(v)) throw std::invalid_argument(key + ": not an integer: '" + text + "'");
  return static_cast<int>(v);
}

struct DomainFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool needs(const std::string& sub, const std::string& key) {
  static const std::map<std::string, std::vector<std::string>> required = {
      {"check", {"g", "N"}},
      {"shoot", {"g", "N", "lambda"}},
      {"branch", {"g", "N"}},
      {"ground-state", {"N", "p"}},
      {"normalize", {"g", "N", "a"}},
      {"verify", {}},
  };
  const auto& keys = required.at(sub);
  return std::find(keys.begin(), keys.end(), key) != keys.end();
}

RunConfig build_config(const std::string& sub, const std::map<std::string, std::string>& values) {
  RunConfig c;
  c.subcommand = sub;
  std::vector<std::string> missing;
  for (const auto& k : {"g", "N", "lambda", "a", "p"}) {
    if (needs(sub, k) && !values.count(k)) missing.push_back(k);
  }
  if (!missing.empty()) {
    std::string m = sub + ": missing required key(s):";
    for (const auto& k : missing) m += " " + k;
    throw std::invalid_argument(m);
  }
  for (const auto& [key, text] : values) {
    if (key == "g") c.g = text;
    else if (key == "N") c.dimension = to_int(key, text);
    else if (key == "lambda") c.lambda = to_double(key, text);
    else if (key == "lambda_min") c.lambda_min = to_double(key, text);
    else if (key == "lambda_max") c.lambda_max = to_double(key, text);
    else if (key == "points_per_decade") c.points_per_decade = to_int(key, text);
    else if (key == "a") c.a = to_double(key, text);
    else if (key == "p") c.exponent = to_double(key, text);
    else if (key == "mu") c.coefficient = to_double(key, text);
    else if (key == "output") c.output_dir = text;
    else if (key == "jobs") c.jobs = to_int(key, text);
    else c.overrides[key] = to_double(key, text);
  }

  if (values.count("N") && c.dimension < 1) throw DomainFailure("N must be >= 1");
  if (c.jobs < 1) throw std::invalid_argument("jobs must be >= 1");
  if (c.points_per_decade < 1) throw std::invalid_argument("points_per_decade must be >= 1");
  if (c.lambda && !(*c.lambda > 0.0)) {
    throw DomainFailure("no positive solutions exist for lambda <= 0");
  }
  if ((sub == "branch" || sub == "normalize") && !(c.lambda_min > 0.0)) {
    throw DomainFailure("no positive solutions exist for lambda <= 0");
  }
  if (!(c.lambda_max > c.lambda_min)) throw DomainFailure("lambda_max must exceed lambda_min");
  if (c.a && !(*c.a > 0.0)) throw DomainFailure("a must be positive");
  if (!c.g.empty()) {
    nlsb_spec* spec = nullptr;
    const auto st = nlsb_spec_parse(c.g.c_str(), &spec);
    nlsb_spec_free(spec);
    if (st != NLSB_OK) throw DomainFailure(std::string("g: ") + nlsb_last_error());
  }
  if (c.output_dir.empty()) {
    const char* env = std::getenv("NLSB_OUTPUT_DIR");
    c.output_dir = env && *env ? env : ".";
  }
  return c;
}

}  // namespace

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::map<std::string, std::string> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(number) + ": expected key = value");
    }
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    out[trim(line.substr(0, eq))] = value;
  }
  return out;
}

ParseResult parse_config(int argc, const char* const* argv) {
  CLI::App app{"Positive radial solutions of -div grad u + lambda u = g(u) and their mass"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "key = value file; flags take precedence")
      ->check(CLI::ExistingFile);

  std::map<std::string, std::string> flags;
  std::map<std::string, CLI::Option*> options;
  auto add_key = [&](const std::string& key, const std::string& help, const std::string& type) {
    options[key] = app.add_option(flag_name(key), flags[key], help)->type_name(type);
  };
  for (const auto& k : kKeys) add_key(k.name, k.help, k.type);
  for (const auto& k : kOverrideKeys) add_key(k, "shooting tolerance override", "REAL");

  for (const auto& [name, help] : kSubcommands) app.add_subcommand(name, help)->fallthrough();

  ParseResult result;
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    result.message = app.help();
    return result;
  } catch (const CLI::ParseError& e) {
    result.exit_code = 1;
    result.message = std::string("usage error: ") + e.what();
    return result;
  }
  const std::string sub = app.get_subcommands().front()->get_name();

  std::map<std::string, std::string> values;
  if (!config_path.empty()) {
    try {
      values = read_config_file(config_path);
    } catch (const std::exception& e) {
      result.exit_code = 1;
      result.message = std::string("usage error: ") + e.what();
      return result;
    }
    std::string unknown;
    for (const auto& [key, value] : values) {
      if (!options.count(key)) unknown += " " + key;
    }
    if (!unknown.empty()) {
      result.exit_code = 1;
      result.message = "usage error: unknown config key(s):" + unknown;
      return result;
    }
  }
  for (const auto& [key, option] : options) {
    if (option->count() > 0) values[key] = flags[key];
  }

  try {
    result.config = build_config(sub, values);
  } catch (const DomainFailure& e) {
    result.exit_code = 1;
    result.message = std::string("domain error: ") + e.what();
  } catch (const std::exception& e) {
    result.exit_code = 1;
    result.message = std::string("usage error: ") + e.what();
  }
  return result;
}

namespace {

int report(nlsb_status status) {
  if (status != NLSB_OK) {
    std::fprintf(stderr, "%s: %s\n", nlsb_status_string(status), nlsb_last_error());
  }
  return nlsb_exit_code(status);
}

nlsb_controls controls_of(const RunConfig& c) {
  nlsb_controls k;
  nlsb_controls_default(&k);
  const std::map<std::string, double*> slots = {
      {"step_tolerance", &k.step_tolerance},
      {"max_scaled_radius", &k.max_scaled_radius},
      {"amplitude_tolerance", &k.amplitude_tolerance},
      {"decay_threshold", &k.decay_threshold},
      {"cone_width", &k.cone_width},
      {"divergence_threshold", &k.divergence_threshold},
      {"node_spacing", &k.node_spacing},
      {"launch_scale", &k.launch_scale},
  };
  for (const auto& [key, value] : c.overrides) *slots.at(key) = value;
  return k;
}

nlsb_sweep_options sweep_of(const RunConfig& c) {
  nlsb_sweep_options o;
  nlsb_sweep_options_default(&o);
  o.lambda_min = c.lambda_min;
  o.lambda_max = c.lambda_max;
  o.points_per_decade = c.points_per_decade;
  o.jobs = c.jobs;
  o.controls = controls_of(c);
  return o;
}

std::string join(const std::filesystem::path& dir, const char* name) {
  return (dir / name).string();
}

int run_check(const RunConfig& c, nlsb_spec* spec, const std::filesystem::path& dir) {
  if (int rc = report(nlsb_write_check_report(spec, c.dimension, join(dir, "report.json").c_str()))) {
    return rc;
  }
  nlsb_hypotheses h;
  if (int rc = report(nlsb_check_hypotheses(spec, c.dimension, &h))) return rc;
  const char* label = nullptr;
  const auto st = nlsb_classify_case(spec, c.dimension, &label);
  std::printf("%s, N = %d\n", nlsb_spec_string(spec), c.dimension);
  std::printf("alpha = %.17g, beta = %.17g, 2* = %.17g\n", h.exponents.alpha, h.exponents.beta,
              h.sobolev_exponent);
  std::printf("G3: %s\n", h.g3_status);
  if (st != NLSB_OK) return report(st);
  std::printf("case %s\n", label);
  return 0;
}

int run_shoot(const RunConfig& c, nlsb_spec* spec, const std::filesystem::path& dir) {
  const auto k = controls_of(c);
  nlsb_profile* p = nullptr;
  if (int rc = report(nlsb_shoot(spec, c.dimension, *c.lambda, &k, &p))) return rc;
  nlsb_status st = nlsb_write_profile_csv(p, join(dir, "profile_shoot.csv").c_str());
  if (st == NLSB_OK) st = nlsb_write_shoot_report(p, join(dir, "report.json").c_str());
  if (st == NLSB_OK) {
    std::printf("u(0) = %.17g, %zu nodes, residual %.3g\n", nlsb_profile_amplitude(p),
                nlsb_profile_size(p), nlsb_profile_residual(p));
  }
  nlsb_profile_free(p);
  return report(st);
}

int run_ground_state(const RunConfig& c, const std::filesystem::path& dir) {
  const auto k = controls_of(c);
  nlsb_ground_state* s = nullptr;
  if (int rc = report(nlsb_ground_state_compute(c.dimension, *c.exponent, c.coefficient, &k, &s))) {
    return rc;
  }
  nlsb_status st =
      nlsb_write_profile_csv(nlsb_ground_state_profile(s), join(dir, "profile_ground_state.csv").c_str());
  if (st == NLSB_OK) st = nlsb_write_ground_state_report(s, join(dir, "report.json").c_str());
  if (st == NLSB_OK) {
    std::printf("u0 = %.17g, mass = %.17g\n", nlsb_ground_state_central_value(s),
                nlsb_ground_state_mass(s));
  }
  nlsb_ground_state_free(s);
  return report(st);
}

int run_branch(const RunConfig& c, nlsb_spec* spec, const std::filesystem::path& dir) {
  const auto o = sweep_of(c);
  nlsb_curve* curve = nullptr;
  const nlsb_status sweep = nlsb_sweep(spec, c.dimension, &o, &curve);
  const std::string sweep_error = nlsb_last_error();
  if (!curve) return report(sweep);
  // A degenerate sweep still leaves its partial outputs behind.
  nlsb_status st = nlsb_write_branch_csv(curve, join(dir, "branch.csv").c_str());
  if (st == NLSB_OK) st = nlsb_write_branch_report(curve, join(dir, "report.json").c_str());
  if (st == NLSB_OK) std::printf("%zu grid points\n", nlsb_curve_size(curve));
  nlsb_curve_free(curve);
  if (sweep != NLSB_OK) {
    std::fprintf(stderr, "%s: %s\n", nlsb_status_string(sweep), sweep_error.c_str());
    return nlsb_exit_code(sweep);
  }
  return report(st);
}

int run_normalize(const RunConfig& c, nlsb_spec* spec, const std::filesystem::path& dir) {
  const auto o = sweep_of(c);
  nlsb_case_report* r = nullptr;
  if (int rc = report(nlsb_solve_normalized(spec, c.dimension, *c.a, &o, &r))) return rc;
  const nlsb_status st = nlsb_write_case_report(r, dir.string().c_str());
  if (st == NLSB_OK) {
    std::printf("case %s: %zu root(s), %s\n", nlsb_case_report_label(r),
                nlsb_case_report_root_count(r),
                nlsb_case_report_prediction_met(r) ? "PREDICTION-MET" : "PREDICTION-UNMET");
    for (std::size_t i = 0; i < nlsb_case_report_root_count(r); ++i) {
      nlsb_branch_point b;
      nlsb_case_report_root(r, i, &b);
      std::printf("  lambda = %.17g, mass = %.17g\n", b.lambda, b.mass);
    }
  }
  nlsb_case_report_free(r);
  return report(st);
}

void print_criterion(int id, const char* title, int passed, void*) {
  std::printf("criterion %2d %s  %s\n", id, passed ? "PASS" : "FAIL", title);
}

int run_verify(const RunConfig& c, const std::filesystem::path& dir) {
  int all = 0;
  if (int rc = report(nlsb_verify(dir.string().c_str(), c.jobs, print_criterion, nullptr, &all))) {
    return rc;
  }
  if (!all) {
    std::fprintf(stderr, "PREDICTION-UNMET: at least one criterion failed\n");
    return nlsb_exit_code(NLSB_PREDICTION_UNMET);
  }
  return 0;
}

}  // namespace

int run(const RunConfig& c) {
  const std::filesystem::path dir(c.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    std::fprintf(stderr, "cannot create %s: %s\n", dir.string().c_str(), ec.message().c_str());
    return nlsb_exit_code(NLSB_IO);
  }
  if (c.subcommand == "ground-state") return run_ground_state(c, dir);
  if (c.subcommand == "verify") return run_verify(c, dir);

  nlsb_spec* spec = nullptr;
  if (int rc = report(nlsb_spec_parse(c.g.c_str(), &spec))) return rc;
  int rc = 0;
  if (c.subcommand == "check") rc = run_check(c, spec, dir);
  else if (c.subcommand == "shoot") rc = run_shoot(c, spec, dir);
  else if (c.subcommand == "branch") rc = run_branch(c, spec, dir);
  else if (c.subcommand == "normalize") rc = run_normalize(c, spec, dir);
  nlsb_spec_free(spec);
  return rc;
}

}  // namespace nlsb::cli
