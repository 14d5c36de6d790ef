// bsreg command-line front end. Talks to the library only through bsreg.h.
#include <bsreg/bsreg.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

namespace {

enum ExitCode { kOk = 0, kInternal = 1, kUsage = 2, kData = 3, kNumerical = 4 };

struct Failure : std::runtime_error {
  int code;
  Failure(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

int exit_code_for(bsr_status st) {
  switch (st) {
    case BSR_OK: return kOk;
    case BSR_ERR_INVALID_ARGUMENT:
    case BSR_ERR_DOMAIN:
    case BSR_ERR_UNSUPPORTED: return kUsage;
    case BSR_ERR_DATA: return kData;
    case BSR_ERR_NUMERICAL: return kNumerical;
    case BSR_ERR_INTERNAL: break;
  }
  return kInternal;
}

void check(bsr_status st) {
  if (st != BSR_OK) throw Failure(exit_code_for(st), bsr_last_error());
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using DatasetPtr = std::unique_ptr<bsr_dataset, Deleter<bsr_dataset, bsr_dataset_free>>;
using FitPtr = std::unique_ptr<bsr_fit, Deleter<bsr_fit, bsr_fit_free>>;
using ReportPtr = std::unique_ptr<bsr_test_report, Deleter<bsr_test_report, bsr_report_free>>;
using SizePtr = std::unique_ptr<bsr_size_table, Deleter<bsr_size_table, bsr_size_table_free>>;
using CritPtr = std::unique_ptr<bsr_critical_values, Deleter<bsr_critical_values, bsr_critical_values_free>>;
using CurvePtr = std::unique_ptr<bsr_power_curve, Deleter<bsr_power_curve, bsr_power_curve_free>>;

// Takes ownership of a library string and prints it.
void emit(char* text) {
  std::fputs(text, stdout);
  std::size_t len = std::char_traits<char>::length(text);
  if (len == 0 || text[len - 1] != '\n') std::fputc('\n', stdout);
  bsr_string_free(text);
}

bsr_format parse_format(const std::string& s) {
  if (s == "json") return BSR_FORMAT_JSON;
  if (s == "csv") return BSR_FORMAT_CSV;
  if (s == "text") return BSR_FORMAT_TEXT;
  throw Failure(kUsage, "unknown output format '" + s + "'");
}

struct DataOptions {
  std::string path;
  std::string response = "y";
  std::vector<std::string> covariates;
  bool intercept = false;
  bool log_response = false;
};

void add_data_options(CLI::App* cmd, DataOptions& o, bool required) {
  auto* opt = cmd->add_option(required ? "csv" : "--data", o.path, "CSV file with a header row");
  opt->check(CLI::ExistingFile);
  if (required) opt->required();
  cmd->add_option("--response", o.response, "response column")->capture_default_str();
  cmd->add_option("--covariates", o.covariates, "covariate columns (default: all others)")->delimiter(',');
  cmd->add_flag("--intercept", o.intercept, "prepend a column of ones");
  cmd->add_flag("--log-response", o.log_response, "response holds raw lifetimes; model log T");
}

DatasetPtr load(const DataOptions& o) {
  std::vector<const char*> cov;
  for (const auto& c : o.covariates) cov.push_back(c.c_str());
  bsr_csv_schema schema{o.response.c_str(), cov.empty() ? nullptr : cov.data(), cov.size(), o.intercept ? 1 : 0,
                        o.log_response ? 1 : 0};
  bsr_dataset* raw = nullptr;
  check(bsr_dataset_load_csv(o.path.c_str(), &schema, &raw));
  return DatasetPtr(raw);
}

std::vector<size_t> resolve_columns(const bsr_dataset* data, const std::vector<std::string>& names) {
  std::vector<size_t> idx;
  for (const auto& name : names) {
    size_t j = 0;
    if (bsr_dataset_find_column(data, name.c_str(), &j) != BSR_OK)
      throw Failure(kData, "unknown column '" + name + "'");
    idx.push_back(j);
  }
  return idx;
}

// Simulation designs name their columns x1..xp.
std::vector<size_t> simulation_columns(const std::vector<std::string>& names, size_t p) {
  std::vector<size_t> idx;
  for (const auto& name : names) {
    size_t j = 0;
    try {
      if (name.size() < 2 || name[0] != 'x') throw std::invalid_argument(name);
      j = std::stoul(name.substr(1));
    } catch (const std::exception&) {
      throw Failure(kUsage, "simulation columns are named x1..xp, got '" + name + "'");
    }
    if (j < 1 || j > p) throw Failure(kUsage, "column '" + name + "' outside x1..x" + std::to_string(p));
    idx.push_back(j - 1);
  }
  return idx;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure(kData, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Accepts the JSON or CSV produced by `simulate --mode critical-values`.
std::array<double, 4> read_critical_values(const std::string& path) {
  const std::string text = slurp(path);
  std::array<double, 4> out{};
  const char* symbols[4] = {"S1", "S2", "S3", "S4"};
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      const auto j = nlohmann::json::parse(text);
      const auto& cv = j.at("critical_values");
      for (int s = 0; s < 4; ++s) out[s] = cv.at(symbols[s]).get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw Failure(kData, path + ": " + e.what());
    }
    return out;
  }
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (line.rfind("statistic,", 0) != 0) throw Failure(kData, path + ": not a critical-values file");
  int seen = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    if (cells.size() < 3) throw Failure(kData, path + ": short row '" + line + "'");
    for (int s = 0; s < 4; ++s) {
      if (cells[0] == symbols[s]) {
        out[s] = std::stod(cells[2]);
        seen |= 1 << s;
      }
    }
  }
  if (seen != 0xF) throw Failure(kData, path + ": missing statistics");
  return out;
}

void require_level(double level) {
  if (!(level > 0.0 && level < 1.0)) throw Failure(kUsage, "--level must lie in (0, 1)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Birnbaum-Saunders log-linear regression: fitting, tests, local power and simulation"};
  app.set_version_flag("--version", std::string(bsr_version()));
  app.require_subcommand(1);
  app.fallthrough();

  std::string output = "json";
  app.add_option("--output", output, "json, csv or text")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();

  // fit
  DataOptions fit_data;
  std::vector<std::string> fit_cols;
  std::vector<double> fit_values;
  std::optional<double> fit_alpha0;
  auto* fit = app.add_subcommand("fit", "maximum-likelihood fit, optionally under a restriction");
  add_data_options(fit, fit_data, true);
  fit->add_option("--test-cols", fit_cols, "coefficients held fixed")->delimiter(',');
  fit->add_option("--values", fit_values, "their fixed values")->delimiter(',');
  fit->add_option("--alpha0", fit_alpha0, "hold the shape fixed at this value");

  // test
  DataOptions test_data;
  std::vector<std::string> test_cols;
  std::vector<double> test_values;
  std::optional<double> test_alpha0;
  auto* test = app.add_subcommand("test", "likelihood ratio, Wald, score and gradient tests");
  add_data_options(test, test_data, true);
  auto* tc = test->add_option("--test-cols", test_cols, "tested coefficients")->delimiter(',');
  test->add_option("--values", test_values, "null values (default 0)")->delimiter(',')->needs(tc);
  auto* ta = test->add_option("--alpha0", test_alpha0, "null value of the shape parameter");
  tc->excludes(ta);

  // power
  std::string family = "alpha";
  std::vector<double> power_eps;
  double power_alpha = 0.5;
  double power_level = 0.05;
  int power_n = 50;
  int power_p = 3;
  std::uint64_t power_cov_seed = 1;
  std::vector<std::string> power_cols;
  DataOptions power_data;
  auto* power = app.add_subcommand("power", "local power under Pitman alternatives");
  power->add_option("--family", family, "alpha or beta")->check(CLI::IsMember({"alpha", "beta"}))->capture_default_str();
  power->add_option("--epsilon", power_eps, "distance from the null (one per tested column for beta)")
      ->delimiter(',')
      ->required();
  power->add_option("--alpha,--alpha0", power_alpha, "shape (null value for the alpha family)")->capture_default_str();
  power->add_option("--level", power_level, "nominal level")->capture_default_str();
  power->add_option("--n", power_n, "sample size")->capture_default_str();
  power->add_option("--p", power_p, "number of regression coefficients")->capture_default_str();
  power->add_option("--covariate-seed", power_cov_seed, "seed of the simulated design (beta family)")
      ->capture_default_str();
  power->add_option("--test-cols", power_cols, "tested coefficients (beta family)")->delimiter(',');
  add_data_options(power, power_data, false);

  // simulate
  std::string mode = "size";
  std::string sim_family = "beta";
  int sim_n = 25;
  int sim_p = 3;
  double sim_alpha = 0.5;
  std::optional<double> sim_alpha0;
  std::vector<std::string> sim_cols;
  std::vector<double> sim_values;
  std::vector<double> sim_levels{0.10, 0.05, 0.01};
  double sim_level = 0.05;
  long long sim_reps = 15000;
  long long crit_reps = 500000;
  std::uint64_t sim_seed = 20100101;
  std::uint64_t sim_cov_seed = 1;
  unsigned sim_threads = 1;
  std::vector<double> deltas{-2, -1.5, -1, -0.5, 0, 0.5, 1, 1.5, 2};
  std::string crit_file;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo size, critical-value and power studies");
  sim->add_option("--mode", mode, "size, power or critical-values")
      ->check(CLI::IsMember({"size", "power", "critical-values"}))
      ->capture_default_str();
  sim->add_option("--family", sim_family, "beta or alpha hypothesis")
      ->check(CLI::IsMember({"alpha", "beta"}))
      ->capture_default_str();
  sim->add_option("--n", sim_n, "sample size")->capture_default_str();
  sim->add_option("--p", sim_p, "number of regression coefficients (including the intercept)")->capture_default_str();
  sim->add_option("--alpha", sim_alpha, "true shape parameter")->capture_default_str();
  sim->add_option("--alpha0", sim_alpha0, "null shape for the alpha family (default --alpha)");
  sim->add_option("--test-cols", sim_cols, "tested coefficients x1..xp (default: the last two)")->delimiter(',');
  sim->add_option("--values", sim_values, "null values (default 0)")->delimiter(',');
  sim->add_option("--levels", sim_levels, "nominal levels for size studies")->delimiter(',');
  sim->add_option("--level", sim_level, "level for critical values and power")->capture_default_str();
  sim->add_option("--reps", sim_reps, "replications")->capture_default_str();
  sim->add_option("--crit-reps", crit_reps, "replications for critical-value estimation")->capture_default_str();
  sim->add_option("--seed", sim_seed, "master seed")->capture_default_str();
  sim->add_option("--covariate-seed", sim_cov_seed, "seed of the frozen design")->capture_default_str();
  sim->add_option("--threads", sim_threads, "worker threads (results do not depend on it)")->capture_default_str();
  sim->add_option("--deltas", deltas, "alternatives for power studies")->delimiter(',');
  sim->add_option("--critical-values", crit_file, "critical values from --mode critical-values")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    const bsr_format fmt = parse_format(output);

    if (*fit) {
      auto data = load(fit_data);
      std::vector<size_t> idx;
      bsr_restriction r{BSR_RESTRICT_NONE, nullptr, nullptr, 0, 0.0};
      if (!fit_cols.empty() && fit_alpha0) throw Failure(kUsage, "--test-cols and --alpha0 are exclusive");
      if (!fit_cols.empty()) {
        idx = resolve_columns(data.get(), fit_cols);
        if (fit_values.empty()) fit_values.assign(idx.size(), 0.0);
        if (fit_values.size() != idx.size()) throw Failure(kUsage, "--values needs one entry per --test-cols column");
        r = {BSR_RESTRICT_FIX_BETA, idx.data(), fit_values.data(), idx.size(), 0.0};
      } else if (fit_alpha0) {
        r.kind = BSR_RESTRICT_FIX_ALPHA;
        r.alpha0 = *fit_alpha0;
      }
      bsr_fit* raw = nullptr;
      check(bsr_fit_model(data.get(), &r, &raw));
      FitPtr f(raw);
      char* text = nullptr;
      check(bsr_fit_render(f.get(), fmt, &text));
      emit(text);
      return bsr_fit_converged(f.get()) ? kOk : kNumerical;
    }

    if (*test) {
      if (test_cols.empty() && !test_alpha0) throw Failure(kUsage, "give either --test-cols or --alpha0");
      auto data = load(test_data);
      bsr_test_report* raw = nullptr;
      if (test_alpha0) {
        check(bsr_test_alpha(data.get(), *test_alpha0, &raw));
      } else {
        const auto idx = resolve_columns(data.get(), test_cols);
        if (test_values.empty()) test_values.assign(idx.size(), 0.0);
        if (test_values.size() != idx.size()) throw Failure(kUsage, "--values needs one entry per --test-cols column");
        check(bsr_test_beta(data.get(), idx.data(), test_values.data(), idx.size(), &raw));
      }
      ReportPtr rep(raw);
      char* text = nullptr;
      check(bsr_report_render(rep.get(), fmt, &text));
      emit(text);
      return kOk;
    }

    if (*power) {
      require_level(power_level);
      char* text = nullptr;
      if (family == "alpha") {
        if (power_eps.size() != 1) throw Failure(kUsage, "--epsilon takes one value for the alpha family");
        bsr_alpha_spec spec{power_alpha, power_eps[0], power_n, power_p, power_level};
        check(bsr_alpha_local_power_render(&spec, fmt, &text));
      } else {
        std::vector<double> design;
        std::vector<size_t> idx;
        size_t n = 0, p = 0;
        if (!power_data.path.empty()) {
          auto data = load(power_data);
          n = bsr_dataset_rows(data.get());
          p = bsr_dataset_cols(data.get());
          design.resize(n * p);
          check(bsr_dataset_design(data.get(), design.data()));
          if (power_cols.empty()) throw Failure(kUsage, "--test-cols is required with a CSV design");
          idx = resolve_columns(data.get(), power_cols);
        } else {
          if (power_n <= power_p || power_p < 1) throw Failure(kUsage, "need n > p >= 1");
          n = static_cast<size_t>(power_n);
          p = static_cast<size_t>(power_p);
          design.resize(n * p);
          check(bsr_simulation_design(n, p, power_cov_seed, design.data()));
          idx = power_cols.empty() ? std::vector<size_t>{p - 1} : simulation_columns(power_cols, p);
        }
        if (power_eps.size() != idx.size()) throw Failure(kUsage, "--epsilon needs one entry per tested column");
        bsr_beta_spec spec{design.data(), n, p, idx.data(), power_eps.data(), idx.size(), power_alpha, power_level};
        check(bsr_beta_local_power_render(&spec, fmt, &text));
      }
      emit(text);
      return kOk;
    }

    if (*sim) {
      if (sim_reps <= 0 || crit_reps <= 0) throw Failure(kUsage, "--reps and --crit-reps must be positive");
      if (sim_n <= sim_p || sim_p < 1) throw Failure(kUsage, "need n > p >= 1");
      require_level(sim_level);
      const size_t p = static_cast<size_t>(sim_p);
      std::vector<size_t> idx;
      bsr_restriction h{BSR_RESTRICT_NONE, nullptr, nullptr, 0, 0.0};
      if (sim_family == "alpha") {
        h.kind = BSR_RESTRICT_FIX_ALPHA;
        h.alpha0 = sim_alpha0.value_or(sim_alpha);
      } else {
        if (sim_cols.empty()) {
          if (p < 3) throw Failure(kUsage, "default test of the last two coefficients needs p >= 3");
          idx = {p - 2, p - 1};
        } else {
          idx = simulation_columns(sim_cols, p);
        }
        if (sim_values.empty()) sim_values.assign(idx.size(), 0.0);
        if (sim_values.size() != idx.size()) throw Failure(kUsage, "--values needs one entry per --test-cols column");
        h = {BSR_RESTRICT_FIX_BETA, idx.data(), sim_values.data(), idx.size(), 0.0};
      }
      bsr_sim_config cfg{static_cast<size_t>(sim_n), p, sim_alpha, nullptr, h, sim_levels.data(), sim_levels.size(),
                         sim_reps, sim_seed, sim_cov_seed, sim_threads};
      char* text = nullptr;
      if (mode == "size") {
        bsr_size_table* raw = nullptr;
        check(bsr_run_size_study(&cfg, &raw));
        SizePtr t(raw);
        check(bsr_size_table_render(t.get(), fmt, &text));
      } else if (mode == "critical-values") {
        bsr_critical_values* raw = nullptr;
        check(bsr_estimate_critical_values(&cfg, crit_reps, sim_level, &raw));
        CritPtr cv(raw);
        check(bsr_critical_values_render(cv.get(), fmt, &text));
      } else {
        std::array<double, 4> crit{};
        if (!crit_file.empty()) {
          crit = read_critical_values(crit_file);
        } else {
          std::cerr << "bsreg: no --critical-values file; estimating them from " << crit_reps << " null samples\n";
          bsr_critical_values* raw = nullptr;
          check(bsr_estimate_critical_values(&cfg, crit_reps, sim_level, &raw));
          CritPtr cv(raw);
          for (int s = 0; s < 4; ++s) crit[s] = bsr_critical_value(cv.get(), static_cast<bsr_statistic>(s + 1));
        }
        bsr_power_curve* raw = nullptr;
        check(bsr_run_power_study(&cfg, deltas.data(), deltas.size(), crit.data(), sim_level, &raw));
        CurvePtr c(raw);
        check(bsr_power_curve_render(c.get(), fmt, &text));
      }
      emit(text);
      return kOk;
    }
  } catch (const Failure& f) {
    std::cerr << "bsreg: " << f.what() << '\n';
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "bsreg: " << e.what() << '\n';
    return kInternal;
  }
  return kOk;
}
