#include "bsreg/report.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "bsreg/error.hpp"

namespace bsreg {
namespace {

using nlohmann::ordered_json;

ordered_json header(const char* kind) {
  ordered_json j;
  j["artifact"] = "bsreg";
  j["version"] = version();
  j["kind"] = kind;
  return j;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

// Shortest round-trip representation for CSV cells.
// Shortest text that reads back to the same double.
std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fixed(double v, int prec, int width = 0) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%*.*f", width, prec, v);
  return buf;
}

ordered_json restriction_json(const Restriction& r, const Dataset* data) {
  ordered_json j;
  switch (r.kind) {
    case Restriction::Kind::none:
      j["kind"] = "none";
      break;
    case Restriction::Kind::fix_alpha:
      j["kind"] = "fix_alpha";
      j["alpha0"] = r.alpha0;
      break;
    case Restriction::Kind::fix_beta_subset: {
      j["kind"] = "fix_beta_subset";
      j["indices"] = r.fixed_indices;
      if (data != nullptr) {
        std::vector<std::string> names;
        for (int k : r.fixed_indices) names.push_back(data->column_names()[k]);
        j["columns"] = names;
      }
      j["values"] = r.fixed_values;
      break;
    }
  }
  return j;
}

bool is_fixed(const Restriction& r, int j) {
  if (r.kind != Restriction::Kind::fix_beta_subset) return false;
  for (int k : r.fixed_indices) {
    if (k == j) return true;
  }
  return false;
}

ordered_json fit_json(const FitResult& fit, const Dataset& data, const Restriction& r) {
  ordered_json j;
  j["restriction"] = restriction_json(r, &data);
  ordered_json coefs = ordered_json::array();
  for (int k = 0; k < data.p(); ++k) {
    coefs.push_back({{"name", data.column_names()[k]},
                     {"estimate", fit.theta_hat.beta(k)},
                     {"std_error", fit.std_errors(k)},
                     {"fixed", is_fixed(r, k)}});
  }
  j["coefficients"] = coefs;
  j["alpha"] = {{"estimate", fit.theta_hat.alpha},
                {"std_error", fit.std_errors(data.p())},
                {"fixed", r.kind == Restriction::Kind::fix_alpha}};
  j["loglik"] = fit.loglik_value;
  j["iterations"] = fit.iterations;
  j["converged"] = fit.converged;
  j["gradient_norm"] = fit.gradient_norm;
  return j;
}

ordered_json config_json(const SimConfig& c) {
  ordered_json j;
  j["n"] = c.n;
  j["p"] = c.p;
  j["alpha_true"] = c.alpha_true;
  const Vector b = c.true_beta();
  j["beta_true"] = std::vector<double>(b.data(), b.data() + b.size());
  j["hypothesis"] = restriction_json(c.hypothesis, nullptr);
  j["levels"] = c.levels;
  j["replications"] = c.replications;
  j["master_seed"] = c.master_seed;
  j["covariate_seed"] = c.covariate_seed;
  return j;
}

std::string test_text(const TestReport& rep, const std::string& title) {
  std::ostringstream out;
  out << title << "\n";
  out << "df = " << rep.df << "\n\n";
  out << "  statistic            value      p-value\n";
  for (Statistic s : kAllStatistics) {
    char line[128];
    std::snprintf(line, sizeof line, "  %-2s %-16s %10.4f %10.4f\n", std::string(statistic_symbol(s)).c_str(),
                  std::string(statistic_name(s)).c_str(), rep.statistic(s), rep.p_value(s));
    out << line;
  }
  if (!rep.converged()) out << "\nwarning: at least one fit did not converge\n";
  return out.str();
}

std::string test_csv(const TestReport& rep) {
  std::ostringstream out;
  out << "statistic,symbol,value,df,p_value\n";
  for (Statistic s : kAllStatistics) {
    out << statistic_name(s) << ',' << statistic_symbol(s) << ',' << num(rep.statistic(s)) << ',' << rep.df << ','
        << num(rep.p_value(s)) << '\n';
  }
  return out.str();
}

ordered_json test_json(const TestReport& rep) {
  ordered_json j;
  j["df"] = rep.df;
  ordered_json stats;
  for (Statistic s : kAllStatistics) {
    stats[std::string(statistic_name(s))] = {{"symbol", statistic_symbol(s)},
                                             {"value", rep.statistic(s)},
                                             {"p_value", rep.p_value(s)}};
  }
  j["statistics"] = stats;
  return j;
}

}  // namespace

const char* version() { return BSREG_VERSION_STRING; }

Format parse_format(std::string_view name) {
  if (name == "json") return Format::json;
  if (name == "csv") return Format::csv;
  if (name == "text") return Format::text;
  throw DomainError("unknown output format '" + std::string(name) + "' (expected json, csv or text)");
}

std::string render_fit(const FitResult& fit, const Dataset& data, const Restriction& r, Format format) {
  switch (format) {
    case Format::json: {
      ordered_json j = header("fit");
      j["n"] = data.n();
      j["p"] = data.p();
      j.update(fit_json(fit, data, r));
      return dump(j);
    }
    case Format::csv: {
      std::ostringstream out;
      out << "parameter,estimate,std_error,fixed\n";
      for (int k = 0; k < data.p(); ++k)
        out << data.column_names()[k] << ',' << num(fit.theta_hat.beta(k)) << ',' << num(fit.std_errors(k)) << ','
            << (is_fixed(r, k) ? 1 : 0) << '\n';
      out << "alpha," << num(fit.theta_hat.alpha) << ',' << num(fit.std_errors(data.p())) << ','
          << (r.kind == Restriction::Kind::fix_alpha ? 1 : 0) << '\n';
      return out.str();
    }
    case Format::text: {
      std::ostringstream out;
      out << "Birnbaum-Saunders log-linear regression, n = " << data.n() << ", p = " << data.p() << "\n\n";
      out << "  parameter                estimate    std.error\n";
      for (int k = 0; k < data.p(); ++k) {
        char line[160];
        std::snprintf(line, sizeof line, "  %-20s %12.6f %12.6f%s\n", data.column_names()[k].c_str(),
                      fit.theta_hat.beta(k), fit.std_errors(k), is_fixed(r, k) ? "  (fixed)" : "");
        out << line;
      }
      char line[160];
      std::snprintf(line, sizeof line, "  %-20s %12.6f %12.6f%s\n", "alpha", fit.theta_hat.alpha,
                    fit.std_errors(data.p()), r.kind == Restriction::Kind::fix_alpha ? "  (fixed)" : "");
      out << line << "\n";
      out << "log-likelihood " << fixed(fit.loglik_value, 6) << ", iterations " << fit.iterations << ", "
          << (fit.converged ? "converged" : "NOT converged") << " (|grad| = " << fit.gradient_norm << ")\n";
      return out.str();
    }
  }
  return {};
}

std::string render_beta_test(const TestReport& rep, const Dataset& data, std::span<const int> subset,
                             std::span<const double> values, Format format) {
  std::vector<std::string> names;
  for (int k : subset) names.push_back(data.column_names()[k]);
  switch (format) {
    case Format::json: {
      ordered_json j = header("test");
      j["n"] = data.n();
      j["p"] = data.p();
      j["hypothesis"] = {{"family", "beta"},
                         {"indices", std::vector<int>(subset.begin(), subset.end())},
                         {"columns", names},
                         {"values", std::vector<double>(values.begin(), values.end())}};
      j.update(test_json(rep));
      j["unrestricted"] = fit_json(rep.unrestricted, data, Restriction::unrestricted());
      j["restricted"] = fit_json(rep.restricted, data,
                                 Restriction::fix_beta({subset.begin(), subset.end()}, {values.begin(), values.end()}));
      return dump(j);
    }
    case Format::csv:
      return test_csv(rep);
    case Format::text: {
      std::string title = "H0:";
      for (std::size_t k = 0; k < names.size(); ++k) title += " beta[" + names[k] + "] = " + num(values[k]) + (k + 1 < names.size() ? "," : "");
      return test_text(rep, title);
    }
  }
  return {};
}

std::string render_alpha_test(const TestReport& rep, const Dataset& data, double alpha0, Format format) {
  switch (format) {
    case Format::json: {
      ordered_json j = header("test");
      j["n"] = data.n();
      j["p"] = data.p();
      j["hypothesis"] = {{"family", "alpha"}, {"alpha0", alpha0}};
      j.update(test_json(rep));
      j["unrestricted"] = fit_json(rep.unrestricted, data, Restriction::unrestricted());
      j["restricted"] = fit_json(rep.restricted, data, Restriction::fix_alpha(alpha0));
      return dump(j);
    }
    case Format::csv:
      return test_csv(rep);
    case Format::text:
      return test_text(rep, "H0: alpha = " + num(alpha0));
  }
  return {};
}

std::string render_size_table(const SizeTable& t, Format format) {
  switch (format) {
    case Format::json: {
      ordered_json j = header("size_study");
      j["config"] = config_json(t.config);
      j["attempted"] = t.attempted;
      j["excluded"] = t.excluded;
      ordered_json rows = ordered_json::array();
      for (std::size_t l = 0; l < t.levels.size(); ++l) {
        for (Statistic s : kAllStatistics) {
          const int i = static_cast<int>(s);
          rows.push_back({{"level", t.levels[l]},
                          {"statistic", statistic_name(s)},
                          {"symbol", statistic_symbol(s)},
                          {"rate_percent", t.rates[i][l]},
                          {"mc_std_err", t.mc_std_err[i][l]}});
        }
      }
      j["results"] = rows;
      return dump(j);
    }
    case Format::csv: {
      std::ostringstream out;
      out << "n,p,alpha_true,level,statistic,rate_percent,mc_std_err,attempted,excluded,master_seed,covariate_seed\n";
      for (std::size_t l = 0; l < t.levels.size(); ++l) {
        for (Statistic s : kAllStatistics) {
          const int i = static_cast<int>(s);
          out << t.config.n << ',' << t.config.p << ',' << num(t.config.alpha_true) << ',' << num(t.levels[l]) << ','
              << statistic_symbol(s) << ',' << num(t.rates[i][l]) << ',' << num(t.mc_std_err[i][l]) << ','
              << t.attempted << ',' << t.excluded << ',' << t.config.master_seed << ',' << t.config.covariate_seed
              << '\n';
        }
      }
      return out.str();
    }
    case Format::text: {
      std::ostringstream out;
      out << "Null rejection rates (%), n = " << t.config.n << ", p = " << t.config.p << ", alpha = " << t.config.alpha_true
          << ", " << t.attempted - t.excluded << " replications used (" << t.excluded << " excluded)\n\n";
      out << "  level       S1       S2       S3       S4\n";
      for (std::size_t l = 0; l < t.levels.size(); ++l) {
        out << "  " << fixed(100.0 * t.levels[l], 1, 4) << "%";
        for (int s = 0; s < 4; ++s) out << ' ' << fixed(t.rates[s][l], 2, 8);
        out << '\n';
      }
      return out.str();
    }
  }
  return {};
}

std::string render_critical_values(const SimConfig& config, const CriticalValues& cv, Format format) {
  switch (format) {
    case Format::json: {
      ordered_json j = header("critical_values");
      ordered_json cfg = config_json(config);
      cfg["replications"] = cv.replications;
      j["config"] = cfg;
      j["level"] = cv.level;
      j["excluded"] = cv.excluded;
      ordered_json vals;
      for (Statistic s : kAllStatistics) vals[std::string(statistic_symbol(s))] = cv.values[static_cast<int>(s)];
      j["critical_values"] = vals;
      return dump(j);
    }
    case Format::csv: {
      std::ostringstream out;
      out << "statistic,level,critical_value,replications,excluded,master_seed,covariate_seed\n";
      for (Statistic s : kAllStatistics)
        out << statistic_symbol(s) << ',' << num(cv.level) << ',' << num(cv.values[static_cast<int>(s)]) << ','
            << cv.replications << ',' << cv.excluded << ',' << config.master_seed << ',' << config.covariate_seed << '\n';
      return out.str();
    }
    case Format::text: {
      std::ostringstream out;
      out << "Estimated exact critical values, level " << cv.level << ", " << cv.replications << " replications ("
          << cv.excluded << " excluded)\n";
      for (Statistic s : kAllStatistics)
        out << "  " << statistic_symbol(s) << "  " << fixed(cv.values[static_cast<int>(s)], 4) << '\n';
      return out.str();
    }
  }
  return {};
}

std::string render_power_curve(const PowerCurve& c, Format format) {
  switch (format) {
    case Format::json: {
      ordered_json j = header("power_study");
      j["config"] = config_json(c.config);
      j["level"] = c.level;
      ordered_json crit;
      for (Statistic s : kAllStatistics) crit[std::string(statistic_symbol(s))] = c.critical_values[static_cast<int>(s)];
      j["critical_values"] = crit;
      ordered_json rows = ordered_json::array();
      for (std::size_t d = 0; d < c.delta_grid.size(); ++d) {
        ordered_json row;
        row["delta"] = c.delta_grid[d];
        for (Statistic s : kAllStatistics) row[std::string(statistic_symbol(s))] = c.powers[static_cast<int>(s)][d];
        row["excluded"] = c.excluded[d];
        rows.push_back(row);
      }
      j["results"] = rows;
      return dump(j);
    }
    case Format::csv: {
      std::ostringstream out;
      out << "delta,S1,S2,S3,S4,excluded\n";
      for (std::size_t d = 0; d < c.delta_grid.size(); ++d) {
        out << num(c.delta_grid[d]);
        for (int s = 0; s < 4; ++s) out << ',' << num(c.powers[s][d]);
        out << ',' << c.excluded[d] << '\n';
      }
      return out.str();
    }
    case Format::text: {
      std::ostringstream out;
      out << "Size-corrected power, n = " << c.config.n << ", p = " << c.config.p << ", level " << c.level << "\n\n";
      out << "    delta       S1       S2       S3       S4\n";
      for (std::size_t d = 0; d < c.delta_grid.size(); ++d) {
        out << "  " << fixed(c.delta_grid[d], 3, 7);
        for (int s = 0; s < 4; ++s) out << ' ' << fixed(c.powers[s][d], 4, 8);
        out << '\n';
      }
      return out.str();
    }
  }
  return {};
}

std::string render_alpha_power(const AlphaPitmanSpec& spec, const AlphaPowerTable& t, Format format) {
  switch (format) {
    case Format::json: {
      ordered_json j = header("local_power");
      j["family"] = "alpha";
      j["spec"] = {{"alpha0", spec.alpha0}, {"epsilon", spec.epsilon}, {"n", spec.n}, {"p", spec.p}, {"level", spec.level}};
      j["lambda"] = t.lambda;
      j["critical_value"] = t.critical_value;
      ordered_json powers;
      ordered_json coeffs;
      for (Statistic s : kAllStatistics) {
        const int i = static_cast<int>(s);
        powers[std::string(statistic_symbol(s))] = t.power[i];
        coeffs[std::string(statistic_symbol(s))] = t.coeffs.b[i];
      }
      j["power"] = powers;
      j["coefficients"] = coeffs;
      j["outside_local_regime"] = t.outside_local_regime;
      return dump(j);
    }
    case Format::csv: {
      std::ostringstream out;
      out << "statistic,power,b0,b1,b2,b3\n";
      for (Statistic s : kAllStatistics) {
        const int i = static_cast<int>(s);
        out << statistic_symbol(s) << ',' << num(t.power[i]);
        for (double b : t.coeffs.b[i]) out << ',' << num(b);
        out << '\n';
      }
      return out.str();
    }
    case Format::text: {
      std::ostringstream out;
      out << "Local power for H0: alpha = " << spec.alpha0 << " vs alpha = " << spec.alpha0 + spec.epsilon
          << " (n = " << spec.n << ", p = " << spec.p << ", level " << spec.level << ", lambda = " << fixed(t.lambda, 4)
          << ")\n\n";
      out << "  stat     power           b0          b1          b2          b3\n";
      for (Statistic s : kAllStatistics) {
        const int i = static_cast<int>(s);
        out << "  " << statistic_symbol(s) << "  " << fixed(t.power[i], 6, 9);
        for (double b : t.coeffs.b[i]) out << ' ' << fixed(b, 6, 11);
        out << '\n';
      }
      if (t.outside_local_regime) out << "\nwarning: correction terms exceed 0.1; epsilon is not local for this n\n";
      return out.str();
    }
  }
  return {};
}

std::string render_beta_power(const BetaPitmanSpec& spec, double lambda, double power, Format format) {
  switch (format) {
    case Format::json: {
      ordered_json j = header("local_power");
      j["family"] = "beta";
      j["spec"] = {{"n", spec.design.rows()},
                   {"p", spec.design.cols()},
                   {"tested", spec.tested},
                   {"epsilon", std::vector<double>(spec.epsilon.data(), spec.epsilon.data() + spec.epsilon.size())},
                   {"alpha", spec.alpha},
                   {"level", spec.level}};
      j["df"] = spec.tested.size();
      j["lambda"] = lambda;
      j["power"] = power;
      return dump(j);
    }
    case Format::csv: {
      std::ostringstream out;
      out << "df,lambda,power\n" << spec.tested.size() << ',' << num(lambda) << ',' << num(power) << '\n';
      return out.str();
    }
    case Format::text: {
      std::ostringstream out;
      out << "Local power (all four statistics), df = " << spec.tested.size() << ", lambda = " << fixed(lambda, 6)
          << ", level " << spec.level << ": " << fixed(power, 6) << '\n';
      return out.str();
    }
  }
  return {};
}

}  // namespace bsreg
