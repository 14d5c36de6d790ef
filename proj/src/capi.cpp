#include "bsreg/bsreg.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "bsreg/csv.hpp"
#include "bsreg/error.hpp"
#include "bsreg/estimate.hpp"
#include "bsreg/hypothesis.hpp"
#include "bsreg/localpower.hpp"
#include "bsreg/mcharness.hpp"
#include "bsreg/report.hpp"
#include "bsreg/specfun.hpp"

struct bsr_dataset {
  bsreg::Dataset data;
};

struct bsr_fit {
  bsreg::FitResult fit;
  std::shared_ptr<const bsreg::Dataset> data;
  bsreg::Restriction restriction;
};

struct bsr_test_report {
  bsreg::TestReport report;
  std::shared_ptr<const bsreg::Dataset> data;
  bool alpha_family = false;
  double alpha0 = 0.0;
  std::vector<int> subset;
  std::vector<double> values;
  bsr_fit unrestricted;
  bsr_fit restricted;
};

struct bsr_size_table {
  bsreg::SizeTable table;
};

struct bsr_critical_values {
  bsreg::SimConfig config;
  bsreg::CriticalValues cv;
};

struct bsr_power_curve {
  bsreg::PowerCurve curve;
};

namespace {

thread_local std::string g_last_error;

bsr_status fail(bsr_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <class Fn>
bsr_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return BSR_OK;
  } catch (const bsreg::DomainError& e) {
    return fail(BSR_ERR_DOMAIN, e.what());
  } catch (const bsreg::ContractViolation& e) {
    return fail(BSR_ERR_INVALID_ARGUMENT, e.what());
  } catch (const bsreg::DataError& e) {
    return fail(BSR_ERR_DATA, e.what());
  } catch (const bsreg::NumericalError& e) {
    return fail(BSR_ERR_NUMERICAL, e.what());
  } catch (const bsreg::UnsupportedError& e) {
    return fail(BSR_ERR_UNSUPPORTED, e.what());
  } catch (const std::bad_alloc&) {
    return fail(BSR_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(BSR_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(BSR_ERR_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw bsreg::ContractViolation(what);
}

bsreg::Format to_format(bsr_format f) {
  switch (f) {
    case BSR_FORMAT_JSON: return bsreg::Format::json;
    case BSR_FORMAT_CSV: return bsreg::Format::csv;
    case BSR_FORMAT_TEXT: return bsreg::Format::text;
  }
  throw bsreg::ContractViolation("unknown output format");
}

int stat_index(bsr_statistic s) {
  const int i = static_cast<int>(s) - 1;
  return (i >= 0 && i < 4) ? i : -1;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::vector<int> to_int_indices(const size_t* indices, size_t count) {
  require(count == 0 || indices != nullptr, "index array is null");
  std::vector<int> out;
  for (size_t k = 0; k < count; ++k) {
    require(indices[k] < static_cast<size_t>(1) << 30, "index out of range");
    out.push_back(static_cast<int>(indices[k]));
  }
  return out;
}

std::vector<double> to_vector(const double* values, size_t count) {
  require(count == 0 || values != nullptr, "value array is null");
  return std::vector<double>(values, values + count);
}

bsreg::Restriction to_restriction(const bsr_restriction* r) {
  if (r == nullptr) return bsreg::Restriction::unrestricted();
  switch (r->kind) {
    case BSR_RESTRICT_NONE: return bsreg::Restriction::unrestricted();
    case BSR_RESTRICT_FIX_BETA:
      return bsreg::Restriction::fix_beta(to_int_indices(r->indices, r->count), to_vector(r->values, r->count));
    case BSR_RESTRICT_FIX_ALPHA: return bsreg::Restriction::fix_alpha(r->alpha0);
  }
  throw bsreg::ContractViolation("unknown restriction kind");
}

bsreg::CsvSchema to_schema(const bsr_csv_schema* s) {
  bsreg::CsvSchema schema;
  if (s == nullptr) return schema;
  if (s->response != nullptr) schema.response = s->response;
  require(s->n_covariates == 0 || s->covariates != nullptr, "covariate name array is null");
  for (size_t k = 0; k < s->n_covariates; ++k) {
    require(s->covariates[k] != nullptr, "covariate name is null");
    schema.covariates.emplace_back(s->covariates[k]);
  }
  schema.intercept = s->intercept != 0;
  schema.log_transform = s->log_response != 0;
  return schema;
}

bsreg::Matrix row_major(const double* x, size_t n, size_t p) {
  require(x != nullptr, "matrix pointer is null");
  bsreg::Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < p; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = x[i * p + j];
  return m;
}

bsreg::SimConfig to_sim_config(const bsr_sim_config* c) {
  require(c != nullptr, "simulation config is null");
  bsreg::SimConfig cfg;
  cfg.n = static_cast<int>(c->n);
  cfg.p = static_cast<int>(c->p);
  cfg.alpha_true = c->alpha_true;
  if (c->beta_true != nullptr) cfg.beta_true.assign(c->beta_true, c->beta_true + c->p);
  cfg.hypothesis = to_restriction(&c->hypothesis);
  if (c->levels != nullptr && c->n_levels > 0) cfg.levels.assign(c->levels, c->levels + c->n_levels);
  cfg.replications = static_cast<long>(c->replications);
  cfg.master_seed = c->master_seed;
  cfg.covariate_seed = c->covariate_seed;
  cfg.threads = c->threads == 0 ? 1 : c->threads;
  return cfg;
}

bsreg::AlphaPitmanSpec to_alpha_spec(const bsr_alpha_spec* s) {
  require(s != nullptr, "spec is null");
  return {s->alpha0, s->epsilon, s->n, s->p, s->level};
}

bsreg::BetaPitmanSpec to_beta_spec(const bsr_beta_spec* s) {
  require(s != nullptr, "spec is null");
  bsreg::BetaPitmanSpec spec;
  spec.design = row_major(s->design, s->n, s->p);
  spec.tested = to_int_indices(s->tested, s->count);
  const auto eps = to_vector(s->epsilon, s->count);
  spec.epsilon = Eigen::Map<const bsreg::Vector>(eps.data(), static_cast<Eigen::Index>(eps.size()));
  spec.alpha = s->alpha;
  spec.level = s->level;
  return spec;
}

}  // namespace

extern "C" {

const char* bsr_version(void) { return bsreg::version(); }
const char* bsr_last_error(void) { return g_last_error.c_str(); }
void bsr_string_free(char* s) { std::free(s); }

bsr_status bsr_psi(double alpha, double* out) {
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    *out = bsreg::specfun::psi(alpha);
  });
}

bsr_status bsr_chi2_quantile(double prob, int df, double* out) {
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    *out = bsreg::specfun::chi2_quantile(prob, df);
  });
}

bsr_status bsr_nc_chi2_cdf(double x, int df, double noncentrality, double* out) {
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    *out = bsreg::specfun::nc_chi2_cdf(x, {df, noncentrality});
  });
}

bsr_status bsr_nc_chi2_pdf(double x, int df, double noncentrality, double* out) {
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    *out = bsreg::specfun::nc_chi2_pdf(x, {df, noncentrality});
  });
}

bsr_status bsr_dataset_create(const double* y, const double* x, size_t n, size_t p, const char* const* names,
                              bsr_dataset** out) {
  return guarded([&] {
    require(out != nullptr && y != nullptr, "null argument");
    std::vector<std::string> cols;
    if (names != nullptr) {
      for (size_t j = 0; j < p; ++j) {
        require(names[j] != nullptr, "column name is null");
        cols.emplace_back(names[j]);
      }
    }
    bsreg::Vector yv = Eigen::Map<const bsreg::Vector>(y, static_cast<Eigen::Index>(n));
    *out = new bsr_dataset{bsreg::Dataset(std::move(yv), row_major(x, n, p), std::move(cols))};
  });
}

bsr_status bsr_dataset_load_csv(const char* path, const bsr_csv_schema* schema, bsr_dataset** out) {
  return guarded([&] {
    require(out != nullptr && path != nullptr, "null argument");
    *out = new bsr_dataset{bsreg::load_dataset(path, to_schema(schema))};
  });
}

bsr_status bsr_dataset_parse_csv(const char* text, const bsr_csv_schema* schema, bsr_dataset** out) {
  return guarded([&] {
    require(out != nullptr && text != nullptr, "null argument");
    *out = new bsr_dataset{bsreg::parse_dataset(text, to_schema(schema))};
  });
}

void bsr_dataset_free(bsr_dataset* data) { delete data; }
size_t bsr_dataset_rows(const bsr_dataset* data) { return data ? static_cast<size_t>(data->data.n()) : 0; }
size_t bsr_dataset_cols(const bsr_dataset* data) { return data ? static_cast<size_t>(data->data.p()) : 0; }

const char* bsr_dataset_column_name(const bsr_dataset* data, size_t column) {
  if (data == nullptr || column >= data->data.column_names().size()) return nullptr;
  return data->data.column_names()[column].c_str();
}

bsr_status bsr_dataset_find_column(const bsr_dataset* data, const char* name, size_t* column) {
  return guarded([&] {
    require(data != nullptr && name != nullptr && column != nullptr, "null argument");
    const int j = data->data.column_index(name);
    if (j < 0) throw bsreg::DataError(std::string("column '") + name + "' not found");
    *column = static_cast<size_t>(j);
  });
}

bsr_status bsr_dataset_design(const bsr_dataset* data, double* out) {
  return guarded([&] {
    require(data != nullptr && out != nullptr, "null argument");
    const bsreg::Matrix& X = data->data.X();
    for (Eigen::Index i = 0; i < X.rows(); ++i)
      for (Eigen::Index j = 0; j < X.cols(); ++j) out[i * X.cols() + j] = X(i, j);
  });
}

bsr_status bsr_simulation_design(size_t n, size_t p, uint64_t covariate_seed, double* out) {
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    const bsreg::Matrix X = bsreg::simulation_design(static_cast<int>(n), static_cast<int>(p), covariate_seed);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < p; ++j) out[i * p + j] = X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  });
}

bsr_status bsr_fit_model(const bsr_dataset* data, const bsr_restriction* restriction, bsr_fit** out) {
  return guarded([&] {
    require(data != nullptr && out != nullptr, "null argument");
    auto shared = std::make_shared<const bsreg::Dataset>(data->data);
    auto r = to_restriction(restriction);
    auto result = bsreg::fit(*shared, r);
    *out = new bsr_fit{std::move(result), std::move(shared), std::move(r)};
  });
}

void bsr_fit_free(bsr_fit* fit) { delete fit; }
size_t bsr_fit_num_coefficients(const bsr_fit* fit) {
  return fit ? static_cast<size_t>(fit->fit.theta_hat.beta.size()) : 0;
}
double bsr_fit_beta(const bsr_fit* fit, size_t j) {
  if (fit == nullptr || j >= static_cast<size_t>(fit->fit.theta_hat.beta.size())) return 0.0 / 0.0;
  return fit->fit.theta_hat.beta(static_cast<Eigen::Index>(j));
}
double bsr_fit_alpha(const bsr_fit* fit) { return fit ? fit->fit.theta_hat.alpha : 0.0 / 0.0; }
double bsr_fit_std_error(const bsr_fit* fit, size_t j) {
  if (fit == nullptr || j >= static_cast<size_t>(fit->fit.std_errors.size())) return 0.0 / 0.0;
  return fit->fit.std_errors(static_cast<Eigen::Index>(j));
}
double bsr_fit_loglik(const bsr_fit* fit) { return fit ? fit->fit.loglik_value : 0.0 / 0.0; }
int bsr_fit_iterations(const bsr_fit* fit) { return fit ? fit->fit.iterations : 0; }
int bsr_fit_converged(const bsr_fit* fit) { return fit && fit->fit.converged ? 1 : 0; }
double bsr_fit_gradient_norm(const bsr_fit* fit) { return fit ? fit->fit.gradient_norm : 0.0 / 0.0; }

bsr_status bsr_fit_render(const bsr_fit* fit, bsr_format format, char** out) {
  return guarded([&] {
    require(fit != nullptr && out != nullptr, "null argument");
    *out = copy_string(bsreg::render_fit(fit->fit, *fit->data, fit->restriction, to_format(format)));
  });
}

bsr_status bsr_test_beta(const bsr_dataset* data, const size_t* indices, const double* values, size_t count,
                         bsr_test_report** out) {
  return guarded([&] {
    require(data != nullptr && out != nullptr, "null argument");
    auto shared = std::make_shared<const bsreg::Dataset>(data->data);
    auto subset = to_int_indices(indices, count);
    auto vals = to_vector(values, count);
    auto rep = bsreg::test_beta_subset(*shared, subset, vals);
    auto* h = new bsr_test_report{rep, shared, false, 0.0, subset, vals,
                                  bsr_fit{rep.unrestricted, shared, bsreg::Restriction::unrestricted()},
                                  bsr_fit{rep.restricted, shared, bsreg::Restriction::fix_beta(subset, vals)}};
    *out = h;
  });
}

bsr_status bsr_test_alpha(const bsr_dataset* data, double alpha0, bsr_test_report** out) {
  return guarded([&] {
    require(data != nullptr && out != nullptr, "null argument");
    auto shared = std::make_shared<const bsreg::Dataset>(data->data);
    auto rep = bsreg::test_alpha(*shared, alpha0);
    *out = new bsr_test_report{rep, shared, true, alpha0, {}, {},
                               bsr_fit{rep.unrestricted, shared, bsreg::Restriction::unrestricted()},
                               bsr_fit{rep.restricted, shared, bsreg::Restriction::fix_alpha(alpha0)}};
  });
}

void bsr_report_free(bsr_test_report* report) { delete report; }

double bsr_report_statistic(const bsr_test_report* report, bsr_statistic s) {
  const int i = stat_index(s);
  return (report && i >= 0) ? report->report.statistics[i] : 0.0 / 0.0;
}
double bsr_report_p_value(const bsr_test_report* report, bsr_statistic s) {
  const int i = stat_index(s);
  return (report && i >= 0) ? report->report.p_values[i] : 0.0 / 0.0;
}
int bsr_report_df(const bsr_test_report* report) { return report ? report->report.df : 0; }
int bsr_report_converged(const bsr_test_report* report) { return report && report->report.converged() ? 1 : 0; }
const bsr_fit* bsr_report_unrestricted(const bsr_test_report* report) { return report ? &report->unrestricted : nullptr; }
const bsr_fit* bsr_report_restricted(const bsr_test_report* report) { return report ? &report->restricted : nullptr; }

bsr_status bsr_report_render(const bsr_test_report* report, bsr_format format, char** out) {
  return guarded([&] {
    require(report != nullptr && out != nullptr, "null argument");
    const auto f = to_format(format);
    *out = copy_string(report->alpha_family
                           ? bsreg::render_alpha_test(report->report, *report->data, report->alpha0, f)
                           : bsreg::render_beta_test(report->report, *report->data, report->subset, report->values, f));
  });
}

bsr_status bsr_alpha_local_power(const bsr_alpha_spec* spec, bsr_alpha_power* out) {
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    const auto s = to_alpha_spec(spec);
    const auto table = bsreg::alpha_local_power(s);
    const auto diffs = bsreg::alpha_power_differences(s, table.critical_value);
    out->lambda = table.lambda;
    out->critical_value = table.critical_value;
    for (int i = 0; i < 4; ++i) {
      out->power[i] = table.power[i];
      for (int k = 0; k < 4; ++k) out->coefficients[i][k] = table.coeffs.b[i][k];
    }
    for (int k = 0; k < 6; ++k) out->differences[k] = diffs[k];
    out->outside_local_regime = table.outside_local_regime ? 1 : 0;
  });
}

bsr_status bsr_alpha_nonnull_cdf(const bsr_alpha_spec* spec, bsr_statistic s, double x, double* out) {
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    const int i = stat_index(s);
    require(i >= 0, "statistic must be 1..4");
    *out = bsreg::alpha_nonnull_cdf(static_cast<bsreg::Statistic>(i), x, to_alpha_spec(spec));
  });
}

bsr_status bsr_alpha_local_power_render(const bsr_alpha_spec* spec, bsr_format format, char** out) {
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    const auto s = to_alpha_spec(spec);
    *out = copy_string(bsreg::render_alpha_power(s, bsreg::alpha_local_power(s), to_format(format)));
  });
}

bsr_status bsr_beta_noncentrality(const bsr_beta_spec* spec, double* out) {
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    *out = bsreg::beta_noncentrality(to_beta_spec(spec));
  });
}

bsr_status bsr_beta_local_power(double noncentrality, int df, double level, double* out) {
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    *out = bsreg::beta_local_power(noncentrality, df, level);
  });
}

bsr_status bsr_beta_local_power_render(const bsr_beta_spec* spec, bsr_format format, char** out) {
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    const auto s = to_beta_spec(spec);
    const double lambda = bsreg::beta_noncentrality(s);
    const double power = bsreg::beta_local_power(lambda, static_cast<int>(s.tested.size()), s.level);
    *out = copy_string(bsreg::render_beta_power(s, lambda, power, to_format(format)));
  });
}

bsr_status bsr_run_size_study(const bsr_sim_config* config, bsr_size_table** out) {
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    *out = new bsr_size_table{bsreg::run_size_study(to_sim_config(config))};
  });
}

void bsr_size_table_free(bsr_size_table* table) { delete table; }
size_t bsr_size_table_num_levels(const bsr_size_table* t) { return t ? t->table.levels.size() : 0; }
double bsr_size_table_level(const bsr_size_table* t, size_t l) {
  return (t && l < t->table.levels.size()) ? t->table.levels[l] : 0.0 / 0.0;
}
double bsr_size_table_rate(const bsr_size_table* t, bsr_statistic s, size_t l) {
  const int i = stat_index(s);
  return (t && i >= 0 && l < t->table.levels.size()) ? t->table.rates[i][l] : 0.0 / 0.0;
}
double bsr_size_table_std_err(const bsr_size_table* t, bsr_statistic s, size_t l) {
  const int i = stat_index(s);
  return (t && i >= 0 && l < t->table.levels.size()) ? t->table.mc_std_err[i][l] : 0.0 / 0.0;
}
int64_t bsr_size_table_excluded(const bsr_size_table* t) { return t ? t->table.excluded : 0; }

bsr_status bsr_size_table_render(const bsr_size_table* t, bsr_format format, char** out) {
  return guarded([&] {
    require(t != nullptr && out != nullptr, "null argument");
    *out = copy_string(bsreg::render_size_table(t->table, to_format(format)));
  });
}

bsr_status bsr_estimate_critical_values(const bsr_sim_config* config, int64_t replications, double level,
                                        bsr_critical_values** out) {
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    auto cfg = to_sim_config(config);
    auto cv = bsreg::estimate_critical_values(cfg, static_cast<long>(replications), level);
    *out = new bsr_critical_values{std::move(cfg), cv};
  });
}

void bsr_critical_values_free(bsr_critical_values* cv) { delete cv; }
double bsr_critical_value(const bsr_critical_values* cv, bsr_statistic s) {
  const int i = stat_index(s);
  return (cv && i >= 0) ? cv->cv.values[i] : 0.0 / 0.0;
}
int64_t bsr_critical_values_excluded(const bsr_critical_values* cv) { return cv ? cv->cv.excluded : 0; }

bsr_status bsr_critical_values_render(const bsr_critical_values* cv, bsr_format format, char** out) {
  return guarded([&] {
    require(cv != nullptr && out != nullptr, "null argument");
    *out = copy_string(bsreg::render_critical_values(cv->config, cv->cv, to_format(format)));
  });
}

bsr_status bsr_run_power_study(const bsr_sim_config* config, const double* deltas, size_t n_deltas,
                               const double critical_values[4], double level, bsr_power_curve** out) {
  return guarded([&] {
    require(out != nullptr && critical_values != nullptr, "null argument");
    const auto grid = to_vector(deltas, n_deltas);
    const std::array<double, 4> crit = {critical_values[0], critical_values[1], critical_values[2], critical_values[3]};
    *out = new bsr_power_curve{bsreg::run_power_study(to_sim_config(config), grid, crit, level)};
  });
}

void bsr_power_curve_free(bsr_power_curve* curve) { delete curve; }
double bsr_power_curve_power(const bsr_power_curve* c, bsr_statistic s, size_t d) {
  const int i = stat_index(s);
  return (c && i >= 0 && d < c->curve.delta_grid.size()) ? c->curve.powers[i][d] : 0.0 / 0.0;
}

bsr_status bsr_power_curve_render(const bsr_power_curve* c, bsr_format format, char** out) {
  return guarded([&] {
    require(c != nullptr && out != nullptr, "null argument");
    *out = copy_string(bsreg::render_power_curve(c->curve, to_format(format)));
  });
}

}  // extern "C"
