#include "bsreg/mcharness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "bsreg/error.hpp"
#include "bsreg/random.hpp"
#include "bsreg/sinh_normal.hpp"
#include "bsreg/specfun.hpp"

namespace bsreg {
namespace {

// Stream domains keep the error draws of different study types independent.
constexpr std::uint32_t kDomainSize = 1;
constexpr std::uint32_t kDomainCritical = 2;
constexpr std::uint32_t kDomainPower = 3;
constexpr std::uint32_t kDomainCovariates = 10;

struct Outcome {
  std::array<double, 4> stats{};
  bool valid = false;
};

template <class Fn>
void parallel_for(long count, unsigned threads, Fn&& fn) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max(1L, count))));
  if (workers == 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      constexpr long kChunk = 64;
      for (;;) {
        const long begin = next.fetch_add(kChunk);
        if (begin >= count) break;
        const long end = std::min(count, begin + kChunk);
        for (long i = begin; i < end; ++i) fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

// One replication under (beta, alpha): draw errors, fit, compute statistics.
Outcome replicate(const SimConfig& cfg, const Matrix& X, const Vector& mean, double alpha, rng::Stream stream) {
  Vector y(cfg.n);
  const SinhNormalParams errors{alpha, 0.0};
  for (int i = 0; i < cfg.n; ++i) y(i) = mean(i) + sample_sinh_normal(errors, stream);
  Outcome out;
  try {
    const Dataset data(std::move(y), X);
    TestReport rep;
    if (cfg.hypothesis.kind == Restriction::Kind::fix_alpha) {
      rep = test_alpha(data, cfg.hypothesis.alpha0);
    } else {
      rep = test_beta_subset(data, cfg.hypothesis.fixed_indices, cfg.hypothesis.fixed_values);
    }
    out.stats = rep.statistics;
    out.valid = rep.converged();
  } catch (const NumericalError&) {
    out.valid = false;
  } catch (const DataError&) {
    out.valid = false;
  }
  return out;
}

std::vector<Outcome> simulate(const SimConfig& cfg, const Matrix& X, const Vector& beta, double alpha, long reps,
                              std::uint32_t domain) {
  const Vector mean = X * beta;
  std::vector<Outcome> outcomes(static_cast<std::size_t>(reps));
  parallel_for(reps, cfg.threads, [&](long r) {
    outcomes[static_cast<std::size_t>(r)] =
        replicate(cfg, X, mean, alpha, rng::Stream(cfg.master_seed, static_cast<std::uint64_t>(r), domain));
  });
  return outcomes;
}

long count_excluded(const std::vector<Outcome>& outcomes) {
  return std::count_if(outcomes.begin(), outcomes.end(), [](const Outcome& o) { return !o.valid; });
}

void check_exclusions(long excluded, long reps, const char* what) {
  if (static_cast<double>(excluded) > kMaxExclusionFraction * static_cast<double>(reps)) {
    std::ostringstream msg;
    msg << what << ": " << excluded << " of " << reps
        << " replications failed to converge (limit " << kMaxExclusionFraction * 100.0 << "%); aborting";
    throw NumericalError(msg.str());
  }
}

int degrees_of_freedom(const SimConfig& cfg) {
  return cfg.hypothesis.kind == Restriction::Kind::fix_alpha ? 1 : static_cast<int>(cfg.hypothesis.fixed_indices.size());
}

}  // namespace

void SimConfig::validate() const {
  if (n < 2 || p < 1 || n <= p) throw DomainError("simulation needs n > p >= 1");
  if (replications < 1) throw DomainError("replications must be >= 1");
  if (!(alpha_true > 0.0)) throw DomainError("alpha_true must be positive");
  if (!beta_true.empty() && static_cast<int>(beta_true.size()) != p)
    throw ContractViolation("beta_true must have p entries");
  for (double g : levels) {
    if (!(g > 0.0 && g < 1.0)) throw DomainError("levels must lie in (0, 1)");
  }
  switch (hypothesis.kind) {
    case Restriction::Kind::none:
      throw ContractViolation("simulation needs a null hypothesis to test");
    case Restriction::Kind::fix_alpha:
      hypothesis.validate(p);
      break;
    case Restriction::Kind::fix_beta_subset:
      hypothesis.validate(p);
      if (hypothesis.fixed_indices.empty()) throw ContractViolation("tested coefficient set is empty");
      if (static_cast<int>(hypothesis.fixed_indices.size()) >= p)
        throw UnsupportedError("testing every regression coefficient at once is not supported");
      break;
  }
}

Vector SimConfig::true_beta() const {
  if (!beta_true.empty()) return Eigen::Map<const Vector>(beta_true.data(), p);
  Vector b = Vector::Ones(p);
  if (hypothesis.kind == Restriction::Kind::fix_beta_subset) {
    for (std::size_t k = 0; k < hypothesis.fixed_indices.size(); ++k)
      b(hypothesis.fixed_indices[k]) = hypothesis.fixed_values[k];
  }
  return b;
}

Matrix simulation_design(int n, int p, std::uint64_t covariate_seed) {
  if (n < 1 || p < 1) throw DomainError("design needs n, p >= 1");
  Matrix X(n, p);
  X.col(0).setOnes();
  for (int j = 1; j < p; ++j) {
    rng::Stream s(covariate_seed, static_cast<std::uint64_t>(n) << 16 | static_cast<std::uint64_t>(j), kDomainCovariates);
    for (int i = 0; i < n; ++i) X(i, j) = s.next_uniform();
  }
  return X;
}

SizeTable run_size_study(const SimConfig& config) {
  config.validate();
  const Matrix X = simulation_design(config.n, config.p, config.covariate_seed);
  const auto outcomes = simulate(config, X, config.true_beta(), config.alpha_true, config.replications, kDomainSize);

  SizeTable table;
  table.config = config;
  table.levels = config.levels;
  table.attempted = config.replications;
  table.excluded = count_excluded(outcomes);
  check_exclusions(table.excluded, table.attempted, "size study");

  const long used = table.attempted - table.excluded;
  const int df = degrees_of_freedom(config);
  for (int s = 0; s < 4; ++s) {
    table.rates[s].resize(config.levels.size());
    table.mc_std_err[s].resize(config.levels.size());
  }
  for (std::size_t l = 0; l < config.levels.size(); ++l) {
    const double crit = specfun::chi2_quantile(1.0 - config.levels[l], df);
    std::array<long, 4> rejections{};
    for (const auto& o : outcomes) {
      if (!o.valid) continue;
      for (int s = 0; s < 4; ++s) rejections[s] += o.stats[s] > crit ? 1 : 0;
    }
    for (int s = 0; s < 4; ++s) {
      const double r = used > 0 ? static_cast<double>(rejections[s]) / static_cast<double>(used) : 0.0;
      table.rates[s][l] = 100.0 * r;
      table.mc_std_err[s][l] = used > 0 ? 100.0 * std::sqrt(r * (1.0 - r) / static_cast<double>(used)) : 0.0;
    }
  }
  return table;
}

SizeTable run_alpha_size_study(const SimConfig& config) {
  if (config.hypothesis.kind != Restriction::Kind::fix_alpha)
    throw ContractViolation("alpha size study needs a fix-alpha hypothesis");
  return run_size_study(config);
}

CriticalValues estimate_critical_values(const SimConfig& config, long replications, double level) {
  config.validate();
  if (replications < 1) throw DomainError("replications must be >= 1");
  if (!(level > 0.0 && level < 1.0)) throw DomainError("level must lie in (0, 1)");
  const Matrix X = simulation_design(config.n, config.p, config.covariate_seed);
  const auto outcomes = simulate(config, X, config.true_beta(), config.alpha_true, replications, kDomainCritical);

  CriticalValues cv;
  cv.level = level;
  cv.replications = replications;
  cv.excluded = count_excluded(outcomes);
  check_exclusions(cv.excluded, replications, "critical value estimation");

  const long used = replications - cv.excluded;
  if (used < 1) throw NumericalError("no usable replications for critical values");
  // Smallest order statistic whose empirical CDF reaches 1 - level.
  const auto rank = static_cast<std::size_t>(
      std::clamp<long>(static_cast<long>(std::ceil((1.0 - level) * static_cast<double>(used) - 1e-9)), 1L, used));
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(used));
  for (int s = 0; s < 4; ++s) {
    values.clear();
    for (const auto& o : outcomes) {
      if (o.valid) values.push_back(o.stats[s]);
    }
    std::nth_element(values.begin(), values.begin() + static_cast<long>(rank - 1), values.end());
    cv.values[s] = values[rank - 1];
  }
  return cv;
}

PowerCurve run_power_study(const SimConfig& config, std::span<const double> delta_grid,
                           const std::array<double, 4>& critical_values, double level) {
  config.validate();
  if (!(level > 0.0 && level < 1.0)) throw DomainError("level must lie in (0, 1)");
  const Matrix X = simulation_design(config.n, config.p, config.covariate_seed);

  PowerCurve curve;
  curve.config = config;
  curve.level = level;
  curve.delta_grid.assign(delta_grid.begin(), delta_grid.end());
  curve.critical_values = critical_values;
  for (auto& v : curve.powers) v.resize(delta_grid.size());

  for (std::size_t d = 0; d < delta_grid.size(); ++d) {
    Vector beta = config.true_beta();
    double alpha = config.alpha_true;
    if (config.hypothesis.kind == Restriction::Kind::fix_alpha) {
      alpha = config.hypothesis.alpha0 + delta_grid[d];
      if (!(alpha > 0.0)) throw DomainError("alpha0 + delta must be positive");
    } else {
      for (std::size_t k = 0; k < config.hypothesis.fixed_indices.size(); ++k)
        beta(config.hypothesis.fixed_indices[k]) = config.hypothesis.fixed_values[k] + delta_grid[d];
    }
    const auto outcomes = simulate(config, X, beta, alpha, config.replications, kDomainPower);
    const long excluded = count_excluded(outcomes);
    check_exclusions(excluded, config.replications, "power study");
    curve.excluded.push_back(excluded);
    const long used = config.replications - excluded;
    std::array<long, 4> rejections{};
    for (const auto& o : outcomes) {
      if (!o.valid) continue;
      for (int s = 0; s < 4; ++s) rejections[s] += o.stats[s] > critical_values[s] ? 1 : 0;
    }
    for (int s = 0; s < 4; ++s)
      curve.powers[s][d] = used > 0 ? static_cast<double>(rejections[s]) / static_cast<double>(used) : 0.0;
  }
  return curve;
}

}  // namespace bsreg
