#pragma once

#include <string>
#include <string_view>

#include "bsreg/hypothesis.hpp"
#include "bsreg/localpower.hpp"
#include "bsreg/mcharness.hpp"

namespace bsreg {

enum class Format { json, csv, text };

// Parses "json" / "csv" / "text"; DomainError otherwise.
Format parse_format(std::string_view name);

const char* version();

// Renderers. JSON output always carries the artifact name and version; study
// outputs also echo the full configuration including seeds, so a run can be
// repeated exactly. Thread counts are never echoed: they do not affect results.
std::string render_fit(const FitResult& fit, const Dataset& data, const Restriction& restriction, Format format);
std::string render_beta_test(const TestReport& report, const Dataset& data, std::span<const int> subset,
                             std::span<const double> values, Format format);
std::string render_alpha_test(const TestReport& report, const Dataset& data, double alpha0, Format format);
std::string render_size_table(const SizeTable& table, Format format);
std::string render_critical_values(const SimConfig& config, const CriticalValues& cv, Format format);
std::string render_power_curve(const PowerCurve& curve, Format format);
std::string render_alpha_power(const AlphaPitmanSpec& spec, const AlphaPowerTable& table, Format format);
std::string render_beta_power(const BetaPitmanSpec& spec, double lambda, double power, Format format);

}  // namespace bsreg
