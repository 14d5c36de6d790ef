#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bsreg/model.hpp"

namespace bsreg {

// How a CSV file maps onto a Dataset. Comma-delimited, header row, '.' as the
// decimal separator; no quoting.
struct CsvSchema {
  std::string response = "y";
  // Ordered covariate columns. Empty selects every non-response column in
  // file order.
  std::vector<std::string> covariates;
  bool intercept = false;     // prepend a column of ones named "(Intercept)"
  bool log_transform = false; // response holds raw lifetimes T; use y = log T
};

inline constexpr const char* kInterceptName = "(Intercept)";

// Throws DataError naming the offending row/column on malformed input.
Dataset parse_dataset(std::string_view csv_text, const CsvSchema& schema);
Dataset load_dataset(const std::string& path, const CsvSchema& schema);

}  // namespace bsreg
