#include "bsreg/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bsreg/error.hpp"

namespace bsreg {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_number(std::string_view cell, std::size_t row, std::string_view column) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    std::ostringstream msg;
    msg << "row " << row << ", column '" << column << "': cannot parse '" << cell << "' as a number";
    throw DataError(msg.str());
  }
  return v;
}

}  // namespace

Dataset parse_dataset(std::string_view text, const CsvSchema& schema) {
  std::vector<std::string_view> lines;
  std::vector<std::size_t> line_numbers;  // 1-based position in the file
  std::size_t start = 0;
  for (std::size_t number = 1; start <= text.size(); ++number) {
    const auto pos = text.find('\n', start);
    const auto line = text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    if (!trim(line).empty()) {
      lines.push_back(line);
      line_numbers.push_back(number);
    }
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  if (lines.empty()) throw DataError("CSV input is empty");

  const auto header = split(lines.front());
  auto find_col = [&](std::string_view name) -> int {
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (header[j] == name) return static_cast<int>(j);
    }
    return -1;
  };

  const int response_col = find_col(schema.response);
  if (response_col < 0) throw DataError("response column '" + schema.response + "' not found in CSV header");

  std::vector<std::string> cov_names = schema.covariates;
  if (cov_names.empty()) {
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (static_cast<int>(j) != response_col) cov_names.emplace_back(header[j]);
    }
  }
  std::vector<int> cov_cols;
  std::string missing;
  for (const auto& name : cov_names) {
    const int j = find_col(name);
    if (j < 0) missing += (missing.empty() ? "'" : ", '") + name + "'";
    cov_cols.push_back(j);
  }
  if (!missing.empty()) throw DataError("covariate column(s) not found in CSV header: " + missing);

  const std::size_t n = lines.size() - 1;
  const int offset = schema.intercept ? 1 : 0;
  const int p = static_cast<int>(cov_cols.size()) + offset;
  if (p == 0) throw DataError("no covariates selected and no intercept requested");
  Vector y(static_cast<Eigen::Index>(n));
  Matrix X(static_cast<Eigen::Index>(n), p);

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t row = line_numbers[i + 1];
    const auto cells = split(lines[i + 1]);
    if (cells.size() != header.size()) {
      std::ostringstream msg;
      msg << "row " << row << ": expected " << header.size() << " fields, found " << cells.size();
      throw DataError(msg.str());
    }
    double resp = parse_number(cells[response_col], row, schema.response);
    if (schema.log_transform) {
      if (!(resp > 0.0)) {
        std::ostringstream msg;
        msg << "row " << row << ", column '" << schema.response << "': lifetime must be positive to take logs";
        throw DataError(msg.str());
      }
      resp = std::log(resp);
    }
    y(static_cast<Eigen::Index>(i)) = resp;
    if (schema.intercept) X(static_cast<Eigen::Index>(i), 0) = 1.0;
    for (std::size_t k = 0; k < cov_cols.size(); ++k)
      X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k) + offset) = parse_number(cells[cov_cols[k]], row, cov_names[k]);
  }

  std::vector<std::string> names;
  if (schema.intercept) names.emplace_back(kInterceptName);
  names.insert(names.end(), cov_names.begin(), cov_names.end());
  return Dataset(std::move(y), std::move(X), std::move(names));
}

Dataset load_dataset(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open CSV file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str(), schema);
}

}  // namespace bsreg
