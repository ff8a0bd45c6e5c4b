#ifndef PERIOSCOPE_INGEST_HPP
#define PERIOSCOPE_INGEST_HPP

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "perioscope/basis.hpp"
#include "perioscope/harmonic.hpp"

namespace perioscope {

/// Raw scalar series with missing positions marked.
struct SeriesFile {
  std::vector<double> values;
  std::vector<bool> missing;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t lo = 0, hi = s.size();
  while (lo < hi && std::isspace(static_cast<unsigned char>(s[lo]))) ++lo;
  while (hi > lo && std::isspace(static_cast<unsigned char>(s[hi - 1]))) --hi;
  return s.substr(lo, hi - lo);
}

inline bool is_missing_token(const std::string& s) {
  return s.empty() || s == "NA" || s == "na" || s == "NaN" || s == "nan";
}

}  // namespace detail

/// One value per line; empty lines and "NA" mark missing entries. A single
/// leading non-numeric line is treated as a header and skipped.
inline SeriesFile read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  SeriesFile out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    const std::string token = detail::trim(line);
    if (detail::is_missing_token(token)) {
      if (!first || !token.empty()) {
        out.values.push_back(0.0);
        out.missing.push_back(true);
      }
      first = false;
      continue;
    }
    try {
      std::size_t pos = 0;
      const double v = std::stod(token, &pos);
      if (pos != token.size()) throw std::invalid_argument(token);
      out.values.push_back(v);
      out.missing.push_back(false);
    } catch (const std::exception&) {
      if (first) {
        first = false;
        continue;  // header line
      }
      throw std::runtime_error(path + ": cannot parse line '" + token + "'");
    }
    first = false;
  }
  if (out.values.empty()) throw std::runtime_error(path + ": no values");
  return out;
}

/// Replace each missing entry by the nearest preceding observed value.
inline std::vector<double> impute(const SeriesFile& file) {
  if (file.values.empty()) throw std::invalid_argument("impute: empty series");
  if (file.missing.size() != file.values.size())
    throw std::invalid_argument("impute: mask length mismatch");
  if (file.missing[0])
    throw std::invalid_argument("impute: value at index 0 is missing; no preceding value exists");
  std::vector<double> out(file.values.size());
  double last = file.values[0];
  for (std::size_t i = 0; i < file.values.size(); ++i) {
    if (!file.missing[i]) last = file.values[i];
    out[i] = last;
  }
  return out;
}

/// Cut a daily series into functional observations of m consecutive values.
///
/// When days_per_year is nonzero, every raw calendar year (a fixed
/// raw_year_length-day block, 365 by default) is first trimmed to
/// days_per_year values by dropping trailing days. With days_per_year = 0
/// the series is cut directly. Functions may straddle year boundaries
/// (m = 273 against 364-day years does); the trailing incomplete function
/// is dropped. Each function lives on the uniform grid u_g = (g-1)/(m-1).
inline FunctionalSample segment(const std::vector<double>& values, int m, int days_per_year,
                                int raw_year_length = 365) {
  if (m < 2) throw std::invalid_argument("segment: m must be at least 2");
  std::vector<double> trimmed;
  if (days_per_year > 0) {
    if (days_per_year > raw_year_length)
      throw std::invalid_argument("segment: days_per_year exceeds the raw year length");
    trimmed.reserve(values.size());
    for (std::size_t start = 0; start < values.size(); start += raw_year_length) {
      const std::size_t stop = std::min(values.size(), start + static_cast<std::size_t>(days_per_year));
      for (std::size_t i = start; i < stop; ++i) trimmed.push_back(values[i]);
    }
  } else {
    trimmed = values;
  }

  const int n_obs = static_cast<int>(trimmed.size()) / m;
  if (n_obs < 2)
    throw std::invalid_argument("segment: fewer than 2 complete functions of length " +
                                std::to_string(m));
  FunctionalSample sample;
  sample.grid = uniform_grid(m);
  sample.values.resize(n_obs, m);
  for (int t = 0; t < n_obs; ++t)
    for (int g = 0; g < m; ++g) sample.values(t, g) = trimmed[t * m + g];
  return sample;
}

/// A detected frequency converted to period units.
struct PeriodReport {
  double theta_hat = 0.0;
  double period_functions = 0.0;  // 2 pi / theta, in function-index units
  double period_days = 0.0;       // times m
  double period_years = 0.0;      // over days_per_year
};

inline PeriodReport period_convert(double theta_hat, int m, int days_per_year) {
  if (!(theta_hat > 0.0 && theta_hat < kPi))
    throw std::invalid_argument("period_convert: theta must lie in (0, pi)");
  PeriodReport report;
  report.theta_hat = theta_hat;
  report.period_functions = 2.0 * kPi / theta_hat;
  report.period_days = report.period_functions * m;
  report.period_years =
      days_per_year > 0 ? report.period_days / days_per_year : report.period_days / (365.0);
  return report;
}

}  // namespace perioscope

#endif  // PERIOSCOPE_INGEST_HPP
