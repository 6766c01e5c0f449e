#ifndef QINFO_IO_HPP
#define QINFO_IO_HPP

// CSV reading and writing for time series, spectra, and trajectories.
// Numbers are written with 17 significant digits.

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "qinfo/detector.hpp"
#include "qinfo/errors.hpp"

namespace qinfo::io {

/// A malformed input file; `line` is 1-based.
class ParseError : public ValidationError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

inline std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_columns(std::ostream& os, const std::string& header, std::span<const double> x,
                          std::span<const double> y) {
  qinfo::detail::require<ShapeError>(x.size() == y.size(), "CSV columns differ in length");
  os << header << '\n';
  for (std::size_t i = 0; i < x.size(); ++i) os << format_number(x[i]) << ',' << format_number(y[i]) << '\n';
}

/// Header `t,value`.
inline void write_series_csv(std::ostream& os, const TimeSeries& s) {
  os << "t,value\n";
  for (std::size_t i = 0; i < s.size(); ++i) os << format_number(s.time_at(i)) << ',' << format_number(s.samples[i]) << '\n';
}

/// Header `freq_hz,psd`.
inline void write_psd_csv(std::ostream& os, const PsdEstimate& p) {
  write_columns(os, "freq_hz,psd", p.frequencies, p.densities);
}

namespace detail {

inline double parse_field(const std::string& field, std::size_t line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception&) {
    throw ParseError(line, "not a number: '" + field + "'");
  }
  while (used < field.size() && (field[used] == ' ' || field[used] == '\r')) ++used;
  if (used != field.size()) throw ParseError(line, "trailing characters in '" + field + "'");
  if (!std::isfinite(v)) throw ParseError(line, "non-finite value");
  return v;
}

}  // namespace detail

/// Reads a `t,value` file written by write_series_csv. Times must be
/// uniformly spaced; the sample rate is recovered from the spacing.
inline TimeSeries read_series_csv(std::istream& is) {
  std::string row;
  std::size_t line = 0;
  if (!std::getline(is, row)) throw ParseError(1, "empty file, expected header 't,value'");
  ++line;
  if (!row.empty() && row.back() == '\r') row.pop_back();
  if (row != "t,value") throw ParseError(line, "expected header 't,value', got '" + row + "'");

  std::vector<double> t, v;
  while (std::getline(is, row)) {
    ++line;
    if (!row.empty() && row.back() == '\r') row.pop_back();
    if (row.empty()) {
      if (is.peek() == std::char_traits<char>::eof()) break;
      throw ParseError(line, "blank line inside data");
    }
    const auto comma = row.find(',');
    if (comma == std::string::npos || row.find(',', comma + 1) != std::string::npos)
      throw ParseError(line, "expected exactly two fields");
    t.push_back(detail::parse_field(row.substr(0, comma), line));
    v.push_back(detail::parse_field(row.substr(comma + 1), line));
  }
  if (t.size() < 2) throw ParseError(line, "need at least 2 samples");

  const double step = t[1] - t[0];
  if (!(step > 0.0)) throw ParseError(3, "times must increase");
  for (std::size_t i = 2; i < t.size(); ++i)
    if (std::abs(t[i] - (t.front() + static_cast<double>(i) * step)) > 1e-6 * step)
      throw ParseError(i + 2, "sample times are not uniformly spaced");
  const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);

  double rate = 1.0 / dt;
  // Undo the last-digit drift picked up through the decimal round trip.
  if (std::abs(rate - std::round(rate)) <= 1e-9 * rate) rate = std::round(rate);
  return TimeSeries{rate, std::move(v), t.front()};
}

}  // namespace qinfo::io

#endif  // QINFO_IO_HPP
