#include "avgq/span.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace avgq {

namespace {

struct MinMax {
  double lo;
  double hi;
};

MinMax scan(std::span<const double> x, const char* who) {
  if (x.empty()) {
    throw std::invalid_argument(std::string(who) + ": empty vector");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument(std::string(who) + ": non-finite entry");
    }
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

void check_same_length(std::span<const double> x, std::span<const double> y, const char* who) {
  if (x.size() != y.size()) {
    throw std::invalid_argument(std::string(who) + ": length mismatch (" +
                                std::to_string(x.size()) + " vs " + std::to_string(y.size()) + ")");
  }
}

}  // namespace

double span(std::span<const double> x) {
  auto [lo, hi] = scan(x, "span");
  return (hi - lo) / 2.0;
}

double center_offset(std::span<const double> x) {
  auto [lo, hi] = scan(x, "center_offset");
  return (hi + lo) / 2.0;
}

void center_in_place(std::vector<double>& x) {
  const double c = center_offset(x);
  for (double& v : x) v -= c;
}

std::vector<double> centered(std::vector<double> x) {
  center_in_place(x);
  return x;
}

double sup_norm(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("sup_norm: empty vector");
  double m = 0.0;
  for (double v : x) {
    if (!std::isfinite(v)) throw std::invalid_argument("sup_norm: non-finite entry");
    m = std::max(m, std::abs(v));
  }
  return m;
}

double sup_dist(std::span<const double> x, std::span<const double> y) {
  check_same_length(x, y, "sup_dist");
  if (x.empty()) throw std::invalid_argument("sup_dist: empty vector");
  double m = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    if (!std::isfinite(d)) throw std::invalid_argument("sup_dist: non-finite entry");
    m = std::max(m, std::abs(d));
  }
  return m;
}

double span_dist(std::span<const double> x, std::span<const double> y) {
  check_same_length(x, y, "span_dist");
  if (x.empty()) throw std::invalid_argument("span_dist: empty vector");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    if (!std::isfinite(d)) throw std::invalid_argument("span_dist: non-finite entry");
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return (hi - lo) / 2.0;
}

}  // namespace avgq
