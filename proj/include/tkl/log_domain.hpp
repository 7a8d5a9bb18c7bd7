#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>

namespace tkl {

// A positive quantity kept as its logarithm; `value` is +inf once exp(log) overflows.
struct LogValue {
  double log = -std::numeric_limits<double>::infinity();

  double value() const { return std::exp(log); }
  bool representable() const { return log < std::log(std::numeric_limits<double>::max()); }
};

struct ExpTerm {
  double coeff;
  double exponent;
};

// log(sum_i c_i exp(a_i)) for c_i >= 0, shifted by max a_i.
inline double log_sum_exp(std::initializer_list<ExpTerm> terms) {
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& t : terms) {
    if (t.coeff > 0.0) top = std::max(top, t.exponent);
  }
  if (!std::isfinite(top)) return top;
  double acc = 0.0;
  for (const auto& t : terms) {
    if (t.coeff > 0.0) acc += t.coeff * std::exp(t.exponent - top);
  }
  return top + std::log(acc);
}

// log(2 cosh x), finite for any finite x.
inline double log_two_cosh(double x) {
  const double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax));
}

// log(2 |sinh x|); -inf at x == 0.
inline double log_two_abs_sinh(double x) {
  const double ax = std::abs(x);
  if (ax == 0.0) return -std::numeric_limits<double>::infinity();
  if (ax < 0.5) return std::log(2.0 * std::sinh(ax));
  return ax + std::log1p(-std::exp(-2.0 * ax));
}

// log|e^x - 1|; -inf at x == 0.
inline double log_abs_expm1(double x) {
  if (x == 0.0) return -std::numeric_limits<double>::infinity();
  if (x > 1.0) return x + std::log1p(-std::exp(-x));
  return std::log(std::abs(std::expm1(x)));
}

// log(e^a + e^b)
inline double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (!std::isfinite(b)) return a;
  return a + std::log1p(std::exp(b - a));
}

}  // namespace tkl
