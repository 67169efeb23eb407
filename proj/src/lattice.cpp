#include "shiftlat/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace shiftlat {

ShiftedLattice::ShiftedLattice(double sigma_, double tau_) : sigma(sigma_), tau(tau_) {
  if (!(sigma > -1.0) || !(tau > -1.0) || !std::isfinite(sigma) || !std::isfinite(tau)) {
    throw std::invalid_argument("lattice shifts must satisfy sigma, tau > -1");
  }
}

CountQuery::CountQuery(double r_, double s_) : r(r_), s(s_) {
  if (!(r > 0.0) || !(s > 0.0) || !std::isfinite(r) || !std::isfinite(s)) {
    throw std::invalid_argument("count query needs finite r > 0 and s > 0");
  }
}

bool contains(const Curve& curve, double r, double s, double a, double b) {
  const double x = a * s / r;
  if (x > curve.x_intercept()) return false;
  return b <= r * s * curve.f(x) + kBoundaryTolerance;
}

namespace {

// Sum over columns a = j + shift of floor(height(a) - other_shift + tol).
template <class Height>
std::int64_t column_sum(double shift, double other_shift, double extent, Height height) {
  std::int64_t total = 0;
  for (std::int64_t j = 1;; ++j) {
    const double a = static_cast<double>(j) + shift;
    if (a >= extent) break;
    const double h = height(a) - other_shift + kBoundaryTolerance;
    if (h < 1.0) {
      // Heights decrease with a, so no later column contributes either.
      break;
    }
    total += static_cast<std::int64_t>(std::floor(h));
  }
  return total;
}

}  // namespace

std::int64_t count(const Curve& curve, const ShiftedLattice& lat, const CountQuery& q) {
  const double r = q.r;
  const double s = q.s;
  const double L = curve.x_intercept();
  const double M = curve.y_intercept();
  const double x_extent = r * L / s;
  const double y_extent = r * s * M;
  if (x_extent <= 1.0 + lat.sigma || y_extent <= 1.0 + lat.tau) return 0;

  if (x_extent <= y_extent) {
    return column_sum(lat.sigma, lat.tau, x_extent,
                      [&](double a) { return r * s * curve.f(a * s / r); });
  }
  // Rows: j + sigma <= (r/s) g((k + tau) / (r s)).
  return column_sum(lat.tau, lat.sigma, y_extent,
                    [&](double b) { return r / s * curve.g(b / (r * s)); });
}

std::int64_t brute_force_count(const Curve& curve, const ShiftedLattice& lat,
                               const CountQuery& q) {
  if (q.r * std::max(q.s, 1.0 / q.s) > 1e4) {
    throw std::invalid_argument("brute_force_count: r * max(s, 1/s) exceeds 1e4");
  }
  const double x_extent = q.r * curve.x_intercept() / q.s;
  const double y_extent = q.r * q.s * curve.y_intercept();
  std::int64_t n = 0;
  for (std::int64_t j = 1; static_cast<double>(j) + lat.sigma <= x_extent; ++j) {
    const double a = static_cast<double>(j) + lat.sigma;
    for (std::int64_t k = 1; static_cast<double>(k) + lat.tau <= y_extent; ++k) {
      if (contains(curve, q.r, q.s, a, static_cast<double>(k) + lat.tau)) ++n;
    }
  }
  return n;
}

std::vector<std::int64_t> count_batch(const Curve& curve, const ShiftedLattice& lat,
                                      std::span<const double> r_grid, double s) {
  if (r_grid.empty()) throw std::invalid_argument("count_batch: empty r grid");
  for (double r : r_grid) {
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("count_batch: bad r");
  }
  std::vector<std::int64_t> out(r_grid.size());
  parallel_for(r_grid.size(), [&](std::size_t i) {
    out[i] = count(curve, lat, CountQuery(r_grid[i], s));
  });
  return out;
}

Rational parse_rational(std::string_view text) {
  std::string t(text);
  if (t.empty()) throw std::invalid_argument("empty rational");
  const auto slash = t.find('/');
  if (slash != std::string::npos) {
    const boost::multiprecision::cpp_int num(t.substr(0, slash));
    const boost::multiprecision::cpp_int den(t.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    return Rational(num, den);
  }
  // Decimal with optional exponent.
  bool negative = false;
  std::size_t pos = 0;
  if (t[0] == '-' || t[0] == '+') {
    negative = t[0] == '-';
    pos = 1;
  }
  boost::multiprecision::cpp_int digits = 0;
  boost::multiprecision::cpp_int scale = 1;
  bool seen_point = false;
  bool seen_digit = false;
  int exponent = 0;
  for (; pos < t.size(); ++pos) {
    const char c = t[pos];
    if (c >= '0' && c <= '9') {
      digits = digits * 10 + (c - '0');
      if (seen_point) scale *= 10;
      seen_digit = true;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else if ((c == 'e' || c == 'E') && seen_digit) {
      exponent = std::stoi(t.substr(pos + 1));
      pos = t.size();
      break;
    } else {
      throw std::invalid_argument("not a rational: '" + t + "'");
    }
  }
  if (!seen_digit) throw std::invalid_argument("not a rational: '" + t + "'");
  Rational value(digits, scale);
  boost::multiprecision::cpp_int ten_pow = 1;
  for (int i = 0; i < std::abs(exponent); ++i) ten_pow *= 10;
  value = exponent >= 0 ? value * Rational(ten_pow) : value / Rational(ten_pow);
  return negative ? Rational(-value) : value;
}

namespace {

// a^2 s^4 + b^2 <= r^2 s^2 (circle) or (b + a s^2)^2 <= r^2 s^2 (line),
// both the inside-or-on condition multiplied through by s^2 > 0.
bool exact_inside(int p, const Rational& a, const Rational& b, const ExactQuery& q,
                  const Rational& r2s2) {
  if (p == 2) return a * a * q.s_squared * q.s_squared + b * b <= r2s2;
  const Rational lhs = b + a * q.s_squared;
  return lhs * lhs <= r2s2;
}

}  // namespace

std::int64_t count_exact(int p, const ExactQuery& q) {
  if (p != 1 && p != 2) throw std::invalid_argument("count_exact supports p = 1 and p = 2");
  if (q.sigma <= -1 || q.tau <= -1 || q.r_squared <= 0 || q.s_squared <= 0) {
    throw std::invalid_argument("count_exact: invalid query");
  }
  const Rational r2s2 = q.r_squared * q.s_squared;
  const double r = std::sqrt(static_cast<double>(q.r_squared));
  const double s = std::sqrt(static_cast<double>(q.s_squared));
  const double tau = static_cast<double>(q.tau);
  std::int64_t total = 0;
  for (std::int64_t j = 1;; ++j) {
    const Rational a = Rational(j) + q.sigma;
    const Rational k1 = Rational(1) + q.tau;
    if (!exact_inside(p, a, k1, q, r2s2)) break;
    // Floating estimate of the column height, then exact correction.
    const double ad = static_cast<double>(a);
    const double bmax = p == 2 ? std::sqrt(std::max(0.0, r * r * s * s - ad * ad * s * s * s * s))
                               : r * s - ad * s * s;
    std::int64_t k = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(bmax - tau)));
    while (k > 1 && !exact_inside(p, a, Rational(k) + q.tau, q, r2s2)) --k;
    while (exact_inside(p, a, Rational(k + 1) + q.tau, q, r2s2)) ++k;
    total += k;
  }
  return total;
}

}  // namespace shiftlat
