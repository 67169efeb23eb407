#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "shiftlat/curves.hpp"

namespace shiftlat {

/// The positive-integer lattice translated to (N + sigma) x (N + tau).
struct ShiftedLattice {
  double sigma;
  double tau;

  ShiftedLattice(double sigma_, double tau_);
  ShiftedLattice swapped() const { return {tau, sigma}; }
};

/// Scale r and stretch s of the curve r Gamma(s) = graph of r s f(s x / r).
struct CountQuery {
  double r;
  double s;

  CountQuery(double r_, double s_);
};

/// Absolute slack on r s f(.) - tau - k so that points on the curve count.
inline constexpr double kBoundaryTolerance = 1e-9;

/// True when the shifted point (a, b) lies inside or on r Gamma(s).
bool contains(const Curve& curve, double r, double s, double a, double b);

/// N(r, s): number of shifted lattice points inside or on r Gamma(s), by
/// column summation along the shorter intercept.
std::int64_t count(const Curve& curve, const ShiftedLattice& lat, const CountQuery& q);

/// Two-dimensional enumeration oracle for `count`.
/// Throws std::invalid_argument when r * max(s, 1/s) > 1e4.
std::int64_t brute_force_count(const Curve& curve, const ShiftedLattice& lat,
                               const CountQuery& q);

/// N(r, s) for each r in the grid at fixed s.
std::vector<std::int64_t> count_batch(const Curve& curve, const ShiftedLattice& lat,
                                      std::span<const double> r_grid, double s);

using Rational = boost::multiprecision::cpp_rational;

/// Parses "3", "-1/2", "0.25" or "1e-3" into an exact rational.
Rational parse_rational(std::string_view text);

/// Exact query: shifts and the squares r^2, s^2 as rationals.
struct ExactQuery {
  Rational sigma;
  Rational tau;
  Rational r_squared;
  Rational s_squared;
};

/// Tolerance-free N(r, s) for the line (p = 1) and the quarter circle
/// (p = 2). Membership reduces to comparisons of rationals.
std::int64_t count_exact(int p, const ExactQuery& q);

}  // namespace shiftlat
