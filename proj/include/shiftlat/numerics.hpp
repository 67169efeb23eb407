#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace shiftlat {

using RealFn = std::function<double(double)>;

/// Raised when a bracketed root search exhausts its iteration budget.
class RootFindingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive quadrature of `fn` over [a, b]. Uses tanh-sinh so integrable
/// endpoint singularities (p-circles near their intercepts) are handled.
double integrate(const RealFn& fn, double a, double b, double tolerance = 1e-12);

/// Adaptive Gauss-Kronrod quadrature, for integrands that are smooth on the
/// closed interval.
double integrate_smooth(const RealFn& fn, double a, double b, double tolerance = 1e-10);

struct Extremum {
  double x;
  double value;
};

/// Minimum of a continuous function on [a, b]: Brent search on a 3-point
/// bracket, compared against both endpoints.
Extremum minimize(const RealFn& fn, double a, double b);
Extremum maximize(const RealFn& fn, double a, double b);

/// Root of `fn` on [lo, hi] given fn(lo) and fn(hi) of opposite sign (or zero).
/// Terminates when the bracket width is below rel_tol * max(|lo|, |hi|) or
/// abs_tol. Throws RootFindingError after `max_iter` iterations and
/// std::invalid_argument when the bracket has no sign change.
double find_root(const RealFn& fn, double lo, double hi, double rel_tol = 1e-12,
                 double abs_tol = 0.0, int max_iter = 200);

/// Runs body(i) for i in [0, n) across hardware threads. Each index is
/// processed exactly once; callers write to disjoint slots so the result is
/// independent of the schedule.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

struct LinearFit {
  double slope;
  double intercept;
};

/// Ordinary least squares y = slope * x + intercept.
LinearFit ols_fit(std::span<const double> x, std::span<const double> y);

/// Empirical O(r^gamma) check: max |x|/r^gamma over the second half of the
/// grid is at most (1 + growth) times the max over the first half.
struct GrowthCheck {
  double first_half_max;
  double second_half_max;
  bool stable;
};
GrowthCheck check_growth(std::span<const double> r, std::span<const double> x, double gamma,
                         double growth = 0.2);

/// Negative part: |x| for x < 0, else 0.
inline double neg_part(double x) { return x < 0.0 ? -x : 0.0; }

}  // namespace shiftlat
