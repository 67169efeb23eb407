#include "shiftlat/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <thread>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/minima.hpp>

namespace shiftlat {

double integrate(const RealFn& fn, double a, double b, double tolerance) {
  if (!(b > a)) return 0.0;
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(fn, a, b, tolerance);
}

double integrate_smooth(const RealFn& fn, double a, double b, double tolerance) {
  if (!(b > a)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(fn, a, b, 20, tolerance);
}

Extremum minimize(const RealFn& fn, double a, double b) {
  if (b < a) std::swap(a, b);
  if (a == b) return {a, fn(a)};
  const int bits = std::numeric_limits<double>::digits / 2;
  std::uintmax_t iters = 500;
  const auto [x, v] = boost::math::tools::brent_find_minima(fn, a, b, bits, iters);
  Extremum best{x, v};
  for (double end : {a, b}) {
    const double fe = fn(end);
    if (fe < best.value) best = {end, fe};
  }
  return best;
}

Extremum maximize(const RealFn& fn, double a, double b) {
  const Extremum m = minimize([&](double x) { return -fn(x); }, a, b);
  return {m.x, -m.value};
}

double find_root(const RealFn& fn, double lo, double hi, double rel_tol, double abs_tol,
                 int max_iter) {
  double flo = fn(lo);
  double fhi = fn(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) {
    throw std::invalid_argument("find_root: no sign change on bracket");
  }
  // Plain bisection: the bracket always halves, so iteration counts are
  // predictable and results reproducible across platforms.
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) return mid;
    const double width = hi - lo;
    if (width <= abs_tol || width <= rel_tol * std::max(std::abs(lo), std::abs(hi))) {
      return mid;
    }
    const double fm = fn(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  throw RootFindingError("find_root: no convergence after " + std::to_string(max_iter) +
                         " iterations");
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(hw, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) body(i);
    });
  }
}

LinearFit ols_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("ols_fit: need at least two paired samples");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("ols_fit: degenerate abscissae");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

GrowthCheck check_growth(std::span<const double> r, std::span<const double> x, double gamma,
                         double growth) {
  if (r.size() != x.size() || r.size() < 2) {
    throw std::invalid_argument("check_growth: need at least two paired samples");
  }
  const std::size_t half = r.size() / 2;
  GrowthCheck out{0.0, 0.0, false};
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double scaled = std::abs(x[i]) / std::pow(r[i], gamma);
    double& slot = i < half ? out.first_half_max : out.second_half_max;
    slot = std::max(slot, scaled);
  }
  out.stable = out.second_half_max <= (1.0 + growth) * out.first_half_max;
  return out;
}

}  // namespace shiftlat
