#include "shiftlat/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "shiftlat/lattice.hpp"

namespace shiftlat {

double s_star(double sigma, double tau) {
  if (!(sigma > -0.5) || !(tau > -0.5)) throw std::invalid_argument("s_star needs sigma, tau > -1/2");
  return std::sqrt((tau + 0.5) / (sigma + 0.5));
}

double bound_B(double sigma, double tau) {
  if (!(sigma > -0.5) || !(tau > -0.5)) throw std::invalid_argument("bound_B needs sigma, tau > -1/2");
  const double b = 2.0 + sigma + tau;
  const double disc = b * b - 4.0 * (sigma + 0.5) * tau;
  return (b + std::sqrt(disc)) / (2.0 * (sigma + 0.5));
}

namespace {

void require_shifts(double sigma, double tau) {
  if (!(sigma > -1.0) || !(tau > -1.0)) throw std::invalid_argument("shifts must exceed -1");
}

bool is_concave_like(const Curve& c) { return c.concavity() != Concavity::convex; }

// Point (1 - u) X / (2 - u) used by both assumptions and the constants.
double split_point(double neg, double extent) { return (1.0 - neg) * extent / (2.0 - neg); }

// min over x in [(1+shift) X/(2+shift), X] of (1+shift) h((1+shift) x/(2+shift)) - h(x).
double mu_generic(const RealFn& h, double extent, double shift) {
  if (!(shift > -1.0)) throw std::invalid_argument("shift must exceed -1");
  const double c = (1.0 + shift) / (2.0 + shift);
  auto objective = [&](double x) { return (1.0 + shift) * h(c * x) - h(x); };
  const double lo = c * extent;
  const double hi = extent;
  // Coarse scan first so a non-unimodal objective still lands in the right basin.
  constexpr int kScan = 200;
  int best_i = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kScan; ++i) {
    const double v = objective(lo + (hi - lo) * i / kScan);
    if (v < best) best = v, best_i = i;
  }
  const double a = lo + (hi - lo) * std::max(0, best_i - 1) / kScan;
  const double b = lo + (hi - lo) * std::min(kScan, best_i + 1) / kScan;
  return std::min(best, minimize(objective, a, b).value);
}

}  // namespace

double mu_f(const Curve& curve, double sigma) {
  return mu_generic([&](double x) { return curve.f(x); }, curve.x_intercept(), sigma);
}

double mu_g(const Curve& curve, double tau) {
  return mu_generic([&](double y) { return curve.g(y); }, curve.y_intercept(), tau);
}

AssumptionCheck check_assumption_A(const Curve& curve, double sigma, double tau) {
  if (!is_concave_like(curve)) throw std::invalid_argument("assumption A needs a concave curve");
  require_shifts(sigma, tau);
  const double sn = neg_part(sigma);
  const double tn = neg_part(tau);
  const double L = curve.x_intercept();
  AssumptionCheck out;
  out.lhs = std::max(curve.f(split_point(sn, L)), curve.g(split_point(tn, curve.y_intercept())));
  out.rhs = 2.0 * (0.5 - sn - tn) * L;
  out.slack = out.rhs - out.lhs;
  out.holds = out.slack > 0.0;
  return out;
}

AssumptionCheck check_assumption_B(const Curve& curve, double sigma, double tau) {
  if (curve.concavity() != Concavity::convex) {
    throw std::invalid_argument("assumption B needs a convex curve");
  }
  require_shifts(sigma, tau);
  const double sn = neg_part(sigma);
  const double tn = neg_part(tau);
  const double L = curve.x_intercept();
  AssumptionCheck out;
  out.lhs = std::min((1.0 - sn) * curve.f(split_point(sn, L)),
                     (1.0 - tn) * curve.g(split_point(tn, curve.y_intercept())));
  out.rhs = 2.0 * (sn + tn) * L;
  out.mu_f = mu_f(curve, sigma);
  out.mu_g = mu_g(curve, tau);
  out.slack = std::min({out.lhs - out.rhs, *out.mu_f, *out.mu_g});
  out.holds = out.slack > 0.0;
  return out;
}

double constant_C1(const Curve& curve, double sigma, double tau) {
  if (!is_concave_like(curve)) throw std::invalid_argument("C1 is defined for concave curves");
  const double sn = neg_part(sigma);
  const double tn = neg_part(tau);
  const double L = curve.x_intercept();
  const double M = curve.y_intercept();
  return 0.5 * (M - curve.f(split_point(sn, L))) - sn * M - tn * L;
}

double constant_C2(const Curve& curve, double sigma, double tau) {
  if (curve.concavity() != Concavity::convex) {
    throw std::invalid_argument("C2 is defined for convex curves");
  }
  const double sn = neg_part(sigma);
  const double tn = neg_part(tau);
  const double L = curve.x_intercept();
  const double M = curve.y_intercept();
  return 0.5 * (1.0 - sn) * curve.f(split_point(sn, L)) - sn * M - tn * L;
}

double concave_upper_bound(const Curve& curve, double sigma, double tau, double r, double s) {
  require_shifts(sigma, tau);
  const double sn = neg_part(sigma);
  if (!(s >= 1.0) || !(r >= (1.0 - sn) * s / curve.x_intercept())) {
    throw std::invalid_argument("concave_upper_bound: need s >= 1 and r >= (1 - sigma^-) s / L");
  }
  return r * r * curve.area() - constant_C1(curve, sigma, tau) * r * s + sn * neg_part(tau);
}

double convex_upper_bound(const Curve& curve, double sigma, double tau, double r, double s) {
  require_shifts(sigma, tau);
  const double sn = neg_part(sigma);
  if (!(s >= 1.0) || !(r >= (2.0 - sn) * s / curve.x_intercept())) {
    throw std::invalid_argument("convex_upper_bound: need s >= 1 and r >= (2 - sigma^-) s / L");
  }
  return r * r * curve.area() - constant_C2(curve, sigma, tau) * r * s + sn * neg_part(tau);
}

double rough_lower_bound(const Curve& curve, double sigma, double tau, double r, double s) {
  require_shifts(sigma, tau);
  return r * r * curve.area() -
         r * ((1.0 + tau) * curve.x_intercept() / s + s * (1.0 + sigma) * curve.y_intercept());
}

Prediction two_term_prediction(const Curve& curve, double sigma, double tau, double r, double s) {
  const double value =
      r * r * curve.area() -
      r * ((tau + 0.5) * curve.x_intercept() / s + s * (sigma + 0.5) * curve.y_intercept());
  return {value, curve.regularity().has_value()};
}

double max_count_asymptotic(const Curve& curve, double sigma, double tau, double r) {
  const double L = curve.x_intercept();
  if (std::abs(L - curve.y_intercept()) > 1e-12 * L) {
    throw std::invalid_argument("max_count_asymptotic needs equal intercepts");
  }
  if (!(sigma > -0.5) || !(tau > -0.5)) {
    throw std::invalid_argument("max_count_asymptotic needs sigma, tau > -1/2");
  }
  return r * r * curve.area() - 2.0 * r * L * std::sqrt((sigma + 0.5) * (tau + 0.5));
}

double RemainderTerms::total() const {
  return curvature + endpoint + partition + slope + truncation + pieces + shift + ratio;
}

RemainderTerms certified_remainder_rhs(const Curve& curve, double sigma, double tau, double r,
                                       double s) {
  require_shifts(sigma, tau);
  if (!curve.regularity()) {
    throw std::invalid_argument("certified remainder needs regularity data for " + curve.name());
  }
  const Regularity& reg = *curve.regularity();
  if (reg.alpha_partition.size() < 2 || reg.beta_partition.size() < 2 || !reg.delta ||
      !reg.epsilon) {
    throw std::invalid_argument("incomplete regularity data for " + curve.name());
  }
  const bool convex = curve.concavity() == Concavity::convex;
  const double L = curve.x_intercept();
  const double M = curve.y_intercept();
  const double delta = reg.delta(r);
  const double eps = reg.epsilon(r);
  const double sqrt_r = std::sqrt(r);
  const double s_m32 = std::pow(s, -1.5);
  const double s_p32 = std::pow(s, 1.5);
  auto cube_root_abs = [](const RealFn& h) {
    return [&h](double x) { return std::cbrt(std::abs(h(x))); };
  };
  const RealFn d2f = [&](double x) { return curve.d2f(x); };
  const RealFn d2g = [&](double y) { return curve.d2g(y); };
  const std::size_t l = reg.alpha_partition.size() - 1;
  const std::size_t m = reg.beta_partition.size() - 1;

  RemainderTerms t;
  if (!convex) {
    t.curvature = 6.0 * std::cbrt(r * r) *
                  (integrate(cube_root_abs(d2f), 0.0, reg.alpha, 1e-10) +
                   integrate(cube_root_abs(d2g), 0.0, reg.beta, 1e-10));
    t.endpoint = 175.0 * sqrt_r *
                 (s_m32 / std::sqrt(std::abs(curve.d2f(delta))) +
                  s_p32 / std::sqrt(std::abs(curve.d2g(eps))));
  } else {
    t.curvature = 6.0 * std::cbrt(r * r) *
                  (integrate(cube_root_abs(d2f), reg.alpha, L, 1e-10) +
                   integrate(cube_root_abs(d2g), reg.beta, M, 1e-10));
    t.endpoint = 175.0 * sqrt_r *
                 (s_m32 / std::sqrt(std::abs(curve.d2f(L - delta))) +
                  s_p32 / std::sqrt(std::abs(curve.d2g(M - eps))));
  }
  // Concave sums run over the points 1..l of the partition, convex sums
  // over 0..l-1 (the points away from the intercept singularity).
  const std::size_t first = convex ? 0 : 1;
  double sum_f = 0.0, sum_g = 0.0, slope_f = 0.0, slope_g = 0.0;
  for (std::size_t i = first; i < first + l; ++i) {
    const double x = reg.alpha_partition[i];
    sum_f += s_m32 / std::sqrt(std::abs(curve.d2f(x)));
    slope_f += s * s * std::abs(curve.df(x));
  }
  for (std::size_t j = first; j < first + m; ++j) {
    const double y = reg.beta_partition[j];
    sum_g += s_p32 / std::sqrt(std::abs(curve.d2g(y)));
    slope_g += std::abs(curve.dg(y)) / (s * s);
  }
  t.partition = (convex ? 700.0 : 525.0) * sqrt_r * (sum_f + sum_g);
  t.slope = 0.25 * (slope_f + slope_g);
  t.truncation = 0.5 * r * (delta / s + s * eps);
  t.pieces = static_cast<double>(l + m);
  t.shift = 0.5 * (1.0 + sigma) + 0.5 * (1.0 + tau) + (1.0 + sigma) * (1.0 + tau) +
            (convex ? 5.0 : 1.0);
  if (convex) {
    const double l_new = r / s * curve.g((1.0 + tau) / (r * s)) - (1.0 + sigma);
    const double m_new = r * s * curve.f((1.0 + sigma) * s / r) - (1.0 + tau);
    t.ratio = l_new / m_new + m_new / l_new;
  }
  return t;
}

RemainderCheck certified_remainder_check(const Curve& curve, double sigma, double tau, double r,
                                         double s) {
  const double rhs = certified_remainder_rhs(curve, sigma, tau, r, s).total();
  const double x0 = (1.0 + sigma) * s / r;
  const double y0 = (1.0 + tau) / (r * s);
  const double F = integrate([&](double x) { return curve.f(x); }, 0.0, x0, 1e-12);
  const double G = integrate([&](double y) { return curve.g(y); }, 0.0, y0, 1e-12);
  const double fx = curve.f(x0);
  const double gy = curve.g(y0);
  const double main = r * r * curve.area() - r * r * (F + G) - 0.5 * r * (s * fx + gy / s);

  const auto n = static_cast<double>(count(curve, ShiftedLattice(sigma, tau), CountQuery(r, s)));
  const double column = r * s * fx - tau;
  const double row = r / s * gy - sigma;
  const double inner_exact = n - std::floor(column) - std::floor(row) + 1.0;
  double worst = 0.0;
  for (double rho : {1.0, 3.0}) worst = std::max(worst, std::abs(n - column - row + rho - main));

  RemainderCheck out;
  out.lhs_exact = std::abs(inner_exact - main);
  out.lhs_worst = worst;
  out.rhs = rhs;
  out.holds = worst <= rhs;
  return out;
}

double assumption_slack(const Curve& curve, double sigma, double tau) {
  return is_concave_like(curve) ? check_assumption_A(curve, sigma, tau).slack
                                : check_assumption_B(curve, sigma, tau).slack;
}

std::vector<std::pair<double, double>> allowable_region_boundary(const Curve& curve,
                                                                 SolveFor solve,
                                                                 std::span<const double> grid) {
  constexpr double kLo = -0.999;
  constexpr double kHi = 0.0;
  std::vector<std::pair<double, double>> slots(grid.size());
  std::vector<char> found(grid.size(), 0);
  parallel_for(grid.size(), [&](std::size_t i) {
    const double fixed = grid[i];
    auto slack = [&](double x) {
      return solve == SolveFor::sigma ? assumption_slack(curve, x, fixed)
                                      : assumption_slack(curve, fixed, x);
    };
    const double a = slack(kLo);
    const double b = slack(kHi);
    if ((a < 0.0) == (b < 0.0)) return;
    const double root = find_root(slack, kLo, kHi, 0.0, 1e-8, 200);
    slots[i] = solve == SolveFor::sigma ? std::pair{root, fixed} : std::pair{fixed, root};
    found[i] = 1;
  });
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (found[i]) out.push_back(slots[i]);
  }
  if (out.empty()) throw std::runtime_error("allowable_region_boundary: no sign change on grid");
  return out;
}

double diagonal_boundary(const Curve& curve) {
  return find_root([&](double u) { return assumption_slack(curve, u, u); }, -0.999, 0.0, 0.0,
                   1e-13, 200);
}

bool square_completion_bound(double a, double b, double s, double t) {
  if (!(a > 0.0) || !(b > 0.0) || !(s > 0.0) || !(t >= 0.0) || t > std::sqrt(a * b)) {
    throw std::invalid_argument("square_completion_bound: need a, b, s > 0 and 0 <= t <= sqrt(ab)");
  }
  const double root_ab = std::sqrt(a * b);
  if (!(a / s + s * b <= 2.0 * root_ab + t)) return true;
  const double centre = std::sqrt(a / b);
  // Rounding allowance of a few ulps at the scale of s.
  const double ulp = 8.0 * std::numeric_limits<double>::epsilon() * std::max(s, centre);
  return std::abs(s - centre) <= 3.0 * std::sqrt(root_ab) * std::sqrt(t) / b + ulp;
}

double exponent_E(const Regularity& reg) {
  return std::min({1.0 / 6.0, reg.a1, reg.a2, reg.a3, reg.b1, reg.b2, reg.b3});
}

double exponent_Q(const Regularity& reg, double q) {
  return std::max({2.0 / 3.0, 0.5 + 1.5 * q, 1.0 - 2.0 * reg.a1 + q, 1.0 - 2.0 * reg.a2 + 1.5 * q,
                   1.0 - 2.0 * reg.b1 + q, 1.0 - 2.0 * reg.b2 + 1.5 * q});
}

TheoryReport theory_report(const Curve& curve, double sigma, double tau, double q) {
  require_shifts(sigma, tau);
  TheoryReport rep;
  if (is_concave_like(curve)) {
    rep.C1 = constant_C1(curve, sigma, tau);
    rep.assumption_A_holds = check_assumption_A(curve, sigma, tau).holds;
  } else {
    rep.C2 = constant_C2(curve, sigma, tau);
    const AssumptionCheck b = check_assumption_B(curve, sigma, tau);
    rep.assumption_B_holds = b.holds;
    rep.mu_f = b.mu_f;
    rep.mu_g = b.mu_g;
  }
  if (sigma > -0.5 && tau > -0.5) {
    rep.B_sigma_tau = bound_B(sigma, tau);
    rep.B_tau_sigma = bound_B(tau, sigma);
    rep.s_star = s_star(sigma, tau);
  }
  if (curve.regularity()) {
    rep.Q = exponent_Q(*curve.regularity(), q);
    rep.E = exponent_E(*curve.regularity());
  }
  return rep;
}

}  // namespace shiftlat
