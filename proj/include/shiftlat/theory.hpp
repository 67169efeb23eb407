#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "shiftlat/curves.hpp"

namespace shiftlat {

/// Balanced stretch sqrt((tau + 1/2) / (sigma + 1/2)). Requires sigma, tau > -1/2.
double s_star(double sigma, double tau);

/// Larger root of (sigma + 1/2) x^2 - (2 + sigma + tau) x + tau = 0; S(r)
/// eventually lies in [1/B(tau, sigma), B(sigma, tau)].
double bound_B(double sigma, double tau);

/// Outcome of a parameter-assumption check. `slack` is positive iff the
/// assumption holds; for the convex case it is the smallest of the three
/// margins (first inequality, mu_f, mu_g).
struct AssumptionCheck {
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  std::optional<double> mu_f;
  std::optional<double> mu_g;
};

/// Concave case: max{f(xs), g(ys)} < 2 (1/2 - sigma^- - tau^-) L with
/// xs = (1 - sigma^-) L / (2 - sigma^-), ys likewise with tau and M.
AssumptionCheck check_assumption_A(const Curve& curve, double sigma, double tau);

/// Convex case: min{(1 - sigma^-) f(xs), (1 - tau^-) g(ys)} > 2 (sigma^- + tau^-) L,
/// mu_f(sigma) > 0 and mu_g(tau) > 0.
AssumptionCheck check_assumption_B(const Curve& curve, double sigma, double tau);

/// min over x in [(1+sigma) L / (2+sigma), L] of (1+sigma) f((1+sigma) x / (2+sigma)) - f(x).
double mu_f(const Curve& curve, double sigma);
/// Same quantity for g on [0, M].
double mu_g(const Curve& curve, double tau);

double constant_C1(const Curve& curve, double sigma, double tau);
double constant_C2(const Curve& curve, double sigma, double tau);

/// r^2 Area - C1 r s + sigma^- tau^-, valid for s >= 1 and r >= (1 - sigma^-) s / L.
/// Throws std::invalid_argument outside that range or for non-concave curves.
double concave_upper_bound(const Curve& curve, double sigma, double tau, double r, double s);

/// r^2 Area - C2 r s + sigma^- tau^-, valid for s >= 1 and r >= (2 - sigma^-) s / L.
double convex_upper_bound(const Curve& curve, double sigma, double tau, double r, double s);

/// r^2 Area - r (s^-1 (1+tau) L + s (1+sigma) M); never exceeds N(r, s).
double rough_lower_bound(const Curve& curve, double sigma, double tau, double r, double s);

struct Prediction {
  double value;
  bool verified;  // false when the curve carries no regularity data
};

/// r^2 Area - r (s^-1 (tau+1/2) L + s (sigma+1/2) M).
Prediction two_term_prediction(const Curve& curve, double sigma, double tau, double r, double s);

/// r^2 Area - 2 r L sqrt((sigma+1/2)(tau+1/2)). Requires L = M and sigma, tau > -1/2.
double max_count_asymptotic(const Curve& curve, double sigma, double tau, double r);

/// Individual summands of the explicit two-term remainder bound.
struct RemainderTerms {
  double curvature = 0.0;   // 6 r^{2/3} (int |f''|^{1/3} + int |g''|^{1/3})
  double endpoint = 0.0;    // 175 r^{1/2} (...) at delta(r), epsilon(r)
  double partition = 0.0;   // 525 (concave) or 700 (convex) r^{1/2} sums over partition points
  double slope = 0.0;       // 1/4 (sum s^2 |f'| + sum s^-2 |g'|)
  double truncation = 0.0;  // r/2 (s^-1 delta + s epsilon)
  double pieces = 0.0;      // l + m
  double shift = 0.0;       // (1+sigma)/2 + (1+tau)/2 + (1+sigma)(1+tau) + 1 (or + 5)
  double ratio = 0.0;       // convex only: the two intercept ratios
  double total() const;
};

RemainderTerms certified_remainder_rhs(const Curve& curve, double sigma, double tau, double r,
                                       double s);

/// Left side of the explicit remainder inequality, reassembled from N(r, s).
struct RemainderCheck {
  double lhs_exact;  // first row and column removed by their exact floor counts
  double lhs_worst;  // max over rho in {1, 3} of the rho-parametrized form
  double rhs;
  bool holds;        // lhs_worst <= rhs
};

RemainderCheck certified_remainder_check(const Curve& curve, double sigma, double tau, double r,
                                         double s);

/// Which shift the boundary solver bisects for; the grid supplies the other.
enum class SolveFor { sigma, tau };

/// Boundary of the parameter assumption (A for concave or line curves, B for
/// convex ones) as (sigma, tau) points. For each grid value the solved shift
/// is bisected on [-0.999, 0] to 1e-8; grid values without a sign change are
/// skipped. Throws std::runtime_error when no grid value brackets a root.
std::vector<std::pair<double, double>> allowable_region_boundary(const Curve& curve,
                                                                 SolveFor solve,
                                                                 std::span<const double> grid);

/// Boundary point on the diagonal sigma = tau.
double diagonal_boundary(const Curve& curve);

/// Slack of the applicable assumption at (sigma, tau); positive iff it holds.
double assumption_slack(const Curve& curve, double sigma, double tau);

/// If s^-1 a + s b <= 2 sqrt(ab) + t then |s - sqrt(a/b)| <= 3 (ab)^{1/4} sqrt(t) / b.
/// Returns false only when the antecedent holds and the consequent fails.
/// Requires a, b, s > 0 and 0 <= t <= sqrt(ab).
bool square_completion_bound(double a, double b, double s, double t);

/// min{1/6, a1, a2, a3, b1, b2, b3}.
double exponent_E(const Regularity& reg);

/// max{2/3, 1/2 + 3q/2, 1 - 2 a1 + q, 1 - 2 a2 + 3q/2, 1 - 2 b1 + q, 1 - 2 b2 + 3q/2},
/// where s + 1/s = O(r^q).
double exponent_Q(const Regularity& reg, double q = 0.0);

struct TheoryReport {
  std::optional<double> C1, C2;
  std::optional<double> mu_f, mu_g;
  std::optional<double> B_sigma_tau, B_tau_sigma;
  std::optional<double> s_star;
  bool assumption_A_holds = false;
  bool assumption_B_holds = false;
  std::optional<double> Q, E;
};

TheoryReport theory_report(const Curve& curve, double sigma, double tau, double q = 0.0);

}  // namespace shiftlat
