#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shiftlat/numerics.hpp"

namespace shiftlat {

enum class Concavity { concave, convex, line };

std::string_view to_string(Concavity c);

/// Smoothness data for the two-term counting estimates.
///
/// `alpha_partition` holds the full partition of the smooth arc of f:
/// for concave curves 0 = alpha_0 < ... < alpha_l = alpha, for convex curves
/// alpha = alpha_0 < ... < alpha_l = L. f'' is monotonic on each piece.
/// `beta_partition` is the same for g.
struct Regularity {
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<double> alpha_partition;
  std::vector<double> beta_partition;
  double a1 = 0.0, a2 = 0.0, a3 = 0.5;
  double b1 = 0.0, b2 = 0.0, b3 = 0.5;
  RealFn delta;    // delta(r)
  RealFn epsilon;  // epsilon(r)
};

/// Peak of the scale-free profile phi(u) = u f(u) on [0, L].
///
/// The point (a, b) lies inside r Gamma(s) iff phi(a s / r) >= a b / r^2, so
/// every membership question reduces to a level set of phi.
struct Profile {
  double peak_u = 0.0;
  double peak_value = 0.0;
  bool quasiconcave = true;
};

/// A strictly decreasing first-quadrant curve y = f(x), x in [0, L], with
/// inverse g on [0, M]. Immutable; copies share the underlying functions.
class Curve {
 public:
  struct Functions {
    RealFn f, g;
    RealFn df, d2f;  // f', f''
    RealFn dg, d2g;  // g', g''
  };

  Curve(std::string name, Functions fns, double L, double M, double area, Concavity concavity,
        std::optional<Regularity> regularity = std::nullopt,
        std::optional<double> p_exponent = std::nullopt);

  const std::string& name() const { return state_->name; }
  double f(double x) const { return state_->fns.f(x); }
  double g(double y) const { return state_->fns.g(y); }
  double df(double x) const { return state_->fns.df(x); }
  double d2f(double x) const { return state_->fns.d2f(x); }
  double dg(double y) const { return state_->fns.dg(y); }
  double d2g(double y) const { return state_->fns.d2g(y); }

  double x_intercept() const { return state_->L; }
  double y_intercept() const { return state_->M; }
  double area() const { return state_->area; }
  Concavity concavity() const { return state_->concavity; }
  const std::optional<Regularity>& regularity() const { return state_->regularity; }

  /// Set for p-circles; enables closed-form membership intervals.
  std::optional<double> p_exponent() const { return state_->p; }

  const Profile& profile() const { return state_->profile; }

  /// Reflection across y = x: f and g swap roles, as do L and M.
  Curve transposed() const;

 private:
  struct State {
    std::string name;
    Functions fns;
    double L, M, area;
    Concavity concavity;
    std::optional<Regularity> regularity;
    std::optional<double> p;
    Profile profile;
  };
  explicit Curve(std::shared_ptr<const State> state) : state_(std::move(state)) {}
  std::shared_ptr<const State> state_;
};

/// Quarter p-circle x^p + y^p = 1, p > 0.
Curve make_p_ellipse(double p);

/// Exact area of the quarter p-circle, Gamma(1+1/p)^2 / Gamma(1+2/p).
double p_ellipse_area(double p);

/// Concave curve f(x) = 1 - delta x^2 - (1-delta) x^{2m} whose optimal
/// stretch factors degenerate for horizontal shift sigma.
struct DegenerateCurveParams {
  double sigma;
  int m;
  double delta;

  double f(double x) const;
  double area() const;
};

DegenerateCurveParams make_degenerate_curve(double sigma);
Curve to_curve(const DegenerateCurveParams& params);

/// Options for building a curve from an arbitrary decreasing function.
struct GraphOptions {
  std::optional<Concavity> concavity;  // inferred from chord tests when empty
  RealFn df, d2f;                      // central differences when empty
  std::optional<Regularity> regularity;
};

/// Curve from a closed-form decreasing f on [0, L]. g is obtained by
/// bisection to 1e-12; the area by adaptive quadrature.
Curve make_graph_curve(std::string name, RealFn f, double L, GraphOptions options = {});

/// Curve from samples (x_i, f(x_i)) with x_0 = 0, strictly increasing x and
/// strictly decreasing f, f(x_last) = 0. Linear interpolation between samples.
Curve make_graph_curve(std::string name, std::vector<std::pair<double, double>> samples,
                       GraphOptions options = {});

/// Reads `x,f(x)` CSV (optional header line) and builds a sampled curve.
Curve load_graph_csv(const std::filesystem::path& path);

/// Parses `key=value` tokens separated by whitespace.
std::map<std::string, std::string> parse_key_values(std::string_view text);

/// Builds a curve from a descriptor such as `curve=p-ellipse p=2`,
/// `curve=degenerate sigma=-0.5` or `curve=graph file=path.csv`.
Curve parse_curve_descriptor(std::string_view descriptor);

}  // namespace shiftlat
