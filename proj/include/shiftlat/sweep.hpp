#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "shiftlat/curves.hpp"
#include "shiftlat/lattice.hpp"

namespace shiftlat {

/// Raised when the profile of a general curve has more than one local
/// maximum, so membership in r Gamma(s) need not be an interval in s.
class NonQuasiconcaveError : public RootFindingError {
 public:
  using RootFindingError::RootFindingError;
};

/// Closed range of stretch factors for which the point (j+sigma, k+tau) lies
/// inside or on r Gamma(s).
struct MembershipInterval {
  std::int64_t j;
  std::int64_t k;
  double s_enter;
  double s_exit;
};

std::optional<MembershipInterval> membership_interval(const Curve& curve,
                                                      const ShiftedLattice& lat, double r,
                                                      std::int64_t j, std::int64_t k);

struct Window {
  double lo;
  double hi;
};

enum class Method { sweep, grid };
std::string_view to_string(Method m);

/// The maximizing set S(r) as a union of disjoint closed intervals.
struct OptimalSet {
  double r = 0.0;
  std::vector<Window> intervals;
  std::int64_t max_count = 0;
  double sup_s = 0.0;
  double inf_s = 0.0;
  Method method = Method::sweep;
  double resolution = 0.0;  // relative grid step for Method::grid, 0 for sweep
};

/// A priori window containing S(r), or nullopt when r is below the
/// threshold of the applicable bound (concave/line or convex case).
std::optional<Window> a_priori_window(const Curve& curve, const ShiftedLattice& lat, double r);

/// Window outside of which N(r, s) = 0.
Window trivial_window(const Curve& curve, const ShiftedLattice& lat, double r);

struct SweepOptions {
  /// Restrict the argmax to this window; used to maximize over a
  /// prescribed range of s instead of all s > 0.
  std::optional<Window> clip;
  /// Parallelize the per-point interval computation.
  bool parallel = true;
  /// Points on the initial grid when falling back to grid_scan.
  int grid_points = 10000;
};

/// Exact S(r) by sweeping the endpoints of all nonempty membership
/// intervals. Falls back to grid_scan (method = grid) below the window
/// threshold or when membership is not an interval for some point.
OptimalSet optimal_stretch_set(const Curve& curve, const ShiftedLattice& lat, double r,
                               const SweepOptions& options = {});

/// Approximate S(r) over `window`: geometric grid of n_points, two rounds of
/// 10x zoom around every argmax and near-maximal local peak, then bisection
/// of the plateau edges.
OptimalSet grid_scan(const Curve& curve, const ShiftedLattice& lat, double r, Window window,
                     int n_points);

}  // namespace shiftlat
