#include "shiftlat/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <iterator>
#include <map>
#include <stdexcept>

#include "shiftlat/theory.hpp"

namespace shiftlat {

std::string_view to_string(Method m) { return m == Method::sweep ? "sweep" : "grid"; }

namespace {

std::optional<MembershipInterval> p_ellipse_interval(double p, double r, double a, double b,
                                                     std::int64_t j, std::int64_t k) {
  // With t = s^p the condition reads a^p t^2 - r^p t + b^p <= 0.
  double ap, bp, rp;
  if (p == 2.0) {
    ap = a * a, bp = b * b, rp = r * r;
  } else if (p == 1.0) {
    ap = a, bp = b, rp = r;
  } else {
    ap = std::pow(a, p), bp = std::pow(b, p), rp = std::pow(r, p);
  }
  const double disc = rp * rp - 4.0 * ap * bp;
  if (disc < 0.0) return std::nullopt;
  const double root = std::sqrt(disc);
  const double t_lo = 2.0 * bp / (rp + root);
  const double t_hi = (rp + root) / (2.0 * ap);
  if (p == 2.0) return MembershipInterval{j, k, std::sqrt(t_lo), std::sqrt(t_hi)};
  if (p == 1.0) return MembershipInterval{j, k, t_lo, t_hi};
  return MembershipInterval{j, k, std::pow(t_lo, 1.0 / p), std::pow(t_hi, 1.0 / p)};
}

// Bisects between a point outside and a point inside the level set and
// returns the inside end, so the reported endpoint always counts.
double inside_edge(const RealFn& excess, double outside, double inside) {
  for (int it = 0; it < 200; ++it) {
    if (std::abs(inside - outside) <= 1e-12 * std::max(std::abs(inside), std::abs(outside))) {
      return inside;
    }
    const double mid = 0.5 * (inside + outside);
    if (mid == inside || mid == outside) return inside;
    (excess(mid) >= 0.0 ? inside : outside) = mid;
  }
  throw RootFindingError("membership_interval: no convergence after 200 iterations");
}

// Moves each endpoint inward by a few ulps until the membership test agrees;
// near a vertical tangent, rounding in s alone can push the point outside.
MembershipInterval tighten(const Curve& curve, double r, double a, double b,
                           MembershipInterval iv) {
  auto nudge = [&](double s, double toward) {
    double moved = s;
    for (int ulps = 1; ulps <= (1 << 20) && !contains(curve, r, moved, a, b); ulps *= 2) {
      moved = s;
      for (int i = 0; i < ulps && moved != toward; ++i) moved = std::nextafter(moved, toward);
    }
    return contains(curve, r, moved, a, b) ? moved : s;
  };
  const double lo = nudge(iv.s_enter, iv.s_exit);
  const double hi = nudge(iv.s_exit, iv.s_enter);
  if (lo <= hi) {
    iv.s_enter = lo;
    iv.s_exit = hi;
  }
  return iv;
}

bool is_unit_p_ellipse(const Curve& c) {
  return c.p_exponent() && c.x_intercept() == 1.0 && c.y_intercept() == 1.0;
}

}  // namespace

std::optional<MembershipInterval> membership_interval(const Curve& curve,
                                                      const ShiftedLattice& lat, double r,
                                                      std::int64_t j, std::int64_t k) {
  if (j < 1 || k < 1) throw std::invalid_argument("membership_interval: j, k must be >= 1");
  const double a = static_cast<double>(j) + lat.sigma;
  const double b = static_cast<double>(k) + lat.tau;
  if (is_unit_p_ellipse(curve)) {
    auto iv = p_ellipse_interval(*curve.p_exponent(), r, a, b, j, k);
    if (iv) iv = tighten(curve, r, a, b, *iv);
    return iv;
  }

  // (a, b) is inside r Gamma(s) iff phi(a s / r) >= a b / r^2, phi(u) = u f(u).
  const Profile& prof = curve.profile();
  if (!prof.quasiconcave) {
    throw NonQuasiconcaveError("profile u f(u) of " + curve.name() + " is not unimodal");
  }
  const double level = a * b / (r * r);
  if (level > prof.peak_value) return std::nullopt;
  const RealFn excess = [&](double u) { return u * curve.f(u) - level; };
  const double u_lo = inside_edge(excess, 0.0, prof.peak_u);
  const double u_hi = inside_edge(excess, curve.x_intercept(), prof.peak_u);
  return tighten(curve, r, a, b, MembershipInterval{j, k, u_lo * r / a, u_hi * r / a});
}

Window trivial_window(const Curve& curve, const ShiftedLattice& lat, double r) {
  return {(1.0 + lat.tau) / (r * curve.y_intercept()),
          r * curve.x_intercept() / (1.0 + lat.sigma)};
}

std::optional<Window> a_priori_window(const Curve& curve, const ShiftedLattice& lat, double r) {
  const double L = curve.x_intercept();
  const double M = curve.y_intercept();
  const double sigma = lat.sigma;
  const double tau = lat.tau;
  if (curve.concavity() != Concavity::convex) {
    if (r < (2.0 + sigma + tau) / std::sqrt(L * M)) return std::nullopt;
    return Window{(1.0 + tau) / (r * M), r * L / (1.0 + sigma)};
  }
  const double mf = mu_f(curve, sigma);
  const double mg = mu_g(curve, tau);
  if (!(mf > 0.0) || !(mg > 0.0)) return std::nullopt;
  const double threshold = std::max((2.0 + sigma) * std::sqrt(2.0 * (1.0 + tau) / (L * mf)),
                                    (2.0 + tau) * std::sqrt(2.0 * (1.0 + sigma) / (L * mg)));
  if (r < threshold) return std::nullopt;
  return Window{(2.0 + tau) / (r * L), r * L / (2.0 + sigma)};
}

namespace {

// N(r, .) vanishes identically, so every s > 0 maximizes it.
OptimalSet everything(double r, Method method) {
  OptimalSet out;
  out.r = r;
  out.method = method;
  out.max_count = 0;
  out.inf_s = 0.0;
  out.sup_s = std::numeric_limits<double>::infinity();
  out.intervals = {{out.inf_s, out.sup_s}};
  return out;
}

std::vector<MembershipInterval> collect_intervals(const Curve& curve, const ShiftedLattice& lat,
                                                  double r, bool parallel) {
  // Nonempty intervals need a b <= r^2 * peak(u f(u)).
  const double cap = r * r * curve.profile().peak_value * (1.0 + 1e-12);
  const double b1 = 1.0 + lat.tau;
  std::int64_t j_max = 0;
  while ((static_cast<double>(j_max + 1) + lat.sigma) * b1 <= cap) ++j_max;

  std::vector<std::vector<MembershipInterval>> columns(static_cast<std::size_t>(j_max));
  auto column = [&](std::size_t idx) {
    const std::int64_t j = static_cast<std::int64_t>(idx) + 1;
    const double a = static_cast<double>(j) + lat.sigma;
    auto& out = columns[idx];
    for (std::int64_t k = 1; (static_cast<double>(k) + lat.tau) * a <= cap; ++k) {
      if (auto iv = membership_interval(curve, lat, r, j, k)) out.push_back(*iv);
    }
  };
  if (parallel) {
    // Exceptions cannot cross thread boundaries; record and rethrow.
    std::vector<char> failed(columns.size(), 0);
    parallel_for(columns.size(), [&](std::size_t i) {
      try {
        column(i);
      } catch (const RootFindingError&) {
        failed[i] = 1;
      }
    });
    if (std::find(failed.begin(), failed.end(), 1) != failed.end()) {
      throw RootFindingError("membership interval computation failed");
    }
  } else {
    for (std::size_t i = 0; i < columns.size(); ++i) column(i);
  }
  std::vector<MembershipInterval> all;
  for (auto& c : columns) all.insert(all.end(), c.begin(), c.end());
  return all;
}

struct Event {
  double s;
  int delta;  // +1 entry, -1 exit
};

OptimalSet sweep_events(double r, std::vector<Event> events, std::optional<Window> clip) {
  OptimalSet out;
  out.r = r;
  out.method = Method::sweep;
  if (events.empty()) {
    if (!clip) return everything(r, Method::sweep);
    out.max_count = 0;
    out.intervals = {*clip};
    out.inf_s = clip->lo;
    out.sup_s = clip->hi;
    return out;
  }
  std::sort(events.begin(), events.end(), [](const Event& x, const Event& y) {
    return x.s < y.s || (x.s == y.s && x.delta > y.delta);
  });

  // Group endpoints closer than a relative 1e-12 so that coincident
  // endpoints computed along different floating-point paths tie.
  struct Cluster {
    double s;
    int entries = 0;
    int exits = 0;
  };
  std::vector<Cluster> clusters;
  for (const Event& e : events) {
    if (clusters.empty() || e.s > clusters.back().s * (1.0 + 1e-12)) clusters.push_back({e.s});
    (e.delta > 0 ? clusters.back().entries : clusters.back().exits) += 1;
  }

  const std::size_t n = clusters.size();
  std::vector<std::int64_t> at(n), after(n);
  std::int64_t running = 0;
  std::int64_t best = 0;
  for (std::size_t i = 0; i < n; ++i) {
    running += clusters[i].entries;
    at[i] = running;
    running -= clusters[i].exits;
    after[i] = running;
    best = std::max(best, at[i]);
  }
  out.max_count = best;

  std::optional<Window> current;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = clusters[i].s;
    if (at[i] == best) {
      if (!current) current = Window{x, x};
      current->hi = x;
      if (after[i] == best && i + 1 < n) {
        current->hi = clusters[i + 1].s;
        continue;
      }
    }
    if (current && !(after[i] == best && i + 1 < n)) {
      out.intervals.push_back(*current);
      current.reset();
    }
  }
  if (current) out.intervals.push_back(*current);
  out.inf_s = out.intervals.front().lo;
  out.sup_s = out.intervals.back().hi;
  return out;
}

}  // namespace

OptimalSet optimal_stretch_set(const Curve& curve, const ShiftedLattice& lat, double r,
                               const SweepOptions& options) {
  if (!(r > 0.0)) throw std::invalid_argument("optimal_stretch_set: r must be positive");
  const std::optional<Window> prior = a_priori_window(curve, lat, r);
  std::optional<Window> window = options.clip;
  if (!prior && !options.clip) {
    OptimalSet g = grid_scan(curve, lat, r, trivial_window(curve, lat, r), options.grid_points);
    return g.max_count == 0 ? everything(r, Method::grid) : g;
  }
  std::vector<MembershipInterval> intervals;
  try {
    intervals = collect_intervals(curve, lat, r, options.parallel);
  } catch (const RootFindingError&) {
    return grid_scan(curve, lat, r, window ? *window : trivial_window(curve, lat, r),
                     options.grid_points);
  }
  if (!window) window = prior;

  std::vector<Event> events;
  events.reserve(2 * intervals.size());
  for (const MembershipInterval& iv : intervals) {
    const double lo = std::max(iv.s_enter, window->lo);
    const double hi = std::min(iv.s_exit, window->hi);
    if (lo > hi) continue;
    events.push_back({lo, +1});
    events.push_back({hi, -1});
  }
  return sweep_events(r, std::move(events), options.clip);
}

OptimalSet grid_scan(const Curve& curve, const ShiftedLattice& lat, double r, Window window,
                     int n_points) {
  if (n_points < 2) throw std::invalid_argument("grid_scan: need at least two points");
  if (!(window.lo > 0.0) || !std::isfinite(window.hi)) {
    throw std::invalid_argument("grid_scan: invalid window");
  }
  // An empty window means the intercept conditions can never both hold.
  if (window.hi < window.lo) return everything(r, Method::grid);
  std::map<double, std::int64_t> samples;
  auto eval = [&](double s) {
    s = std::clamp(s, window.lo, window.hi);
    auto it = samples.find(s);
    if (it != samples.end()) return it->second;
    const std::int64_t n = count(curve, lat, CountQuery(r, s));
    samples.emplace(s, n);
    return n;
  };

  OptimalSet out;
  out.r = r;
  out.method = Method::grid;
  if (window.lo == window.hi) {
    out.max_count = eval(window.lo);
    out.intervals = {window};
    out.inf_s = out.sup_s = window.lo;
    return out;
  }

  const double log_lo = std::log(window.lo);
  const double span = std::log(window.hi) - log_lo;
  double step = span / (n_points - 1);
  std::vector<double> grid(n_points);
  for (int i = 0; i < n_points; ++i) grid[i] = std::exp(log_lo + step * i);
  grid.back() = window.hi;
  std::vector<std::int64_t> values(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    values[i] = count(curve, lat, CountQuery(r, grid[i]));
  });
  for (std::size_t i = 0; i < grid.size(); ++i) samples.emplace(grid[i], values[i]);

  auto current_max = [&] {
    std::int64_t m = std::numeric_limits<std::int64_t>::min();
    for (const auto& [s, n] : samples) m = std::max(m, n);
    return m;
  };

  for (int round = 0; round < 2; ++round) {
    const std::int64_t best = current_max();
    if (best == 0) break;
    // Zoom where a maximal sample borders a non-maximal one, or stands alone,
    // and around near-maximal local peaks that may hide a narrow plateau.
    std::vector<double> centers;
    for (auto it = samples.begin(); it != samples.end(); ++it) {
      const std::int64_t n = it->second;
      if (n < best - 2) continue;
      const std::int64_t left = it != samples.begin() ? std::prev(it)->second : -1;
      const std::int64_t right = std::next(it) != samples.end() ? std::next(it)->second : -1;
      if (n == best ? !(left == best && right == best) : (n >= left && n >= right)) {
        centers.push_back(it->first);
      }
    }
    const double fine = step / 10.0;
    for (double c : centers) {
      for (int m = -9; m <= 9; ++m) {
        if (m != 0) eval(c * std::exp(fine * m));
      }
    }
    step = fine;
  }

  // Plateau edges: N(r, .) is piecewise constant, so bisect between each
  // maximal sample and its non-maximal neighbour.
  const std::int64_t best = current_max();
  std::vector<std::pair<double, std::int64_t>> sorted(samples.begin(), samples.end());
  auto edge = [&](double inside, double outside) {
    for (int it = 0; it < 60; ++it) {
      const double mid = std::sqrt(inside * outside);
      if (mid == inside || mid == outside) break;
      if (count(curve, lat, CountQuery(r, mid)) == best) {
        inside = mid;
      } else {
        outside = mid;
      }
    }
    return inside;
  };
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i].second != best) continue;
    std::size_t k = i;
    while (k + 1 < sorted.size() && sorted[k + 1].second == best) ++k;
    const double lo = i > 0 ? edge(sorted[i].first, sorted[i - 1].first) : sorted[i].first;
    const double hi =
        k + 1 < sorted.size() ? edge(sorted[k].first, sorted[k + 1].first) : sorted[k].first;
    out.intervals.push_back({lo, hi});
    i = k;
  }
  out.max_count = best;
  out.inf_s = out.intervals.front().lo;
  out.sup_s = out.intervals.back().hi;
  out.resolution = std::expm1(step);
  return out;
}

}  // namespace shiftlat
