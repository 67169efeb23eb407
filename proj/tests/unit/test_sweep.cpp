#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "shiftlat/sweep.hpp"
#include "shiftlat/theory.hpp"

using namespace shiftlat;

namespace {

// Maximum of N(r, s) over a geometric grid plus the given extra points.
std::int64_t grid_max(const Curve& c, const ShiftedLattice& lat, double r, Window w, int n,
                      const std::vector<double>& extra) {
  std::int64_t best = 0;
  const double step = std::log(w.hi / w.lo) / (n - 1);
  for (int i = 0; i < n; ++i) best = std::max(best, count(c, lat, {r, w.lo * std::exp(step * i)}));
  for (double s : extra) best = std::max(best, count(c, lat, {r, s}));
  return best;
}

void check_set_invariants(const Curve& c, const ShiftedLattice& lat, const OptimalSet& set) {
  REQUIRE_FALSE(set.intervals.empty());
  CHECK(set.inf_s == set.intervals.front().lo);
  CHECK(set.sup_s == set.intervals.back().hi);
  for (std::size_t i = 0; i < set.intervals.size(); ++i) {
    const auto [lo, hi] = set.intervals[i];
    CHECK(lo <= hi);
    CHECK(count(c, lat, {set.r, lo}) == set.max_count);
    CHECK(count(c, lat, {set.r, hi}) == set.max_count);
    CHECK(count(c, lat, {set.r, std::sqrt(lo * hi)}) == set.max_count);
    if (i + 1 < set.intervals.size()) {
      const double gap = std::sqrt(hi * set.intervals[i + 1].lo);
      CHECK(count(c, lat, {set.r, gap}) < set.max_count);
    }
  }
}

}  // namespace

TEST_CASE("membership interval examples") {
  const Curve circle = make_p_ellipse(2.0);
  auto iv = membership_interval(circle, {0, 0}, 2.0, 1, 1);
  REQUIRE(iv);
  CHECK(iv->s_enter == doctest::Approx(std::sqrt(2 - std::sqrt(3.0))).epsilon(1e-12));
  CHECK(iv->s_exit == doctest::Approx(std::sqrt(2 + std::sqrt(3.0))).epsilon(1e-12));
  CHECK(iv->s_enter == doctest::Approx(0.51764).epsilon(1e-5));
  CHECK(iv->s_exit == doctest::Approx(1.93185).epsilon(1e-5));
  CHECK_FALSE(membership_interval(circle, {0, 0}, 1.2, 1, 1));

  const Curve line = make_p_ellipse(1.0);
  auto lv = membership_interval(line, {-0.5, -0.5}, 2.0, 1, 1);
  REQUIRE(lv);
  CHECK(lv->s_enter == doctest::Approx(2 - std::sqrt(3.0)).epsilon(1e-12));
  CHECK(lv->s_exit == doctest::Approx(2 + std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("membership intervals bound exactly the inside set") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> shift(-0.9, 2.0), rr(2.0, 30.0);
  std::uniform_int_distribution<int> idx(1, 12);
  const std::vector<Curve> corpus{
      make_p_ellipse(0.5), make_p_ellipse(1.0), make_p_ellipse(2.0), make_p_ellipse(3.0),
      make_graph_curve("arc", [](double x) { return std::sqrt(1 - x * x); }, 1.0),
      make_graph_curve("cusp", [](double x) { return (1 - std::sqrt(x)) * (1 - std::sqrt(x)); }, 1.0),
      to_curve(make_degenerate_curve(-0.3))};
  int checked = 0;
  for (const Curve& c : corpus) {
    CAPTURE(c.name());
    for (int i = 0; i < 60; ++i) {
      const ShiftedLattice lat(shift(rng), shift(rng));
      const double r = rr(rng);
      const int j = idx(rng), k = idx(rng);
      const auto iv = membership_interval(c, lat, r, j, k);
      if (!iv) continue;
      ++checked;
      const double a = j + lat.sigma, b = k + lat.tau;
      CHECK(contains(c, r, iv->s_enter, a, b));
      CHECK(contains(c, r, iv->s_exit, a, b));
      CHECK_FALSE(contains(c, r, iv->s_enter * (1 - 1e-6), a, b));
      CHECK_FALSE(contains(c, r, iv->s_exit * (1 + 1e-6), a, b));
      // 20-point probing inside the interval.
      for (int t = 0; t <= 20; ++t) {
        const double s = iv->s_enter * std::pow(iv->s_exit / iv->s_enter, t / 20.0);
        CHECK(contains(c, r, s, a, b));
      }
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("general-curve intervals agree with the closed form") {
  const Curve arc = make_graph_curve("arc", [](double x) { return std::sqrt(1 - x * x); }, 1.0);
  const Curve circle = make_p_ellipse(2.0);
  for (int j = 1; j <= 6; ++j) {
    for (int k = 1; k <= 6; ++k) {
      const auto a = membership_interval(arc, {0.1, 0.4}, 9.0, j, k);
      const auto b = membership_interval(circle, {0.1, 0.4}, 9.0, j, k);
      REQUIRE(a.has_value() == b.has_value());
      if (!a) continue;
      CHECK(a->s_enter == doctest::Approx(b->s_enter).epsilon(1e-9));
      CHECK(a->s_exit == doctest::Approx(b->s_exit).epsilon(1e-9));
    }
  }
}

TEST_CASE("optimal set below the a priori window threshold") {
  const Curve circle = make_p_ellipse(2.0);
  const auto set = optimal_stretch_set(circle, {0, 0}, 1.5);
  CHECK(set.max_count == 1);
  REQUIRE(set.intervals.size() == 1);
  const double disc = std::sqrt(2.25 * 2.25 - 4.0);
  CHECK(set.inf_s == doctest::Approx(std::sqrt((2.25 - disc) / 2)).epsilon(1e-9));
  CHECK(set.sup_s == doctest::Approx(std::sqrt((2.25 + disc) / 2)).epsilon(1e-9));
  CHECK(set.inf_s == doctest::Approx(0.78077).epsilon(1e-5));
  CHECK(set.sup_s == doctest::Approx(1.28078).epsilon(1e-5));

  // The exact sweep over the trivial window gives the same answer.
  SweepOptions opts;
  opts.clip = trivial_window(circle, {0, 0}, 1.5);
  const auto exact = optimal_stretch_set(circle, {0, 0}, 1.5, opts);
  CHECK(exact.method == Method::sweep);
  CHECK(exact.max_count == 1);
  CHECK(exact.sup_s == doctest::Approx(std::sqrt((2.25 + disc) / 2)).epsilon(1e-14));

  const auto empty = optimal_stretch_set(circle, {0, 0}, 0.5);
  CHECK(empty.max_count == 0);
  CHECK(empty.inf_s == 0.0);
  CHECK(std::isinf(empty.sup_s));
}

TEST_CASE("equal shifts give a set invariant under s -> 1/s") {
  for (double p : {0.5, 1.0, 2.0, 3.0}) {
    const Curve c = make_p_ellipse(p);
    for (double r : {7.3, 12.0, 25.5}) {
      const ShiftedLattice lat(0.3, 0.3);
      const auto set = optimal_stretch_set(c, lat, r);
      if (set.method != Method::sweep) continue;
      const auto& iv = set.intervals;
      REQUIRE_FALSE(iv.empty());
      for (std::size_t i = 0; i < iv.size(); ++i) {
        const auto& mirror = iv[iv.size() - 1 - i];
        CHECK(iv[i].lo * mirror.hi == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(iv[i].hi * mirror.lo == doctest::Approx(1.0).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("sweep agrees with grid_scan on the unbalanced circle") {
  const Curve circle = make_p_ellipse(2.0);
  const ShiftedLattice lat(1.0, 3.0);
  const double step = std::sqrt(3.0) / 10;
  int compared = 0;
  for (int k = 40; k < 90; ++k) {
    const double r = k * step;
    const auto set = optimal_stretch_set(circle, lat, r);
    REQUIRE(set.method == Method::sweep);
    check_set_invariants(circle, lat, set);
    const auto window = a_priori_window(circle, lat, r);
    REQUIRE(window);
    const auto approx = grid_scan(circle, lat, r, *window, 10000);
    CHECK(approx.max_count == set.max_count);
    CHECK(approx.sup_s == doctest::Approx(set.sup_s).epsilon(1e-9));
    ++compared;
  }
  CHECK(compared == 50);
}

TEST_CASE("sweep max equals dense grid max") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> shift(-0.45, 2.0), rr(3.0, 40.0);
  for (double p : {0.5, 1.0, 2.0}) {
    const Curve c = make_p_ellipse(p);
    for (int i = 0; i < 6; ++i) {
      const ShiftedLattice lat(shift(rng), shift(rng));
      const double r = rr(rng);
      const auto set = optimal_stretch_set(c, lat, r);
      if (set.max_count == 0) continue;
      std::vector<double> ends;
      for (const auto& w : set.intervals) {
        ends.push_back(w.lo);
        ends.push_back(w.hi);
      }
      const Window tw = trivial_window(c, lat, r);
      if (tw.hi < tw.lo) continue;
      CHECK(set.max_count == grid_max(c, lat, r, tw, 10000, ends));
    }
  }
}

TEST_CASE("a priori windows contain the maximizing set") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> shift(-0.3, 2.0), rr(5.0, 40.0);
  for (double p : {1.0, 2.0, 3.0, 0.5}) {
    const Curve c = make_p_ellipse(p);
    for (int i = 0; i < 10; ++i) {
      const ShiftedLattice lat(shift(rng), shift(rng));
      const double r = rr(rng);
      const auto w = a_priori_window(c, lat, r);
      if (!w) continue;
      SweepOptions opts;
      opts.clip = trivial_window(c, lat, r);
      const auto set = optimal_stretch_set(c, lat, r, opts);
      REQUIRE(set.method == Method::sweep);
      CHECK(set.inf_s >= w->lo * (1 - 1e-12));
      CHECK(set.sup_s <= w->hi * (1 + 1e-12));
    }
  }
}

TEST_CASE("uniform bound on optimal stretch factors") {
  struct Case {
    double p, sigma, tau;
  };
  for (const Case& cs : {Case{2.0, 0.0, 0.0}, Case{2.0, 1.0, 3.0}, Case{1.0, 0.2, 0.5},
                         Case{0.5, 0.5, 0.5}, Case{3.0, 0.0, 1.0}}) {
    const Curve c = make_p_ellipse(cs.p);
    REQUIRE(assumption_slack(c, cs.sigma, cs.tau) > 0.0);
    const double hi = bound_B(cs.sigma, cs.tau) + 0.05;
    const double lo = 1.0 / bound_B(cs.tau, cs.sigma) - 0.05;
    for (double r : {60.0, 90.0, 120.0}) {
      const auto set = optimal_stretch_set(c, {cs.sigma, cs.tau}, r);
      CHECK(set.inf_s >= lo);
      CHECK(set.sup_s <= hi);
    }
  }
}

TEST_CASE("quarter circle degenerates for shifts -2/5") {
  const Curve circle = make_p_ellipse(2.0);
  const ShiftedLattice lat(-0.4, -0.4);
  for (double r : {60.0, 100.0, 150.0}) {
    const auto set = optimal_stretch_set(circle, lat, r);
    const double lo = std::pow(r, -0.7), hi = std::pow(r, 0.7);
    for (const auto& w : set.intervals) CHECK((w.hi < lo || w.lo > hi));
  }
}

TEST_CASE("grid_scan edge cases") {
  const Curve circle = make_p_ellipse(2.0);
  const auto one = grid_scan(circle, {0, 0}, 3.0, {1.0, 1.0}, 2);
  CHECK(one.max_count == 4);
  CHECK(one.sup_s == 1.0);
  CHECK(one.inf_s == 1.0);
  CHECK(one.method == Method::grid);

  const auto set = grid_scan(circle, {0, 0}, 10.0, {0.1, 10.0}, 2000);
  const auto exact = optimal_stretch_set(circle, {0, 0}, 10.0);
  CHECK(set.max_count == exact.max_count);
  CHECK(set.sup_s == doctest::Approx(exact.sup_s).epsilon(1e-6));
  CHECK(set.resolution > 0.0);
}

TEST_CASE("degenerate curve: window maximum stays below the witness") {
  const Curve c = to_curve(make_degenerate_curve(-0.5));
  const ShiftedLattice lat(-0.5, 0.0);
  for (double r : {30.0, 60.0}) {
    SweepOptions opts;
    opts.clip = Window{std::pow(r, -0.5), std::pow(r, 0.5)};
    const auto set = optimal_stretch_set(c, lat, r, opts);
    std::vector<double> ends;
    for (const auto& w : set.intervals) {
      ends.push_back(w.lo);
      ends.push_back(w.hi);
    }
    CHECK(set.max_count == grid_max(c, lat, r, *opts.clip, 10000, ends));
    CHECK(set.max_count < count(c, lat, {r, r}));
  }
}

TEST_CASE("non-quasiconcave profile falls back to the grid") {
  const Curve kinked = make_graph_curve("kinked", {{0.0, 1.0}, {0.1, 0.12}, {1.0, 0.0}});
  CHECK_FALSE(kinked.profile().quasiconcave);
  bool threw = false;
  for (int j = 1; j <= 30 && !threw; ++j) {
    for (int k = 1; k <= 30 && !threw; ++k) {
      try {
        (void)membership_interval(kinked, {0, 0}, 40.0, j, k);
      } catch (const NonQuasiconcaveError&) {
        threw = true;
      }
    }
  }
  CHECK(threw);
  const auto set = optimal_stretch_set(kinked, {0, 0}, 40.0);
  CHECK(set.method == Method::grid);
  CHECK(set.max_count > 0);
  CHECK(set.resolution > 0.0);
}
