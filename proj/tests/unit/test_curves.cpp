#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <string>

#include <doctest.h>

#include "shiftlat/curves.hpp"
#include "shiftlat/lattice.hpp"

using namespace shiftlat;

namespace {

// Composite Simpson on a fine grid, independent of the library quadrature.
double simpson(const RealFn& f, double a, double b, int n = 200000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("p-ellipse basics") {
  const Curve circle = make_p_ellipse(2.0);
  CHECK(circle.area() == doctest::Approx(std::numbers::pi / 4).epsilon(1e-14));
  CHECK(circle.concavity() == Concavity::concave);
  CHECK(circle.x_intercept() == 1.0);
  CHECK(circle.y_intercept() == 1.0);
  CHECK(circle.p_exponent().value() == 2.0);

  const Curve line = make_p_ellipse(1.0);
  CHECK(line.area() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(line.concavity() == Concavity::line);

  const Curve half = make_p_ellipse(0.5);
  CHECK(half.concavity() == Concavity::convex);
  for (double x : {0.01, 0.1, 0.3, 0.7, 0.95}) {
    CHECK(half.f(x) == doctest::Approx(std::pow(1.0 - std::sqrt(x), 2)).epsilon(1e-14));
    CHECK(half.d2f(x) == doctest::Approx(0.5 * std::pow(x, -1.5)).epsilon(1e-10));
  }
  CHECK_THROWS(make_p_ellipse(0.0));
  CHECK_THROWS(make_p_ellipse(-1.0));
}

TEST_CASE("p-ellipse area matches quadrature") {
  for (double p : {0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0}) {
    const Curve c = make_p_ellipse(p);
    CHECK(c.area() == doctest::Approx(p_ellipse_area(p)).epsilon(1e-14));
    CHECK(simpson([&](double x) { return c.f(x); }, 0.0, 1.0) ==
          doctest::Approx(c.area()).epsilon(1e-4));
  }
}

TEST_CASE("f and g are mutually inverse and decreasing") {
  std::vector<Curve> corpus{make_p_ellipse(0.5), make_p_ellipse(1.0), make_p_ellipse(2.0),
                            make_p_ellipse(3.0), to_curve(make_degenerate_curve(-0.5)),
                            make_graph_curve("arc", [](double x) { return std::sqrt(1 - x * x); }, 1.0)};
  for (const Curve& c : corpus) {
    CAPTURE(c.name());
    const double L = c.x_intercept();
    CHECK(c.f(0.0) == doctest::Approx(c.y_intercept()));
    CHECK(c.f(L) == doctest::Approx(0.0));
    double prev = c.f(0.0);
    for (int i = 0; i <= 1000; ++i) {
      const double x = L * i / 1000.0;
      CHECK(c.g(c.f(x)) == doctest::Approx(x).epsilon(1e-9).scale(1.0));
      if (i > 0) {
        CHECK(c.f(x) < prev);
        prev = c.f(x);
      }
    }
  }
}

TEST_CASE("p-circles are symmetric under transposition") {
  for (double p : {0.5, 1.0, 2.0, 3.0}) {
    const Curve c = make_p_ellipse(p);
    for (double x : {0.0, 0.2, 0.5, 0.9}) CHECK(c.f(x) == c.g(x));
    const Curve t = c.transposed();
    CHECK(t.f(0.3) == c.g(0.3));
  }
}

TEST_CASE("concavity class is respected") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double p : {0.5, 2.0, 3.0}) {
    const Curve c = make_p_ellipse(p);
    for (int i = 0; i < 200; ++i) {
      const double x = u(rng), y = u(rng), lam = u(rng);
      const double chord = lam * c.f(x) + (1 - lam) * c.f(y);
      const double mid = c.f(lam * x + (1 - lam) * y);
      if (c.concavity() == Concavity::concave) CHECK(mid >= chord - 1e-12);
      else CHECK(mid <= chord + 1e-12);
    }
  }
}

TEST_CASE("degenerate curve construction") {
  const auto half = make_degenerate_curve(-0.5);
  CHECK(half.m == 1);
  CHECK(half.f(0.5) == doctest::Approx(0.75));
  CHECK(half.area() == doctest::Approx(2.0 / 3.0));
  CHECK(half.f(0.5) > half.area());

  // Independent scan: smallest m with (1 + sigma)^{2m} < 1/(2m+1).
  auto scan = [](double sigma) {
    int m = 1;
    while (!(std::pow(1.0 + sigma, 2 * m) < 1.0 / (2 * m + 1))) ++m;
    return m;
  };
  const auto tenth = make_degenerate_curve(-0.1);
  CHECK(tenth.m == scan(-0.1));
  CHECK(std::pow(0.9, 2 * tenth.m) < 1.0 / (2 * tenth.m + 1));
  CHECK_FALSE(std::pow(0.9, 2 * (tenth.m - 1)) < 1.0 / (2 * tenth.m - 1));
  const Curve c = to_curve(tenth);
  CHECK(c.concavity() == Concavity::concave);
  CHECK(c.f(0.9) > c.area());
  CHECK(simpson([&](double x) { return tenth.f(x); }, 0.0, 1.0) ==
        doctest::Approx(tenth.area()).epsilon(1e-10));
  for (int i = 1; i < 100; ++i) CHECK(c.d2f(i / 100.0) < 0.0);

  int prev = 0;
  for (double sigma : {-0.5, -0.3, -0.1, -0.05, -0.01}) {
    const int m = make_degenerate_curve(sigma).m;
    CHECK(m >= prev);
    prev = m;
  }
  CHECK(prev > 100);
  CHECK_THROWS(make_degenerate_curve(0.1));
  CHECK_THROWS(make_degenerate_curve(-1.0));
}

TEST_CASE("graph curves") {
  const Curve tri = make_graph_curve("tri", [](double x) { return 1.0 - x; }, 1.0);
  const Curve line = make_p_ellipse(1.0);
  CHECK(tri.concavity() == Concavity::line);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> rr(0.5, 40.0), ss(0.3, 3.0), sh(-0.9, 2.0);
  for (int i = 0; i < 200; ++i) {
    const ShiftedLattice lat(sh(rng), sh(rng));
    const CountQuery q(rr(rng), ss(rng));
    CHECK(count(tri, lat, q) == count(line, lat, q));
  }

  const Curve arc = make_graph_curve("arc", [](double x) { return std::sqrt(1 - x * x); }, 1.0);
  CHECK(arc.area() == doctest::Approx(std::numbers::pi / 4).epsilon(1e-9));
  CHECK(arc.concavity() == Concavity::concave);

  CHECK_THROWS(make_graph_curve("bump", {{0.0, 1.0}, {0.3, 0.2}, {0.6, 0.5}, {1.0, 0.0}}));
  CHECK_THROWS(make_graph_curve("rise", [](double x) { return (1 - x) * (1 + 3 * x); }, 1.0));

  const Curve poly = make_graph_curve("poly", {{0.0, 1.0}, {0.5, 0.6}, {1.0, 0.0}});
  CHECK(poly.f(0.25) == doctest::Approx(0.8));
  CHECK(poly.g(0.8) == doctest::Approx(0.25));
  CHECK(poly.area() == doctest::Approx(0.5 * 0.5 * 1.6 + 0.5 * 0.5 * 0.6));
}

TEST_CASE("curve descriptors and CSV input") {
  const std::string path = std::string(SHIFTLAT_TEST_TMP) + "/curve_samples.csv";
  {
    std::ofstream out(path);
    out << "x,f\n0,2\n1,1\n2,0\n";
  }
  const Curve c = load_graph_csv(path);
  CHECK(c.x_intercept() == 2.0);
  CHECK(c.y_intercept() == 2.0);
  CHECK(c.area() == doctest::Approx(2.0));

  const Curve d = parse_curve_descriptor("curve=graph file=" + path);
  CHECK(d.area() == doctest::Approx(2.0));
  CHECK(parse_curve_descriptor("curve=p-ellipse p=2").area() ==
        doctest::Approx(std::numbers::pi / 4));
  CHECK(parse_curve_descriptor("curve=degenerate sigma=-0.5").f(0.5) == doctest::Approx(0.75));
  CHECK_THROWS(parse_curve_descriptor("curve=spiral"));
  CHECK_THROWS(parse_curve_descriptor("p=2"));
  CHECK_THROWS(load_graph_csv(std::string(SHIFTLAT_TEST_TMP) + "/missing.csv"));
  std::remove(path.c_str());
}
