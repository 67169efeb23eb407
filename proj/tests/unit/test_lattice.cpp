#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "shiftlat/lattice.hpp"

using namespace shiftlat;

TEST_CASE("lattice count examples") {
  const Curve circle = make_p_ellipse(2.0);
  const Curve line = make_p_ellipse(1.0);
  CHECK(count(circle, {0, 0}, {3, 1}) == 4);
  CHECK(count(line, {-0.5, -0.5}, {3, 1}) == 6);
  CHECK(count(line, {-0.5, -0.5}, {3, 2}) == 4);
  CHECK(count(circle, {0, 0}, {3, 3.0 / 1.0 + 0.01}) == 0);
  CHECK(count(circle, {0, 0}, {0.5, 1}) == 0);
  // (3, 4) lies exactly on the circle of radius 5.
  CHECK(count(circle, {0, 0}, {5, 1}) == 15);
  CHECK(brute_force_count(circle, {0, 0}, {3, 1}) == 4);
  CHECK(brute_force_count(circle, {0, 0}, {0.5, 1}) == 0);
}

TEST_CASE("count vanishes past the x-intercept") {
  for (double p : {0.5, 1.0, 2.0}) {
    const Curve c = make_p_ellipse(p);
    for (double sigma : {-0.5, 0.0, 1.0}) {
      const double r = 10.0;
      const double s = r / (1.0 + sigma) * 1.0001;
      CHECK(count(c, {sigma, 0.2}, {r, s}) == 0);
    }
  }
}

TEST_CASE("argument validation") {
  CHECK_THROWS(ShiftedLattice(-1.0, 0.0));
  CHECK_THROWS(ShiftedLattice(0.0, -1.5));
  CHECK_THROWS(CountQuery(0.0, 1.0));
  CHECK_THROWS(CountQuery(1.0, -1.0));
  const Curve circle = make_p_ellipse(2.0);
  CHECK_THROWS(brute_force_count(circle, {0, 0}, {2e4, 1}));
  CHECK_THROWS(brute_force_count(circle, {0, 0}, {100, 200}));
}

TEST_CASE("count matches the enumeration oracle") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pick(0, 3);
  std::uniform_real_distribution<double> shift(-0.9, 4.0), logs(std::log(0.2), std::log(5.0)),
      rr(0.5, 150.0);
  const double ps[] = {0.5, 1.0, 2.0, 3.0};
  int mismatches = 0;
  for (int i = 0; i < 500; ++i) {
    const Curve c = make_p_ellipse(ps[pick(rng)]);
    const ShiftedLattice lat(shift(rng), shift(rng));
    const CountQuery q(rr(rng), std::exp(logs(rng)));
    if (count(c, lat, q) != brute_force_count(c, lat, q)) ++mismatches;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("count_batch") {
  const Curve circle = make_p_ellipse(2.0);
  const std::vector<double> grid{1, 2, 3};
  CHECK(count_batch(circle, {0, 0}, grid, 1.0) == std::vector<std::int64_t>{0, 1, 4});
  const std::vector<double> one{7.5};
  CHECK(count_batch(circle, {0, 0}, one, 1.3)[0] == count(circle, {0, 0}, {7.5, 1.3}));

  std::vector<double> big;
  for (int i = 1; i <= 60; ++i) big.push_back(0.7 * i);
  auto a = count_batch(circle, {0.2, -0.3}, big, 0.8);
  std::mt19937_64 rng(5);
  std::shuffle(big.begin(), big.end(), rng);
  auto b = count_batch(circle, {0.2, -0.3}, big, 0.8);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);
  CHECK_THROWS(count_batch(circle, {0, 0}, std::vector<double>{}, 1.0));
  CHECK_THROWS(count_batch(circle, {0, 0}, std::vector<double>{1.0, -2.0}, 1.0));
}

TEST_CASE("monotonicity in r and in the shifts") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> shift(-0.9, 2.0), r(1.0, 60.0), s(0.3, 3.0),
      bump(0.0, 0.5);
  for (double p : {0.5, 1.0, 2.0, 3.0}) {
    const Curve c = make_p_ellipse(p);
    for (int i = 0; i < 100; ++i) {
      const double sg = shift(rng), tu = shift(rng), r1 = r(rng), st = s(rng);
      const double r2 = r1 + bump(rng);
      CHECK(count(c, {sg, tu}, {r1, st}) <= count(c, {sg, tu}, {r2, st}));
      CHECK(count(c, {sg + bump(rng), tu}, {r1, st}) <= count(c, {sg, tu}, {r1, st}));
      CHECK(count(c, {sg, tu + bump(rng)}, {r1, st}) <= count(c, {sg, tu}, {r1, st}));
    }
  }
}

TEST_CASE("transpose symmetry for p-circles") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> shift(-0.9, 2.0), r(1.0, 80.0), s(0.2, 5.0);
  for (double p : {0.5, 1.0, 2.0, 3.0}) {
    const Curve c = make_p_ellipse(p);
    for (int i = 0; i < 100; ++i) {
      const ShiftedLattice lat(shift(rng), shift(rng));
      const double rr = r(rng), ss = s(rng);
      CHECK(count(c, lat, {rr, ss}) == count(c, lat.swapped(), {rr, 1.0 / ss}));
    }
  }
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3") == Rational(3));
  CHECK(parse_rational("-1/2") == Rational(-1, 2));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("1e-3") == Rational(1, 1000));
  CHECK(parse_rational("2.5E2") == Rational(250));
  CHECK_THROWS(parse_rational("abc"));
  CHECK_THROWS(parse_rational("1/0"));
}

TEST_CASE("exact counting agrees with floating point on boundary cases") {
  const Curve circle = make_p_ellipse(2.0);
  const Curve line = make_p_ellipse(1.0);
  CHECK(count_exact(2, {0, 0, 9, 1}) == 4);
  CHECK(count_exact(2, {0, 0, 25, 1}) == 15);
  CHECK(count_exact(1, {Rational(-1, 2), Rational(-1, 2), 9, 1}) == 6);
  CHECK(count_exact(1, {Rational(-1, 2), Rational(-1, 2), 9, 4}) == 4);
  CHECK_THROWS(count_exact(3, {0, 0, 9, 1}));

  // Rational shifts and squares; many cases put points exactly on the curve.
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<int> num(-8, 30), rsq(1, 3000), ssq(1, 12);
  int mismatches = 0;
  for (int i = 0; i < 400; ++i) {
    const Rational sigma(num(rng), 10), tau(num(rng), 10);
    const Rational r2(rsq(rng), 4), s2(ssq(rng), 4);
    const ExactQuery q{sigma, tau, r2, s2};
    const ShiftedLattice lat(static_cast<double>(sigma), static_cast<double>(tau));
    const CountQuery cq(std::sqrt(static_cast<double>(r2)), std::sqrt(static_cast<double>(s2)));
    if (count_exact(2, q) != count(circle, lat, cq)) ++mismatches;
    if (count_exact(1, q) != count(line, lat, cq)) ++mismatches;
  }
  CHECK(mismatches == 0);
}
