#include "shiftlat/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace shiftlat {

std::string_view to_string(SpectralFamily f) {
  return f == SpectralFamily::rectangle ? "rectangle" : "oscillator";
}

SpectralFamily parse_spectral_family(std::string_view name) {
  if (name == "rectangle") return SpectralFamily::rectangle;
  if (name == "oscillator") return SpectralFamily::oscillator;
  throw std::invalid_argument("unknown spectral family '" + std::string(name) + "'");
}

namespace {

void require(double s, double cutoff) {
  if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("spectral: s must be > 0");
  if (!(cutoff >= 0.0) || !std::isfinite(cutoff)) {
    throw std::invalid_argument("spectral: cutoff must be >= 0");
  }
}

}  // namespace

std::int64_t rectangle_even_even_count(double s, double cutoff) {
  require(s, cutoff);
  std::int64_t n = 0;
  for (std::int64_t j = 1;; ++j) {
    const double x = s * (static_cast<double>(j) - 0.5);
    if (x * x > cutoff) break;
    for (std::int64_t k = 1;; ++k) {
      const double y = (static_cast<double>(k) - 0.5) / s;
      if (x * x + y * y > cutoff) break;
      ++n;
    }
  }
  return n;
}

std::int64_t oscillator_count(double s, double cutoff) {
  require(s, cutoff);
  std::int64_t n = 0;
  for (std::int64_t j = 1;; ++j) {
    const double x = s * (static_cast<double>(j) - 0.5);
    if (x > cutoff) break;
    for (std::int64_t k = 1;; ++k) {
      if (x + (static_cast<double>(k) - 0.5) / s > cutoff) break;
      ++n;
    }
  }
  return n;
}

std::int64_t spectral_count(SpectralFamily family, double s, double cutoff) {
  return family == SpectralFamily::rectangle ? rectangle_even_even_count(s, cutoff)
                                             : oscillator_count(s, cutoff);
}

std::int64_t matching_lattice_count(SpectralFamily family, double s, double cutoff) {
  require(s, cutoff);
  static const Curve circle = make_p_ellipse(2.0);
  static const Curve line = make_p_ellipse(1.0);
  const ShiftedLattice lat(-0.5, -0.5);
  if (cutoff == 0.0) return 0;
  if (family == SpectralFamily::rectangle) {
    return count(circle, lat, CountQuery(std::sqrt(cutoff), s));
  }
  return count(line, lat, CountQuery(cutoff, s));
}

bool spectral_equivalence_check(SpectralFamily family, double s, double cutoff) {
  return spectral_count(family, s, cutoff) == matching_lattice_count(family, s, cutoff);
}

std::int64_t rectangle_even_even_count_exact(const Rational& s_squared, const Rational& cutoff) {
  if (s_squared <= 0 || cutoff < 0) throw std::invalid_argument("spectral: invalid exact input");
  const Rational half(1, 2);
  std::int64_t n = 0;
  for (std::int64_t j = 1;; ++j) {
    const Rational a = Rational(j) - half;
    const Rational x2 = s_squared * a * a;
    if (x2 > cutoff) break;
    for (std::int64_t k = 1;; ++k) {
      const Rational b = Rational(k) - half;
      if (x2 + b * b / s_squared > cutoff) break;
      ++n;
    }
  }
  return n;
}

std::int64_t oscillator_count_exact(const Rational& s, const Rational& cutoff) {
  if (s <= 0 || cutoff < 0) throw std::invalid_argument("spectral: invalid exact input");
  const Rational half(1, 2);
  std::int64_t n = 0;
  for (std::int64_t j = 1;; ++j) {
    const Rational x = s * (Rational(j) - half);
    if (x > cutoff) break;
    for (std::int64_t k = 1;; ++k) {
      if (x + (Rational(k) - half) / s > cutoff) break;
      ++n;
    }
  }
  return n;
}

bool spectral_equivalence_check_exact(SpectralFamily family, const Rational& s_param,
                                      const Rational& cutoff) {
  const Rational half(-1, 2);
  if (cutoff == 0) return spectral_count(family, 1.0, 0.0) == 0;
  if (family == SpectralFamily::rectangle) {
    const ExactQuery q{half, half, cutoff, s_param};
    return rectangle_even_even_count_exact(s_param, cutoff) == count_exact(2, q);
  }
  const ExactQuery q{half, half, cutoff * cutoff, s_param * s_param};
  return oscillator_count_exact(s_param, cutoff) == count_exact(1, q);
}

double oscillator_eigenvalue(double s, int n) {
  if (!(s > 0.0) || n < 1) throw std::invalid_argument("oscillator_eigenvalue: need s > 0, n >= 1");
  // The n-th level has j, k <= n.
  std::vector<double> levels;
  levels.reserve(static_cast<std::size_t>(n) * n);
  for (int j = 1; j <= n; ++j) {
    for (int k = 1; k <= n; ++k) levels.push_back(s * (j - 0.5) + (k - 0.5) / s);
  }
  std::nth_element(levels.begin(), levels.begin() + (n - 1), levels.end());
  return levels[static_cast<std::size_t>(n - 1)];
}

}  // namespace shiftlat
