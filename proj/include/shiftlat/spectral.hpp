#pragma once

#include <cstdint>
#include <string_view>

#include "shiftlat/lattice.hpp"

namespace shiftlat {

/// Rectangle [0, 2pi/s] x [0, 2pi s]: even-even Dirichlet eigenvalues
/// (s (j - 1/2))^2 + (s^-1 (k - 1/2))^2.
/// Oscillator: levels s (j - 1/2) + s^-1 (k - 1/2).
enum class SpectralFamily { rectangle, oscillator };

std::string_view to_string(SpectralFamily f);
SpectralFamily parse_spectral_family(std::string_view name);

/// Number of even-even rectangle eigenvalues <= cutoff.
std::int64_t rectangle_even_even_count(double s, double cutoff);

/// Number of oscillator levels <= cutoff.
std::int64_t oscillator_count(double s, double cutoff);

/// Spectral count of the family.
std::int64_t spectral_count(SpectralFamily family, double s, double cutoff);

/// Lattice count the spectral count must reproduce: the quarter circle at
/// r = sqrt(cutoff), or the line at r = cutoff, both with shifts -1/2.
std::int64_t matching_lattice_count(SpectralFamily family, double s, double cutoff);

/// spectral_count == matching_lattice_count.
bool spectral_equivalence_check(SpectralFamily family, double s, double cutoff);

/// Exact variants. The rectangle family takes s^2 and the cutoff as
/// rationals; the oscillator family takes s itself and the cutoff.
std::int64_t rectangle_even_even_count_exact(const Rational& s_squared, const Rational& cutoff);
std::int64_t oscillator_count_exact(const Rational& s, const Rational& cutoff);
bool spectral_equivalence_check_exact(SpectralFamily family, const Rational& s_param,
                                      const Rational& cutoff);

/// n-th smallest oscillator level (n >= 1, multiplicity counted).
double oscillator_eigenvalue(double s, int n);

}  // namespace shiftlat
