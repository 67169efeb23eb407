#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shiftlat/curves.hpp"
#include "shiftlat/lattice.hpp"
#include "shiftlat/spectral.hpp"
#include "shiftlat/sweep.hpp"

namespace shiftlat {

/// Parses a positive step such as "sqrt3/10", "0.5" or "1/4".
double parse_step(std::string_view text);

/// k * step for k = 1, 2, ... while k * step <= r_max.
std::vector<double> multiples_grid(double step, double r_max);

/// Parses a comma-separated list of positive numbers.
std::vector<double> parse_list(std::string_view text);

/// Fixed 12-significant-digit formatting used for every CSV number.
std::string format_number(double x);

struct ExperimentRow {
  double r;
  double sup_s;
  double inf_s;
  std::int64_t max_count;
  double prediction;
  double residual;  // max_count - prediction
  Method method;
};

/// Prediction for max_s N(r, s): the balanced asymptotic when L = M and
/// sigma, tau > -1/2, else the two-term formula at s = sup_s.
double max_count_prediction(const Curve& curve, const ShiftedLattice& lat, double r,
                            double sup_s);

/// One row per r, computed concurrently and returned in grid order.
std::vector<ExperimentRow> run_sweep(const Curve& curve, const ShiftedLattice& lat,
                                     std::span<const double> r_grid);

void write_sweep_csv(std::ostream& os, std::span<const ExperimentRow> rows);

/// Boundary of the allowable shift region clipped to [lo, hi]^2, ordered
/// from the upper-left branch to the lower-right branch.
std::vector<std::pair<double, double>> region_polyline(const Curve& curve, double lo, double hi,
                                                       int n_points);

void write_region_csv(std::ostream& os, std::span<const std::pair<double, double>> pts);

/// Polyline with axes on the fixed square [lo, hi]^2.
void write_region_svg(std::ostream& os, std::span<const std::pair<double, double>> pts,
                      double lo, double hi);

struct SpectralRow {
  SpectralFamily family;
  double s;
  double cutoff;
  std::int64_t spectral;
  std::int64_t lattice;
  bool ok;
};

std::vector<SpectralRow> run_spectral(SpectralFamily family,
                                      std::span<const std::pair<double, double>> s_cutoff);

void write_spectral_csv(std::ostream& os, std::span<const SpectralRow> rows);

struct DegenerateRow {
  double r;
  double window_lo;
  double window_hi;
  std::int64_t window_max;
  Method window_method;
  double witness_s;
  std::int64_t witness_count;
  bool pass;  // window maximum strictly below the witness count
};

/// For each r: maximum of N(r, s) over s in [r^{eps-1}, r^{1-eps}] against
/// the witness N(r, r).
std::vector<DegenerateRow> run_degenerate(const Curve& curve, const ShiftedLattice& lat,
                                          double eps, std::span<const double> r_grid);

void write_degenerate_csv(std::ostream& os, std::span<const DegenerateRow> rows);

}  // namespace shiftlat
