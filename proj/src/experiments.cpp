#include "shiftlat/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "shiftlat/theory.hpp"

namespace shiftlat {

namespace {

double parse_positive(std::string_view text) {
  const std::string t(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + t + "'");
  }
  if (used != t.size()) throw std::invalid_argument("not a number: '" + t + "'");
  return v;
}

}  // namespace

double parse_step(std::string_view text) {
  std::string_view num = text;
  std::string_view den;
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    num = text.substr(0, slash);
    den = text.substr(slash + 1);
  }
  double value;
  if (num.starts_with("sqrt")) {
    num.remove_prefix(4);
    if (num.starts_with("(") && num.ends_with(")")) num = num.substr(1, num.size() - 2);
    value = std::sqrt(parse_positive(num));
  } else {
    value = parse_positive(num);
  }
  if (!den.empty()) value /= parse_positive(den);
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument("step must be positive: '" + std::string(text) + "'");
  }
  return value;
}

std::vector<double> multiples_grid(double step, double r_max) {
  if (!(step > 0.0) || !(r_max > 0.0)) throw std::invalid_argument("grid needs step, r_max > 0");
  std::vector<double> out;
  for (std::int64_t k = 1;; ++k) {
    const double r = static_cast<double>(k) * step;
    if (r > r_max * (1.0 + 1e-12)) break;
    out.push_back(r);
  }
  if (out.empty()) throw std::invalid_argument("r grid is empty: r_max below the step");
  return out;
}

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
    if (end > start) out.push_back(parse_positive(text.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double max_count_prediction(const Curve& curve, const ShiftedLattice& lat, double r,
                            double sup_s) {
  const bool equal = std::abs(curve.x_intercept() - curve.y_intercept()) <=
                     1e-12 * curve.x_intercept();
  if (equal && lat.sigma > -0.5 && lat.tau > -0.5) {
    return max_count_asymptotic(curve, lat.sigma, lat.tau, r);
  }
  return two_term_prediction(curve, lat.sigma, lat.tau, r, sup_s).value;
}

std::vector<ExperimentRow> run_sweep(const Curve& curve, const ShiftedLattice& lat,
                                     std::span<const double> r_grid) {
  std::vector<ExperimentRow> rows(r_grid.size());
  SweepOptions opts;
  opts.parallel = false;  // parallelism is across rows
  parallel_for(r_grid.size(), [&](std::size_t i) {
    const double r = r_grid[i];
    const OptimalSet set = optimal_stretch_set(curve, lat, r, opts);
    const double pred = max_count_prediction(curve, lat, r, set.sup_s);
    rows[i] = {r,    set.sup_s, set.inf_s, set.max_count, pred,
               static_cast<double>(set.max_count) - pred, set.method};
  });
  return rows;
}

void write_sweep_csv(std::ostream& os, std::span<const ExperimentRow> rows) {
  os << "r,sup_s,inf_s,max_count,prediction,residual,method\n";
  for (const auto& row : rows) {
    os << format_number(row.r) << ',' << format_number(row.sup_s) << ','
       << format_number(row.inf_s) << ',' << row.max_count << ','
       << format_number(row.prediction) << ',' << format_number(row.residual) << ','
       << to_string(row.method) << '\n';
  }
}

std::vector<std::pair<double, double>> region_polyline(const Curve& curve, double lo, double hi,
                                                       int n_points) {
  if (n_points < 2) throw std::invalid_argument("region needs at least two grid points");
  std::vector<double> grid(n_points);
  for (int i = 0; i < n_points; ++i) grid[i] = lo + (hi - lo) * i / (n_points - 1);

  // Upper-left branch: sigma as a function of tau, kept above the diagonal;
  // lower-right branch: tau as a function of sigma, kept below it.
  std::vector<std::pair<double, double>> upper, lower;
  try {
    for (auto p : allowable_region_boundary(curve, SolveFor::sigma, grid)) {
      if (p.first <= p.second && p.first >= lo) upper.push_back(p);
    }
  } catch (const std::runtime_error&) {
  }
  try {
    for (auto p : allowable_region_boundary(curve, SolveFor::tau, grid)) {
      if (p.second < p.first && p.second >= lo) lower.push_back(p);
    }
  } catch (const std::runtime_error&) {
  }
  std::sort(upper.begin(), upper.end(),
            [](const auto& a, const auto& b) { return a.second > b.second; });
  std::sort(lower.begin(), lower.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  upper.insert(upper.end(), lower.begin(), lower.end());
  if (upper.empty()) throw std::runtime_error("region boundary does not meet the plotting square");
  return upper;
}

void write_region_csv(std::ostream& os, std::span<const std::pair<double, double>> pts) {
  os << "sigma,tau\n";
  for (const auto& [sigma, tau] : pts) os << format_number(sigma) << ',' << format_number(tau) << '\n';
}

void write_region_svg(std::ostream& os, std::span<const std::pair<double, double>> pts,
                      double lo, double hi) {
  constexpr double kSize = 400.0;
  auto px = [&](double v) { return (v - lo) / (hi - lo) * kSize; };
  auto py = [&](double v) { return kSize - (v - lo) / (hi - lo) * kSize; };
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
     << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << kSize << "\" height=\"" << kSize
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<line x1=\"0\" y1=\"" << format_number(py(0.0)) << "\" x2=\"" << kSize << "\" y2=\""
     << format_number(py(0.0)) << "\" stroke=\"gray\"/>\n";
  os << "<line x1=\"" << format_number(px(0.0)) << "\" y1=\"0\" x2=\"" << format_number(px(0.0))
     << "\" y2=\"" << kSize << "\" stroke=\"gray\"/>\n";
  os << "<polyline fill=\"none\" stroke=\"black\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) os << ' ';
    os << format_number(px(pts[i].first)) << ',' << format_number(py(pts[i].second));
  }
  os << "\"/>\n</svg>\n";
}

std::vector<SpectralRow> run_spectral(SpectralFamily family,
                                      std::span<const std::pair<double, double>> s_cutoff) {
  std::vector<SpectralRow> rows(s_cutoff.size());
  parallel_for(s_cutoff.size(), [&](std::size_t i) {
    const auto [s, cutoff] = s_cutoff[i];
    const std::int64_t a = spectral_count(family, s, cutoff);
    const std::int64_t b = matching_lattice_count(family, s, cutoff);
    rows[i] = {family, s, cutoff, a, b, a == b};
  });
  return rows;
}

void write_spectral_csv(std::ostream& os, std::span<const SpectralRow> rows) {
  os << "family,s,cutoff,spectral_count,lattice_count,equivalence\n";
  for (const auto& row : rows) {
    os << to_string(row.family) << ',' << format_number(row.s) << ','
       << format_number(row.cutoff) << ',' << row.spectral << ',' << row.lattice << ','
       << (row.ok ? "ok" : "mismatch") << '\n';
  }
}

std::vector<DegenerateRow> run_degenerate(const Curve& curve, const ShiftedLattice& lat,
                                          double eps, std::span<const double> r_grid) {
  if (!(eps > 0.0) || !(eps < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  std::vector<DegenerateRow> rows(r_grid.size());
  parallel_for(r_grid.size(), [&](std::size_t i) {
    const double r = r_grid[i];
    DegenerateRow row{};
    row.r = r;
    row.window_lo = std::pow(r, eps - 1.0);
    row.window_hi = std::pow(r, 1.0 - eps);
    SweepOptions opts;
    opts.parallel = false;
    opts.clip = Window{row.window_lo, row.window_hi};
    const OptimalSet set = optimal_stretch_set(curve, lat, r, opts);
    row.window_max = set.max_count;
    row.window_method = set.method;
    row.witness_s = r;
    row.witness_count = count(curve, lat, CountQuery(r, r));
    row.pass = row.window_max < row.witness_count;
    rows[i] = row;
  });
  return rows;
}

void write_degenerate_csv(std::ostream& os, std::span<const DegenerateRow> rows) {
  os << "r,window_lo,window_hi,window_max,window_method,witness_s,witness_count,verdict\n";
  for (const auto& row : rows) {
    os << format_number(row.r) << ',' << format_number(row.window_lo) << ','
       << format_number(row.window_hi) << ',' << row.window_max << ','
       << to_string(row.window_method) << ',' << format_number(row.witness_s) << ','
       << row.witness_count << ',' << (row.pass ? "pass" : "flagged") << '\n';
  }
}

}  // namespace shiftlat
