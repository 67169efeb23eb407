#include "shiftlat/curves.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace shiftlat {

std::string_view to_string(Concavity c) {
  switch (c) {
    case Concavity::concave: return "concave";
    case Concavity::convex: return "convex";
    case Concavity::line: return "line";
  }
  return "unknown";
}

namespace {

Profile closed_form_profile(double p) {
  // phi(u) = u (1 - u^p)^{1/p} peaks where u^p = 1/2.
  return {std::pow(2.0, -1.0 / p), std::pow(4.0, -1.0 / p), true};
}

Profile sampled_profile(const RealFn& f, double L) {
  constexpr int kSamples = 4000;
  std::vector<double> phi(kSamples + 1);
  for (int i = 0; i <= kSamples; ++i) {
    const double u = L * i / kSamples;
    phi[i] = u * f(u);
  }
  const auto peak_it = std::max_element(phi.begin(), phi.end());
  const int peak = static_cast<int>(peak_it - phi.begin());
  const double slack = 1e-13 * std::max(1.0, *peak_it);
  Profile out;
  out.quasiconcave = true;
  for (int i = 1; i <= peak; ++i) {
    if (phi[i] < phi[i - 1] - slack) out.quasiconcave = false;
  }
  for (int i = peak + 1; i <= kSamples; ++i) {
    if (phi[i] > phi[i - 1] + slack) out.quasiconcave = false;
  }
  const double lo = L * std::max(0, peak - 1) / kSamples;
  const double hi = L * std::min(kSamples, peak + 1) / kSamples;
  const Extremum m = maximize([&](double u) { return u * f(u); }, lo, hi);
  out.peak_u = m.x;
  out.peak_value = m.value;
  return out;
}

RealFn central_difference(RealFn fn, double lo, double hi) {
  const double h = 1e-6 * (hi - lo);
  return [fn = std::move(fn), lo, hi, h](double x) {
    const double a = std::max(lo, x - h);
    const double b = std::min(hi, x + h);
    return (fn(b) - fn(a)) / (b - a);
  };
}

RealFn second_difference(RealFn fn, double lo, double hi) {
  const double h = 1e-4 * (hi - lo);
  return [fn = std::move(fn), lo, hi, h](double x) {
    const double c = std::clamp(x, lo + h, hi - h);
    return (fn(c + h) - 2.0 * fn(c) + fn(c - h)) / (h * h);
  };
}

RealFn bisection_inverse(RealFn f, double L, double M) {
  return [f = std::move(f), L, M](double y) {
    if (y >= M) return 0.0;
    if (y <= 0.0) return L;
    return find_root([&](double x) { return f(x) - y; }, 0.0, L, 1e-12, 1e-15, 200);
  };
}

Concavity infer_concavity(const RealFn& f, double L, double M) {
  constexpr int kGrid = 64;
  double above = 0.0;  // f(mid) above the chord
  double below = 0.0;
  for (int i = 0; i <= kGrid; ++i) {
    for (int j = i + 2; j <= kGrid; j += 2) {
      const double x1 = L * i / kGrid;
      const double x2 = L * j / kGrid;
      const double dev = f(0.5 * (x1 + x2)) - 0.5 * (f(x1) + f(x2));
      above = std::max(above, dev);
      below = std::max(below, -dev);
    }
  }
  const double tol = 1e-12 * std::max(1.0, M);
  if (above <= tol && below <= tol) return Concavity::line;
  if (below <= tol) return Concavity::concave;
  if (above <= tol) return Concavity::convex;
  throw std::invalid_argument("graph curve is neither concave nor convex");
}

double p_root_fixed_point(const RealFn& f, double L) {
  // (alpha, alpha) on the curve.
  return find_root([&](double x) { return f(x) - x; }, 0.0, L, 1e-14, 0.0, 200);
}

}  // namespace

Curve::Curve(std::string name, Functions fns, double L, double M, double area,
             Concavity concavity, std::optional<Regularity> regularity,
             std::optional<double> p_exponent) {
  if (!(L > 0.0) || !(M > 0.0)) throw std::invalid_argument("curve intercepts must be positive");
  if (!fns.f || !fns.g) throw std::invalid_argument("curve needs f and its inverse g");
  auto state = std::make_shared<State>();
  state->name = std::move(name);
  state->fns = std::move(fns);
  state->L = L;
  state->M = M;
  state->area = area;
  state->concavity = concavity;
  state->regularity = std::move(regularity);
  state->p = p_exponent;
  state->profile = p_exponent && L == 1.0 && M == 1.0 ? closed_form_profile(*p_exponent)
                                                      : sampled_profile(state->fns.f, L);
  state_ = std::move(state);
}

Curve Curve::transposed() const {
  const State& s = *state_;
  Functions fns{s.fns.g, s.fns.f, s.fns.dg, s.fns.d2g, s.fns.df, s.fns.d2f};
  std::optional<Regularity> reg;
  if (s.regularity) {
    Regularity r = *s.regularity;
    std::swap(r.alpha, r.beta);
    std::swap(r.alpha_partition, r.beta_partition);
    std::swap(r.a1, r.b1);
    std::swap(r.a2, r.b2);
    std::swap(r.a3, r.b3);
    std::swap(r.delta, r.epsilon);
    reg = std::move(r);
  }
  return Curve(s.name + "^T", std::move(fns), s.M, s.L, s.area, s.concavity, std::move(reg), s.p);
}

double p_ellipse_area(double p) {
  if (!(p > 0.0)) throw std::invalid_argument("p-ellipse exponent must be positive");
  const double g1 = std::tgamma(1.0 + 1.0 / p);
  return g1 * g1 / std::tgamma(1.0 + 2.0 / p);
}

Curve make_p_ellipse(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw std::invalid_argument("p-ellipse exponent must be positive and finite");
  }
  auto f = [p](double x) {
    if (x <= 0.0) return 1.0;
    if (x >= 1.0) return 0.0;
    if (p == 2.0) return std::sqrt((1.0 - x) * (1.0 + x));
    if (p == 1.0) return 1.0 - x;
    return std::pow(1.0 - std::pow(x, p), 1.0 / p);
  };
  auto df = [p](double x) {
    const double w = 1.0 - std::pow(x, p);
    return -std::pow(x, p - 1.0) * std::pow(w, 1.0 / p - 1.0);
  };
  auto d2f = [p](double x) {
    const double w = 1.0 - std::pow(x, p);
    return -(p - 1.0) * std::pow(x, p - 2.0) * std::pow(w, 1.0 / p - 2.0);
  };

  Concavity c = p > 1.0 ? Concavity::concave : (p < 1.0 ? Concavity::convex : Concavity::line);

  std::optional<Regularity> reg;
  if (p != 1.0) {
    Regularity r;
    r.alpha = r.beta = std::pow(2.0, -1.0 / p);
    if (p > 1.0) {
      r.alpha_partition = r.beta_partition = {0.0, r.alpha};
      // f''(x) ~ -(p-1) x^{p-2} near 0 vanishes when p > 2, so delta(r) must
      // shrink more slowly there; a1 = a2 balances the two conditions.
      const double a = p > 2.0 ? 1.0 / (2.0 * p) : 0.5;
      r.a1 = r.b1 = a;
      r.a2 = r.b2 = p > 2.0 ? a : 0.25;
      r.a3 = r.b3 = 0.5;
    } else {
      r.alpha_partition = r.beta_partition = {r.alpha, 1.0};
      // f''(1 - x) ~ c x^{1/p - 2} vanishes at the intercept when p < 1/2.
      const double a = p < 0.5 ? 0.5 * p : 0.5;
      r.a1 = r.b1 = a;
      r.a2 = r.b2 = p < 0.5 ? a : 0.25;
      r.a3 = r.b3 = 0.5 * p;
    }
    const double decay = 2.0 * r.a1;
    r.delta = r.epsilon = [decay](double rr) { return std::pow(rr, -decay); };
    reg = std::move(r);
  }

  std::ostringstream name;
  name << "p-ellipse(p=" << p << ")";
  Curve::Functions fns{f, f, df, d2f, df, d2f};
  return Curve(name.str(), std::move(fns), 1.0, 1.0, p_ellipse_area(p), c, std::move(reg), p);
}

double DegenerateCurveParams::f(double x) const {
  return 1.0 - delta * x * x - (1.0 - delta) * std::pow(x, 2 * m);
}

double DegenerateCurveParams::area() const {
  return 1.0 - delta / 3.0 - (1.0 - delta) / (2.0 * m + 1.0);
}

DegenerateCurveParams make_degenerate_curve(double sigma) {
  if (!(sigma > -1.0 && sigma < 0.0)) {
    throw std::invalid_argument("degenerate curve needs sigma in (-1, 0)");
  }
  constexpr double kMargin = 1e-6;
  const double x = 1.0 + sigma;
  int m = 1;
  while (!(std::pow(x, 2 * m) < 1.0 / (2 * m + 1))) {
    ++m;
    if (m > 1'000'000) throw std::invalid_argument("sigma too close to 0 for a degenerate curve");
  }
  // The margin can fail for the smallest m when (1+sigma)^{2m} sits just
  // under 1/(2m+1); a larger m then restores it.
  for (;; ++m) {
    for (int i = 1; i <= 40; ++i) {
      DegenerateCurveParams params{sigma, m, std::ldexp(1.0, -i)};
      if (params.f(x) - params.area() > kMargin) return params;
    }
    if (m > 1'000'000) throw std::invalid_argument("no admissible degenerate curve found");
  }
}

Curve to_curve(const DegenerateCurveParams& params) {
  const double delta = params.delta;
  const int m = params.m;
  auto f = [params](double x) { return x >= 1.0 ? 0.0 : params.f(std::max(0.0, x)); };
  auto df = [delta, m](double x) {
    return -2.0 * delta * x - 2.0 * m * (1.0 - delta) * std::pow(x, 2 * m - 1);
  };
  auto d2f = [delta, m](double x) {
    return -2.0 * delta - 2.0 * m * (2.0 * m - 1.0) * (1.0 - delta) * std::pow(x, 2 * m - 2);
  };
  RealFn g = bisection_inverse(f, 1.0, 1.0);
  auto dg = [g, df](double y) { return 1.0 / df(g(y)); };
  auto d2g = [g, df, d2f](double y) {
    const double x = g(y);
    const double d = df(x);
    return -d2f(x) / (d * d * d);
  };

  Regularity r;
  r.alpha = r.beta = p_root_fixed_point(f, 1.0);
  r.alpha_partition = {0.0, r.alpha};
  r.beta_partition = {0.0, r.beta};
  r.a1 = r.b1 = 0.5;
  r.a2 = r.b2 = 0.25;
  r.delta = r.epsilon = [](double rr) { return 1.0 / rr; };

  std::ostringstream name;
  name << "degenerate(m=" << m << ",delta=" << delta << ")";
  Curve::Functions fns{f, g, df, d2f, dg, d2g};
  return Curve(name.str(), std::move(fns), 1.0, 1.0, params.area(), Concavity::concave,
               std::move(r));
}

Curve make_graph_curve(std::string name, RealFn f, double L, GraphOptions options) {
  if (!(L > 0.0)) throw std::invalid_argument("graph curve: L must be positive");
  const double M = f(0.0);
  if (!(M > 0.0)) throw std::invalid_argument("graph curve: f(0) must be positive");
  if (std::abs(f(L)) > 1e-9) throw std::invalid_argument("graph curve: f(L) must be 0");
  constexpr int kProbe = 1000;
  double prev = M;
  for (int i = 1; i <= kProbe; ++i) {
    const double y = f(L * i / kProbe);
    if (!(y < prev)) throw std::invalid_argument("graph curve: f is not strictly decreasing");
    prev = y;
  }
  // Clamp to the domain so callers may probe slightly outside [0, L].
  RealFn fc = [f = std::move(f), L, M](double x) {
    if (x <= 0.0) return M;
    if (x >= L) return 0.0;
    return f(x);
  };
  const Concavity c = options.concavity ? *options.concavity : infer_concavity(fc, L, M);
  RealFn df = options.df ? options.df : central_difference(fc, 0.0, L);
  RealFn d2f = options.d2f ? options.d2f : second_difference(fc, 0.0, L);
  RealFn g = bisection_inverse(fc, L, M);
  RealFn dg = [g, df](double y) { return 1.0 / df(g(y)); };
  RealFn d2g = [g, df, d2f](double y) {
    const double x = g(y);
    const double d = df(x);
    return -d2f(x) / (d * d * d);
  };
  const double area = integrate(fc, 0.0, L, 1e-13);
  Curve::Functions fns{fc, g, df, d2f, dg, d2g};
  return Curve(std::move(name), std::move(fns), L, M, area, c, std::move(options.regularity));
}

Curve make_graph_curve(std::string name, std::vector<std::pair<double, double>> samples,
                       GraphOptions options) {
  if (samples.size() < 2) throw std::invalid_argument("graph curve: need at least two samples");
  if (samples.front().first != 0.0) throw std::invalid_argument("graph curve: first x must be 0");
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i].first > samples[i - 1].first)) {
      throw std::invalid_argument("graph curve: x samples must be strictly increasing");
    }
    if (!(samples[i].second < samples[i - 1].second)) {
      throw std::invalid_argument("graph curve: f samples must be strictly decreasing");
    }
  }
  const double M = samples.front().second;
  const double L = samples.back().first;
  if (!(M > 0.0)) throw std::invalid_argument("graph curve: f(0) must be positive");
  if (std::abs(samples.back().second) > 1e-9) {
    throw std::invalid_argument("graph curve: f(L) must be 0");
  }
  samples.back().second = 0.0;

  auto pts = std::make_shared<const std::vector<std::pair<double, double>>>(std::move(samples));
  RealFn f = [pts, L, M](double x) {
    if (x <= 0.0) return M;
    if (x >= L) return 0.0;
    const auto& v = *pts;
    auto it = std::upper_bound(v.begin(), v.end(), x,
                               [](double a, const auto& p) { return a < p.first; });
    const auto& [x1, y1] = *it;
    const auto& [x0, y0] = *(it - 1);
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
  };
  RealFn g = [pts, L, M](double y) {
    if (y >= M) return 0.0;
    if (y <= 0.0) return L;
    const auto& v = *pts;
    // f values are decreasing: first sample with f < y bounds the segment.
    auto it = std::upper_bound(v.begin(), v.end(), y,
                               [](double a, const auto& p) { return a > p.second; });
    const auto& [x1, y1] = *it;
    const auto& [x0, y0] = *(it - 1);
    return x0 + (x1 - x0) * (y - y0) / (y1 - y0);
  };

  Concavity c;
  if (options.concavity) {
    c = *options.concavity;
  } else {
    const auto& v = *pts;
    double up = 0.0, down = 0.0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
      const double s0 = (v[i].second - v[i - 1].second) / (v[i].first - v[i - 1].first);
      const double s1 = (v[i + 1].second - v[i].second) / (v[i + 1].first - v[i].first);
      up = std::max(up, s1 - s0);
      down = std::max(down, s0 - s1);
    }
    const double tol = 1e-9 * std::max(1.0, M / L);
    if (up <= tol && down <= tol) c = Concavity::line;
    else if (up <= tol) c = Concavity::concave;
    else if (down <= tol) c = Concavity::convex;
    else throw std::invalid_argument("graph curve is neither concave nor convex");
  }

  double area = 0.0;
  for (std::size_t i = 1; i < pts->size(); ++i) {
    const auto& [x0, y0] = (*pts)[i - 1];
    const auto& [x1, y1] = (*pts)[i];
    area += 0.5 * (y0 + y1) * (x1 - x0);
  }
  RealFn df = options.df ? options.df : central_difference(f, 0.0, L);
  RealFn d2f = options.d2f ? options.d2f : second_difference(f, 0.0, L);
  RealFn dg = central_difference(g, 0.0, M);
  RealFn d2g = second_difference(g, 0.0, M);
  Curve::Functions fns{f, g, df, d2f, dg, d2g};
  return Curve(std::move(name), std::move(fns), L, M, area, c, std::move(options.regularity));
}

Curve load_graph_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open curve file: " + path.string());
  std::vector<std::pair<double, double>> samples;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error("curve file line " + std::to_string(lineno) + ": expected x,f(x)");
    }
    try {
      const double x = std::stod(line.substr(0, comma));
      const double y = std::stod(line.substr(comma + 1));
      samples.emplace_back(x, y);
    } catch (const std::invalid_argument&) {
      if (samples.empty() && lineno == 1) continue;  // header
      throw std::runtime_error("curve file line " + std::to_string(lineno) + ": not numeric");
    }
  }
  return make_graph_curve(path.filename().string(), std::move(samples));
}

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument("expected key=value, got '" + token + "'");
    }
    out[token.substr(0, eq)] = token.substr(eq + 1);
  }
  return out;
}

Curve parse_curve_descriptor(std::string_view descriptor) {
  const auto kv = parse_key_values(descriptor);
  const auto get = [&](const std::string& key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument("curve descriptor missing '" + key + "'");
    return it->second;
  };
  const std::string& kind = get("curve");
  if (kind == "p-ellipse") return make_p_ellipse(std::stod(get("p")));
  if (kind == "degenerate") return to_curve(make_degenerate_curve(std::stod(get("sigma"))));
  if (kind == "graph") return load_graph_csv(get("file"));
  throw std::invalid_argument("unknown curve kind '" + kind + "'");
}

}  // namespace shiftlat
