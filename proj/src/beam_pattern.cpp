#include "nestar/beam_pattern.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>

#include "nestar/errors.hpp"

namespace nestar {

namespace {

constexpr double kPi = 3.14159265358979323846;

// sin(n x)/sin(x) with the removable singularity at sin(x) ~ 0 evaluated by
// its limit n cos(n x)/cos(x).
double dirichlet(int n, double x) {
  const double s = std::sin(x);
  if (std::abs(s) < 1e-9) return n * std::cos(n * x) / std::cos(x);
  return std::sin(n * x) / s;
}

double inner_term(int n1, double delta) { return dirichlet(n1, 0.5 * kPi * delta); }

double outer_term(int n1, int n2, double delta) {
  return dirichlet(n2, 0.5 * kPi * (n1 + 1) * delta);
}

double golden_minimize(const std::function<double(double)>& fn, double a, double b,
                       double tol = 1e-10) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = fn(c);
  double fd = fn(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = fn(d);
    }
  }
  return 0.5 * (a + b);
}

// First strict local minimum of fn on (0, 2] scanned at fixed step, then
// refined by golden section over the bracketing interval.
double first_local_minimum(const std::function<double(double)>& fn, double step) {
  double xp = step;
  double xc = 2 * step;
  double gp = fn(xp);
  double gc = fn(xc);
  for (double x = 3 * step; x <= 2.0 + step; x += step) {
    const double xn = std::min(x, 2.0);
    const double gn = fn(xn);
    if (gc < gp && gc < gn) {
      return golden_minimize(fn, xc - step, xc + step);
    }
    xp = xc;
    gp = gc;
    xc = xn;
    gc = gn;
  }
  throw DegeneratePatternError("no local minimum of the beam pattern on (0, 2]");
}

// Root of cos(phi) + g(phi)/(2 n1) on [pi/2, pi] by bisection; the bracket is
// guaranteed (positive at pi/2, negative at pi).
double delta_int_unchecked(int n1, int n2) {
  const auto h = [&](double phi) {
    return std::cos(phi) + dirichlet(n2, phi / n2) / (2.0 * n1);
  };
  double a = kPi / 2;
  double b = kPi;
  if (!(h(a) > 0.0) || !(h(b) < 0.0)) throw DomainError("delta_int bracket failed");
  while (b - a > 1e-13) {
    const double m = 0.5 * (a + b);
    (h(m) > 0.0 ? a : b) = m;
  }
  const double phi = 0.5 * (a + b);
  return 2.0 * phi / (kPi * n2 * (n1 + 1));
}

struct Interval {
  double lo;
  double hi;
  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo - 1e-12 && x <= hi + 1e-12; }
};

}  // namespace

double gain_direct(const ArrayGeometry& geom, double delta) {
  std::complex<double> acc(0.0, 0.0);
  for (int p : geom.positions) {
    const double phase = kPi * (p - 1) * delta;
    acc += std::complex<double>(std::cos(phase), std::sin(phase));
  }
  const double m = static_cast<double>(geom.size());
  return std::norm(acc) / (m * m);
}

PatternDecomposition gain_decomposed(int n1, int n2, double delta) {
  if (n1 < 1 || n2 < 1) throw DomainError("gain_decomposed requires n1, n2 >= 1");
  PatternDecomposition d;
  d.f = inner_term(n1, delta);
  d.g = outer_term(n1, n2, delta);
  d.phi = 0.5 * kPi * n2 * (n1 + 1) * delta;
  const double m = static_cast<double>(n1 + n2);
  d.gain = (d.f * d.f + d.g * d.g + 2.0 * d.f * d.g * std::cos(d.phi)) / (m * m);
  return d;
}

NullPoints null_points(int n1, int n2) {
  if (n1 < 1) throw DomainError("delta1 is undefined for n1 = 0");
  if (n2 < 1) throw DomainError("null_points requires n2 >= 1");
  NullPoints n;
  n.delta1 = 2.0 / n1;
  n.delta2 = 2.0 / (static_cast<double>(n1 + 1) * n2);
  n.delta3 = 0.5 * n.delta2;
  return n;
}

int n_ap(int n1) {
  if (n1 < 1) throw DomainError("n_ap requires n1 >= 1");
  return static_cast<int>(std::floor(std::sqrt(10.0 * n1 * n1 / (n1 + 1.0))));
}

int n_th(int n1) {
  if (n1 < 1) throw DomainError("n_th requires n1 >= 1");
  if (n1 < 7) return 1;
  constexpr int kSamples = 2000;
  constexpr double kPositive = 1e-9;
  int best = 1;
  for (int n2 = 2; n2 <= n1; ++n2) {
    const double d2 = 2.0 / (static_cast<double>(n1 + 1) * n2);
    std::vector<double> g(kSamples);
    for (int k = 1; k <= kSamples; ++k) {
      g[k - 1] = gain_decomposed(n1, n2, d2 * k / kSamples).gain;
    }
    const double h2 = 2.0 * d2 / kSamples;
    bool turns_positive = false;
    for (int k = 1; k + 1 < kSamples; ++k) {
      if ((g[k + 1] - g[k - 1]) / h2 > kPositive) {
        turns_positive = true;
        break;
      }
    }
    if (turns_positive) return n2 - 1;
    best = n2;
  }
  return best;
}

double delta_int(int n1, int n2) {
  if (n1 < 1 || n2 < 1) throw DomainError("delta_int requires n1, n2 >= 1");
  if (n2 <= n_ap(n1)) throw RegimeError("delta_int requires the large-outer regime n2 > n_ap(n1)");
  return delta_int_unchecked(n1, n2);
}

double flmp_numeric(const ArrayGeometry& geom) {
  const bool closed_form =
      geom.kind == ArrayKind::nested && geom.n1 >= 1 && geom.n2 >= 1 && !geom.ula_equivalent;
  std::function<double(double)> fn;
  double step;
  if (closed_form) {
    const int n1 = geom.n1;
    const int n2 = geom.n2;
    fn = [n1, n2](double d) { return gain_decomposed(n1, n2, d).gain; };
    step = null_points(n1, n2).delta3 / 50.0;
  } else {
    fn = [&geom](double d) { return gain_direct(geom, d); };
    step = 2.0 / (50.0 * geom.size());
  }
  return first_local_minimum(fn, step);
}

PTerms p_terms(int n1, int n2) {
  const NullPoints nulls = null_points(n1, n2);
  const double m2 = static_cast<double>(n1 + n2) * (n1 + n2);
  PTerms p;
  {
    const double g1 = outer_term(n1, n2, nulls.delta1);
    p.p1 = g1 * g1 / m2;
  }
  {
    const double f2 = inner_term(n1, nulls.delta2);
    p.p2 = f2 * f2 / m2;
  }
  {
    const double f3 = inner_term(n1, nulls.delta3);
    const double g3 = outer_term(n1, n2, nulls.delta3);
    p.p3 = (f3 * f3 + g3 * g3) / m2;
  }
  {
    const double f4 = inner_term(n1, (n2 - 1) * nulls.delta2);
    p.p4 = f4 * f4 / m2;
  }
  {
    const double f5 = inner_term(n1, n2 * nulls.delta2);
    p.p5 = (f5 * f5 + static_cast<double>(n2) * n2 - 2.0 * n2 * f5) / m2;
  }
  return p;
}

namespace {

// Candidate PLMR lower bounds from every regime case applicable at (and
// tied with) this n2. Regime boundaries overlap by one step, so a tie yields
// two candidates; the caller keeps the tightest one not exceeding the
// numeric value.
std::vector<double> plmr_candidates(int n1, int n2, int nth, int nap) {
  const PTerms p = p_terms(n1, n2);
  std::vector<double> cands;
  if (n2 >= 2 && n2 <= nth) cands.push_back(std::max(1.0 / p.p4, 1.0 / p.p5));
  if (n2 >= nth && n2 <= nap) cands.push_back(std::max(1.0 / p.p3, 1.0 / p.p2));
  if (n2 >= nap) {
    const double pint = gain_decomposed(n1, n2, delta_int_unchecked(n1, n2)).gain;
    cands.push_back(std::max(1.0 / pint, 1.0 / p.p2));
  }
  return cands;
}

std::vector<Interval> flmp_candidates(int n1, int n2, int nth, int nap) {
  const NullPoints nulls = null_points(n1, n2);
  std::vector<Interval> cands;
  if (n2 >= 2 && n2 <= nth)
    cands.push_back({(n2 - 1) * nulls.delta2, 2.0 / (n1 + 1.0)});
  if (n2 >= nth && n2 <= nap) cands.push_back({nulls.delta3, nulls.delta2});
  if (n2 >= nap) cands.push_back({delta_int_unchecked(n1, n2), nulls.delta2});
  return cands;
}

}  // namespace

PlmrBounds plmr(int n1, int n2) {
  if (n1 < 1 || n2 < 1) throw DomainError("plmr requires n1, n2 >= 1");
  const ArrayGeometry geom = build_nested(n1, n2);
  PlmrBounds out;
  out.numeric = 1.0 / gain_direct(geom, flmp_numeric(geom));
  if (geom.ula_equivalent) {
    out.lower_bound = 1.0;
    return out;
  }
  const std::vector<double> cands = plmr_candidates(n1, n2, n_th(n1), n_ap(n1));
  double best = 0.0;
  for (double c : cands) {
    if (c <= out.numeric * (1.0 + 1e-9)) best = std::max(best, c);
  }
  if (best == 0.0) best = *std::min_element(cands.begin(), cands.end());
  out.lower_bound = best;
  return out;
}

std::vector<GratingLobe> grating_lobes(int n1, int n2) {
  if (n1 < 1 || n2 < 1) throw DomainError("grating_lobes requires n1, n2 >= 1");
  const double m = static_cast<double>(n1 + n2);
  const double d2 = 2.0 / (static_cast<double>(n1 + 1) * n2);
  const bool reliable = n2 > n_ap(n1);
  const auto fn = [&](double d) { return gain_decomposed(n1, n2, d).gain; };
  std::vector<GratingLobe> lobes;
  for (int n = 1; n <= n1; ++n) {
    const double pos = 2.0 * n / (n1 + 1.0);
    if (pos > 2.0) break;
    GratingLobe lobe;
    lobe.order = n;
    lobe.position = pos;
    lobe.predicted_height = (n2 - 1.0) * (n2 - 1.0) / (m * m);
    lobe.reliable = reliable;
    const double lo = std::max(pos - d2, 1e-12);
    const double hi = std::min(pos + d2, 2.0);
    constexpr int kScan = 400;
    int best = 0;
    double best_g = -1.0;
    for (int k = 0; k < kScan; ++k) {
      const double x = lo + (hi - lo) * k / (kScan - 1);
      const double g = fn(x);
      if (g > best_g) {
        best_g = g;
        best = k;
      }
    }
    const double a = lo + (hi - lo) * std::max(best - 1, 0) / (kScan - 1);
    const double b = lo + (hi - lo) * std::min(best + 1, kScan - 1) / (kScan - 1);
    lobe.measured_position = golden_minimize([&](double d) { return -fn(d); }, a, b);
    lobe.measured_height = fn(lobe.measured_position);
    lobes.push_back(lobe);
  }
  return lobes;
}

BeamPatternMetrics metrics(int n1, int n2) {
  if (n1 < 0 || n2 < 0 || n1 + n2 < 1) throw ConfigError("metrics requires n1 + n2 >= 1");
  const ArrayGeometry geom = build_nested(n1, n2);
  BeamPatternMetrics out;
  out.n1 = n1;
  out.n2 = n2;

  if (geom.ula_equivalent) {
    const double m = geom.size();
    out.regime = LobeRegime::degenerate_ula;
    out.delta1 = 2.0 / m;
    out.delta2 = std::numeric_limits<double>::quiet_NaN();
    out.delta3 = std::numeric_limits<double>::quiet_NaN();
    out.flmp_numeric = flmp_numeric(geom);
    out.flmp_lower = 2.0 / m - 1e-9;
    out.flmp_upper = 2.0 / m + 1e-9;
    out.bw = 2.0 * out.flmp_numeric;
    out.plmr_lower = 1.0;
    out.plmr_numeric = 1.0 / gain_direct(geom, out.flmp_numeric);
    out.slh_predicted = 0.0;
    return out;
  }

  const NullPoints nulls = null_points(n1, n2);
  out.delta1 = nulls.delta1;
  out.delta2 = nulls.delta2;
  out.delta3 = nulls.delta3;
  out.n_th = n_th(n1);
  out.n_ap = n_ap(n1);
  out.regime = n2 <= out.n_th   ? LobeRegime::small_n2
               : n2 <= out.n_ap ? LobeRegime::mid_n2
                                : LobeRegime::large_n2;
  out.flmp_numeric = flmp_numeric(geom);
  out.bw = 2.0 * out.flmp_numeric;

  const std::vector<Interval> cands = flmp_candidates(n1, n2, out.n_th, out.n_ap);
  const Interval* chosen = nullptr;
  for (const Interval& c : cands) {
    if (!c.contains(out.flmp_numeric)) continue;
    if (chosen == nullptr || c.width() < chosen->width()) chosen = &c;
  }
  if (chosen == nullptr) chosen = &cands.front();
  out.flmp_lower = chosen->lo;
  out.flmp_upper = chosen->hi;

  const PlmrBounds pb = plmr(n1, n2);
  out.plmr_lower = pb.lower_bound;
  out.plmr_numeric = pb.numeric;

  if (n2 >= out.n_ap) out.delta_int = delta_int_unchecked(n1, n2);
  out.grating_lobes = grating_lobes(n1, n2);
  const double m = static_cast<double>(n1 + n2);
  out.slh_predicted = (n2 - 1.0) * (n2 - 1.0) / (m * m);
  return out;
}

const char* to_string(LobeRegime regime) {
  switch (regime) {
    case LobeRegime::small_n2: return "small_N2";
    case LobeRegime::mid_n2: return "mid_N2";
    case LobeRegime::large_n2: return "large_N2";
    case LobeRegime::degenerate_ula: return "degenerate_ula";
  }
  return "unknown";
}

}  // namespace nestar
