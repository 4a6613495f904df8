// Acceptance suite: runs every gate criterion and prints one line per
// criterion. Exit code is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "nestar/array_geometry.hpp"
#include "nestar/beam_pattern.hpp"
#include "nestar/channel.hpp"
#include "nestar/cli.hpp"
#include "nestar/comm_link.hpp"
#include "nestar/errors.hpp"
#include "nestar/experiments.hpp"
#include "nestar/io.hpp"
#include "nestar/rng.hpp"
#include "nestar/sensing.hpp"

namespace fs = std::filesystem;
using namespace nestar;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) { return format_double(v); }

// ---------------------------------------------------------------------------
// 1. Decomposition identity, 1e4 random samples, |closed - direct| < 1e-10
Outcome criterion_decomposition() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(20240601);
  double worst = 0.0;
  int kept = 0;
  while (kept < 10000) {
    const int n1 = 1 + rng.uniform_int(64);
    const int n2 = 1 + rng.uniform_int(64);
    const double delta = rng.uniform(-2.0, 2.0);
    if (std::abs(std::sin(kPi * delta / 2)) < 1e-6) continue;
    if (std::abs(std::sin(kPi * (n1 + 1) * delta / 2)) < 1e-6) continue;
    ++kept;
    const double direct = gain_direct(build_nested(n1, n2), delta);
    const double closed = gain_decomposed(n1, n2, delta).gain;
    worst = std::max(worst, std::abs(direct - closed));
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = worst < 1e-10 && secs < 5.0;
  o.detail = "max |diff| = " + fmt(worst) + ", " + fmt(secs) + " s";
  return o;
}

// ---------------------------------------------------------------------------
// 2. FLMP inside its closed-form bounds over 2 <= N1, N2 <= 40 (1521 configs)
Outcome criterion_flmp_bound_sweep() {
  const auto t0 = std::chrono::steady_clock::now();
  int violations = 0;
  std::string first;
  for (int n1 = 2; n1 <= 40; ++n1) {
    for (int n2 = 2; n2 <= 40; ++n2) {
      const BeamPatternMetrics m = metrics(n1, n2);
      const bool ok = m.flmp_numeric >= m.flmp_lower - 1e-12 &&
                      m.flmp_numeric <= m.flmp_upper + 1e-12;
      if (!ok) {
        ++violations;
        if (first.empty())
          first = " first at (" + std::to_string(n1) + "," + std::to_string(n2) + ")";
      }
    }
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = violations == 0 && secs < 120.0;
  o.detail = std::to_string(violations) + " violations in 1521 configs" + first + ", " +
             fmt(secs) + " s";
  return o;
}

// ---------------------------------------------------------------------------
// 3. N_th reproduction
Outcome criterion_n_th() {
  const int a = n_th(32);
  const int b = n_th(512);
  Outcome o;
  o.pass = a == 4 && b == 11;
  o.detail = "n_th(32) = " + std::to_string(a) + " (want 4), n_th(512) = " +
             std::to_string(b) + " (want 11)";
  return o;
}

// ---------------------------------------------------------------------------
// 4. N_ap formula
Outcome criterion_n_ap() {
  const int a = n_ap(8);
  const int b = n_ap(32);
  Outcome o;
  o.pass = a == 8 && b == 17;
  o.detail = "n_ap(8) = " + std::to_string(a) + " (want 8), n_ap(32) = " +
             std::to_string(b) + " (want 17)";
  return o;
}

// ---------------------------------------------------------------------------
// 5. Dominating side-lobe predictions for (32,32) and (8,8)
Outcome criterion_grating_lobes() {
  Outcome o;
  o.pass = true;

  const double d2_32 = null_points(32, 32).delta2;
  const double slh = 31.0 * 31 / (64.0 * 64);
  double worst_pos = 0.0;
  double worst_height = 0.0;
  for (const GratingLobe& lobe : grating_lobes(32, 32)) {
    worst_pos = std::max(worst_pos, std::abs(lobe.measured_position - lobe.position));
    worst_height =
        std::max(worst_height, std::abs(lobe.measured_height - slh) / slh);
  }
  if (worst_pos > d2_32 || worst_height > 0.15) o.pass = false;

  const ArrayGeometry g88 = build_nested(8, 8);
  const double d2_8 = null_points(8, 8).delta2;
  double worst88 = 0.0;
  double worst88_pos = 0.0;
  for (int n = 1; n <= 8; ++n) {
    const double pos = 2.0 * n / 9;
    const double g = gain_direct(g88, pos);
    worst88 = std::max(worst88, std::abs(g - 49.0 / 256) / (49.0 / 256));
  }
  for (const GratingLobe& lobe : grating_lobes(8, 8)) {
    worst88_pos = std::max(worst88_pos, std::abs(lobe.measured_position - lobe.position));
  }
  if (worst88 > 0.10 || worst88_pos > d2_8) o.pass = false;

  o.detail = "(32,32): pos err " + fmt(worst_pos) + " <= " + fmt(d2_32) + ", height err " +
             fmt(worst_height) + " <= 0.15; (8,8): gain err at 2n/9 " + fmt(worst88) +
             ", pos err " + fmt(worst88_pos);
  return o;
}

// ---------------------------------------------------------------------------
// 6. Co-array DoF of nested(8,8)
Outcome criterion_coarray_dof() {
  const CoArray ca = difference_coarray(build_nested(8, 8));
  const int m = 16;
  Outcome o;
  o.pass = ca.virtual_ula_size() == 143 && ca.virtual_ula_size() == (m * m + 2 * m - 2) / 2;
  o.detail = "virtual ULA size = " + std::to_string(ca.virtual_ula_size()) + " (want 143)";
  return o;
}

// ---------------------------------------------------------------------------
// 7. SINR identity over 1000 random LoS scenarios
Outcome criterion_sinr_identity() {
  Rng rng(777001);
  double worst = 0.0;
  for (int scen = 0; scen < 1000; ++scen) {
    const int m = 2 + rng.uniform_int(63);
    const int k = 1 + rng.uniform_int(16);
    const int n1 = rng.uniform_int(m + 1);
    const ArrayGeometry geom = build_nested(n1, m - n1);
    std::vector<double> angles(static_cast<std::size_t>(k));
    std::vector<double> snrs(static_cast<std::size_t>(k));
    std::vector<Eigen::VectorXcd> h;
    for (int i = 0; i < k; ++i) {
      angles[static_cast<std::size_t>(i)] = rng.uniform(-1.5, 1.5);
      snrs[static_cast<std::size_t>(i)] = std::pow(10.0, rng.uniform(0.0, 2.0));
      h.push_back(los_channel(geom, angles[static_cast<std::size_t>(i)],
                              std::sqrt(snrs[static_cast<std::size_t>(i)]))
                      .h);
    }
    std::vector<Eigen::VectorXcd> v;
    for (const auto& hi : h) v.push_back(mrc_combiner(hi));
    for (int ue = 0; ue < k; ++ue) {
      const double general = sinr_general(ue, v, h);
      const double closed = sinr_los_closed_form(ue, angles, snrs, geom);
      worst = std::max(worst,
                       std::abs(general - closed) / std::max(1.0, std::abs(closed)));
    }
  }
  Outcome o;
  o.pass = worst < 1e-10;
  o.detail = "max relative deviation = " + fmt(worst) + " over 1000 scenarios";
  return o;
}

// ---------------------------------------------------------------------------
// 8. Over-the-physical-DoF sensing: nested(3,3) resolves 9 sources, ula(6) fails
Outcome criterion_sensing_dof() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> truth_deg(9);
  for (int i = 0; i < 9; ++i) truth_deg[static_cast<std::size_t>(i)] = -60.0 + 15.0 * i;

  const ArrayGeometry nested = build_nested(3, 3);
  const CoArray ca = difference_coarray(nested);
  UplinkScenario sc;
  sc.geometry = nested;
  for (double d : truth_deg) sc.ues.push_back({UeRole::loc, d * kPi / 180.0, 20.0});

  std::vector<double> rmses;
  int failed = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const SnapshotBatch batch =
        simulate_snapshots(sc, 2000, derive_seed(880001, trial));
    const VirtualSignal vs = coarray_signal(sample_covariance(batch), ca);
    try {
      const DoaEstimate est = doa_music(spatial_smoothing(vs), 9);
      double sq = 0.0;
      for (int i = 0; i < 9; ++i) {
        const double e =
            est.angles[static_cast<std::size_t>(i)] * 180.0 / kPi -
            truth_deg[static_cast<std::size_t>(i)];
        sq += e * e;
      }
      rmses.push_back(std::sqrt(sq / 9.0));
    } catch (const UnderResolutionError&) {
      ++failed;
    }
  }
  const double med = median(rmses);

  bool ula_fails = false;
  try {
    UplinkScenario su = sc;
    su.geometry = build_ula(6);
    const SnapshotBatch batch = simulate_snapshots(su, 2000, derive_seed(880002, 0));
    const VirtualSignal vs =
        coarray_signal(sample_covariance(batch), difference_coarray(su.geometry));
    doa_music(spatial_smoothing(vs), 9);
  } catch (const UnderResolutionError&) {
    ula_fails = true;
  }

  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = failed == 0 && med < 0.5 && ula_fails && secs < 180.0;
  o.detail = "nested(3,3) median RMSE = " + fmt(med) + " deg (" + std::to_string(failed) +
             " failed trials), ula(6) under-resolves = " + (ula_fails ? "yes" : "no") +
             ", " + fmt(secs) + " s";
  return o;
}

// ---------------------------------------------------------------------------
// 9. fig3 sweep: paired-rate claims
Outcome criterion_fig3(const Fig3Result& res) {
  bool endpoints_equal = true;
  for (int n1 : {0, 15, 16}) {
    endpoints_equal = endpoints_equal &&
                      res.nested_trial_rates[static_cast<std::size_t>(n1)] ==
                          res.ula_trial_rates;
  }
  const double tstat = paired_t_statistic(res.nested_trial_rates[3], res.ula_trial_rates);
  Outcome o;
  o.pass = endpoints_equal && tstat > 2.326;
  o.detail = std::string("endpoints exact = ") + (endpoints_equal ? "yes" : "no") +
             ", paired t(N1=3 vs ULA) = " + fmt(tstat) + " (need > 2.326, n = 2000)";
  return o;
}

// ---------------------------------------------------------------------------
// 10. fig5 sweep: sensing ordering and rate crossing
Outcome criterion_fig5_rmse(const Fig5Result& res) {
  bool all_below = true;
  std::string detail;
  for (std::size_t i = 0; i + 1 < res.rows.size(); i += 2) {
    const auto& nested = res.rows[i];
    const auto& ula = res.rows[i + 1];
    const bool below = nested.rmse_deg < ula.rmse_deg;
    all_below = all_below && below;
    detail += (i ? " " : "") + std::to_string(nested.m) + ":" + fmt(nested.rmse_deg) +
              "<" + fmt(ula.rmse_deg) + (below ? "" : "(!)");
  }
  Outcome o;
  o.pass = all_below;
  o.detail = "median RMSE nested vs ula per M: " + detail;
  return o;
}

Outcome criterion_fig5_crossing_exists(const Fig5Result& res) {
  Outcome o;
  o.pass = res.observed_crossing_m > 0;
  o.detail = o.pass ? "rate order flips at M = " + std::to_string(res.observed_crossing_m)
                    : "rate curves never cross over the sweep";
  return o;
}

Outcome criterion_fig5_crossing_prediction(const Fig5Result& res, int sweep_step) {
  const bool exists = res.observed_crossing_m > 0;
  const bool near = exists &&
                    std::abs(res.observed_crossing_m - res.predicted_crossing_m) <= sweep_step;
  Outcome o;
  o.pass = exists && near;
  o.detail = "observed crossing at M = " + std::to_string(res.observed_crossing_m) +
             ", sector-entry prediction M = " + std::to_string(res.predicted_crossing_m) +
             ", sweep step = " + std::to_string(sweep_step);
  return o;
}

// ---------------------------------------------------------------------------
// 11. CLI determinism: identical seeds produce byte-identical CSV files
std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Outcome criterion_cli_determinism() {
  const fs::path dir = fs::path("acceptance_tmp");
  fs::create_directories(dir);
  const auto path = [&](const std::string& name) { return (dir / name).string(); };

  std::ofstream cfg(path("custom.cfg"));
  cfg << "experiment = custom\ngeometry = nested:3,3\nk = 3\nk_c = 2\n"
         "trials = 5\nsnapshots = 200\nseed = 77\ntheta_max_deg = 20\n";
  cfg.close();

  const std::vector<std::pair<std::string, std::vector<std::string>>> commands = {
      {"beam-pattern",
       {"beam-pattern", "--n1", "8", "--n2", "8", "--samples", "501", "--out", "@"}},
      {"simulate-rate",
       {"simulate-rate", "--geometry", "nested:4,4", "--k", "4", "--kc", "3", "--trials",
        "6", "--seed", "5", "--theta-max-deg", "10", "--out", "@"}},
      {"simulate-doa",
       {"simulate-doa", "--geometry", "nested:3,3", "--sources", "-20,5,30", "--snapshots",
        "300", "--trials", "4", "--seed", "9", "--out", "@"}},
      {"sweep", {"sweep", "--config", path("custom.cfg"), "--out", "@"}},
  };

  Outcome o;
  o.pass = true;
  for (const auto& [name, argv_template] : commands) {
    std::string first;
    for (int round = 0; round < 2; ++round) {
      const std::string out = path(name + "_" + std::to_string(round) + ".csv");
      std::vector<std::string> argv = argv_template;
      for (auto& a : argv)
        if (a == "@") a = out;
      const int rc = nestar::cli::run(argv);
      if (rc != 0) {
        o.pass = false;
        o.detail += name + " exited " + std::to_string(rc) + "; ";
        break;
      }
      const std::string content = slurp(out);
      if (round == 0) first = content;
      else if (content != first || content.empty()) {
        o.pass = false;
        o.detail += name + " not byte-identical; ";
      }
    }
  }
  if (o.pass) o.detail = "beam-pattern, simulate-rate, simulate-doa, sweep all byte-identical";
  return o;
}

int g_index = 0;
int g_failures = 0;

void report(const std::string& name, const Outcome& o) {
  ++g_index;
  if (!o.pass) ++g_failures;
  std::printf("[%s] %2d. %s — %s\n", o.pass ? "PASS" : "FAIL", g_index, name.c_str(),
              o.detail.c_str());
  std::fflush(stdout);
}

}  // namespace

int main() {
  std::printf("nested-array ISAC toolkit acceptance suite\n");
  std::printf("------------------------------------------\n");

  report("decomposition identity (closed form vs direct sum)", criterion_decomposition());
  report("FLMP closed-form bounds, 2<=N1,N2<=40", criterion_flmp_bound_sweep());
  report("N_th reference values", criterion_n_th());
  report("N_ap formula values", criterion_n_ap());
  report("grating-lobe position and height predictions", criterion_grating_lobes());
  report("co-array DoF of nested(8,8)", criterion_coarray_dof());
  report("SINR identity (general vs MRC closed form)", criterion_sinr_identity());
  report("over-the-physical-DoF sensing, nested(3,3) vs ula(6)", criterion_sensing_dof());

  {
    std::map<std::string, std::string> kv;
    kv["experiment"] = "fig3_n1_sweep";
    kv["m"] = "16";
    kv["k"] = "7";
    kv["k_c"] = "6";
    kv["theta_max_deg"] = "3.58";
    kv["channel"] = "one_ring";
    kv["trials"] = "2000";
    kv["snapshots"] = "0";  // rate-only arms; criterion 9 tests rates
    kv["seed"] = "20240915";
    const Fig3Result fig3 = run_fig3(parse_config(kv));
    report("fig3 sweep: degenerate endpoints and the N1=3 advantage",
           criterion_fig3(fig3));
  }

  {
    std::map<std::string, std::string> kv;
    kv["experiment"] = "fig5_sensing_first";
    kv["m_list"] = "8,12,16,20,24,28,32";
    kv["theta_max_deg"] = "18";
    kv["k"] = "7";
    kv["k_c"] = "6";
    kv["channel"] = "one_ring";
    kv["trials"] = "200";
    kv["snapshots"] = "1000";
    kv["seed"] = "31415";
    const auto t0 = std::chrono::steady_clock::now();
    const Fig5Result fig5 = run_fig5(parse_config(kv));
    std::printf("      (fig5 sweep took %s s)\n", fmt(seconds_since(t0)).c_str());
    report("fig5 sweep: nested RMSE below ULA at every M",
           criterion_fig5_rmse(fig5));
    report("fig5 sweep: a rate crossing exists", criterion_fig5_crossing_exists(fig5));
    report("fig5 sweep: crossing within one step of the sector-entry rule",
           criterion_fig5_crossing_prediction(fig5, 4));
  }

  report("CLI determinism (byte-identical reruns)", criterion_cli_determinism());

  std::printf("------------------------------------------\n");
  std::printf("%d of %d criteria passed\n", g_index - g_failures, g_index);
  return g_failures;
}
