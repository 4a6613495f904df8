#include "nestar/cli.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nestar/beam_pattern.hpp"
#include "nestar/errors.hpp"
#include "nestar/experiments.hpp"
#include "nestar/io.hpp"
#include "nestar/rng.hpp"
#include "nestar/sensing.hpp"

namespace nestar::cli {

namespace {

constexpr double kPi = 3.14159265358979323846;

nlohmann::json metrics_to_json(const BeamPatternMetrics& m) {
  nlohmann::json j;
  j["n1"] = m.n1;
  j["n2"] = m.n2;
  j["delta1"] = m.delta1;
  j["delta2"] = m.delta2;
  j["delta3"] = m.delta3;
  j["n_th"] = m.n_th;
  j["n_ap"] = m.n_ap;
  j["regime"] = to_string(m.regime);
  j["flmp_lower"] = m.flmp_lower;
  j["flmp_upper"] = m.flmp_upper;
  j["flmp_numeric"] = m.flmp_numeric;
  j["bw"] = m.bw;
  j["plmr_lower"] = m.plmr_lower;
  j["plmr_numeric"] = m.plmr_numeric;
  if (m.delta_int) j["delta_int"] = *m.delta_int;
  else j["delta_int"] = nullptr;
  j["slh_predicted"] = m.slh_predicted;
  auto& lobes = j["grating_lobes"] = nlohmann::json::array();
  for (const auto& lobe : m.grating_lobes) {
    lobes.push_back({{"order", lobe.order},
                     {"position", lobe.position},
                     {"predicted_height", lobe.predicted_height},
                     {"measured_position", lobe.measured_position},
                     {"measured_height", lobe.measured_height},
                     {"reliable", lobe.reliable}});
  }
  return j;
}

void print_metrics_text(const BeamPatternMetrics& m) {
  std::cout << "nested(" << m.n1 << "," << m.n2 << ")  regime=" << to_string(m.regime)
            << "\n"
            << "  delta1=" << format_double(m.delta1) << " delta2=" << format_double(m.delta2)
            << " delta3=" << format_double(m.delta3) << "\n"
            << "  n_th=" << m.n_th << " n_ap=" << m.n_ap << "\n"
            << "  flmp=" << format_double(m.flmp_numeric) << " in ["
            << format_double(m.flmp_lower) << ", " << format_double(m.flmp_upper) << "]"
            << "  bw=" << format_double(m.bw) << "\n"
            << "  plmr=" << format_double(m.plmr_numeric)
            << " (lower bound " << format_double(m.plmr_lower) << ")\n";
  if (m.delta_int)
    std::cout << "  delta_int=" << format_double(*m.delta_int) << "\n";
  std::cout << "  slh_predicted=" << format_double(m.slh_predicted) << "  grating lobes: "
            << m.grating_lobes.size() << "\n";
  for (const auto& lobe : m.grating_lobes) {
    std::cout << "    n=" << lobe.order << " pos=" << format_double(lobe.position)
              << " height=" << format_double(lobe.measured_height)
              << (lobe.reliable ? "" : " (submerged)") << "\n";
  }
}

void print_metrics_csv(const BeamPatternMetrics& m) {
  std::cout << "n1,n2,regime,delta1,delta2,delta3,n_th,n_ap,flmp_lower,flmp_upper,"
               "flmp_numeric,bw,plmr_lower,plmr_numeric,delta_int,slh_predicted\n"
            << m.n1 << ',' << m.n2 << ',' << to_string(m.regime) << ','
            << format_double(m.delta1) << ',' << format_double(m.delta2) << ','
            << format_double(m.delta3) << ',' << m.n_th << ',' << m.n_ap << ','
            << format_double(m.flmp_lower) << ',' << format_double(m.flmp_upper) << ','
            << format_double(m.flmp_numeric) << ',' << format_double(m.bw) << ','
            << format_double(m.plmr_lower) << ',' << format_double(m.plmr_numeric) << ','
            << (m.delta_int ? format_double(*m.delta_int) : "nan") << ','
            << format_double(m.slh_predicted) << '\n';
}

int cmd_beam_metrics(int n1, int n2, bool as_json, bool as_csv) {
  const BeamPatternMetrics m = metrics(n1, n2);
  if (as_json) std::cout << metrics_to_json(m).dump(2) << '\n';
  else if (as_csv) print_metrics_csv(m);
  else print_metrics_text(m);
  return 0;
}

int cmd_beam_pattern(int n1, int n2, int samples, const std::string& out,
                     const std::string& plot) {
  if (samples < 2) throw ConfigError("samples: must be at least 2");
  const ArrayGeometry geom = build_nested(n1, n2);
  ResultTable t;
  t.columns = {"delta", "gain"};
  PlotSeries series{"G(delta)", {}, {}};
  for (int i = 0; i < samples; ++i) {
    const double delta = -2.0 + 4.0 * i / (samples - 1);
    const double g = gain_direct(geom, delta);
    t.add_row({format_double(delta), format_double(g)});
    series.x.push_back(delta);
    series.y.push_back(g);
  }
  std::ostringstream canon;
  canon << "beam-pattern n1=" << n1 << " n2=" << n2 << " samples=" << samples;
  write_csv(out, t, fnv1a64(canon.str()));
  if (!plot.empty())
    write_line_plot_svg(plot, "Beam pattern " + format_geometry(geom), "delta", "gain",
                        {series});
  return 0;
}

int cmd_simulate_rate(const std::string& geometry, int k, int kc, double theta_max_deg,
                      double snr_db, const std::string& channel, int trials,
                      std::uint64_t seed, const std::string& out, const std::string& plot) {
  std::map<std::string, std::string> kv;
  kv["experiment"] = "custom";
  kv["geometry"] = geometry;
  kv["k"] = std::to_string(k);
  kv["k_c"] = std::to_string(kc);
  kv["theta_max_deg"] = format_double(theta_max_deg);
  kv["receive_snr_db"] = format_double(snr_db);
  kv["channel"] = channel;
  kv["trials"] = std::to_string(trials);
  kv["seed"] = std::to_string(seed);
  kv["snapshots"] = "0";
  const ExperimentConfig cfg = parse_config(kv);
  const RateTrials rt = run_rate_trials(cfg);

  ResultTable t;
  t.columns = {"trial", "arch", "mean_rate_per_ue", "sum_rate"};
  for (int i = 0; i < trials; ++i) {
    t.add_row({std::to_string(i), rt.arm_name, format_double(rt.arm_mean_rate[i]),
               format_double(rt.arm_sum_rate[i])});
    t.add_row({std::to_string(i), "ula:" + std::to_string(parse_geometry(geometry).size()),
               format_double(rt.ula_mean_rate[i]), format_double(rt.ula_sum_rate[i])});
  }
  double arm_mean = 0.0;
  double ula_mean = 0.0;
  for (int i = 0; i < trials; ++i) {
    arm_mean += rt.arm_mean_rate[i] / trials;
    ula_mean += rt.ula_mean_rate[i] / trials;
  }
  t.trailing_comments.push_back("mean_rate " + rt.arm_name + "=" + format_double(arm_mean));
  t.trailing_comments.push_back("mean_rate ula=" + format_double(ula_mean));
  write_csv(out, t, config_hash(cfg));
  if (!plot.empty()) {
    PlotSeries a{rt.arm_name, {}, {}};
    PlotSeries b{"ula", {}, {}};
    for (int i = 0; i < trials; ++i) {
      a.x.push_back(i);
      a.y.push_back(rt.arm_mean_rate[i]);
      b.x.push_back(i);
      b.y.push_back(rt.ula_mean_rate[i]);
    }
    write_line_plot_svg(plot, "Per-trial mean rate", "trial", "bits/s/Hz", {a, b});
  }
  return 0;
}

int cmd_simulate_doa(const std::string& geometry, const std::string& sources_deg,
                     double snr_db, int snapshots, int trials, std::uint64_t seed, int grid,
                     const std::string& out) {
  const ArrayGeometry geom = parse_geometry(geometry);
  std::vector<double> sources;
  {
    std::stringstream ss(sources_deg);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        sources.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw ConfigError("sources: invalid angle '" + item + "'");
      }
    }
  }
  if (sources.empty()) throw ConfigError("sources: at least one angle required");
  if (trials < 1) throw ConfigError("trials: must be at least 1");
  if (snapshots < 1) throw ConfigError("snapshots: must be at least 1");

  UplinkScenario scenario;
  scenario.geometry = geom;
  for (double deg : sources)
    scenario.ues.push_back({UeRole::loc, deg * kPi / 180.0, snr_db});
  const CoArray coarray = difference_coarray(geom);

  ResultTable t;
  t.columns = {"trial", "source_idx", "true_deg", "est_deg"};
  std::vector<double> truth_sorted = sources;
  std::sort(truth_sorted.begin(), truth_sorted.end());
  int failed = 0;
  for (int trial = 0; trial < trials; ++trial) {
    const SnapshotBatch batch =
        simulate_snapshots(scenario, snapshots, derive_seed(seed, trial));
    const VirtualSignal vs = coarray_signal(sample_covariance(batch), coarray);
    std::vector<double> est_deg;
    try {
      const DoaEstimate est = doa_music(spatial_smoothing(vs),
                                        static_cast<int>(sources.size()), grid);
      for (double a : est.angles) est_deg.push_back(a * 180.0 / kPi);
    } catch (const UnderResolutionError&) {
      ++failed;
      est_deg.assign(sources.size(), std::numeric_limits<double>::quiet_NaN());
    }
    for (std::size_t si = 0; si < sources.size(); ++si) {
      t.add_row({std::to_string(trial), std::to_string(si),
                 format_double(truth_sorted[si]), format_double(est_deg[si])});
    }
  }
  if (failed > 0)
    t.trailing_comments.push_back("under_resolution_trials=" + std::to_string(failed));

  std::ostringstream canon;
  canon << "simulate-doa geometry=" << geometry << " sources=" << sources_deg
        << " snr_db=" << format_double(snr_db) << " snapshots=" << snapshots
        << " trials=" << trials << " seed=" << seed << " grid=" << grid;
  write_csv(out, t, fnv1a64(canon.str()));
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_override,
              const std::string& plot_override) {
  ExperimentConfig cfg = load_config_file(config_path);
  if (!out_override.empty()) cfg.out = out_override;
  if (!plot_override.empty()) cfg.plot = plot_override;
  if (cfg.out.empty()) throw ConfigError("out: required (config key or --out)");
  run_experiment(cfg);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Nested-array ISAC simulation toolkit"};
  app.require_subcommand(1);

  int n1 = 8, n2 = 8, samples = 2001, k = 7, kc = 6, trials = 200, snapshots = 1000;
  int grid = 4096;
  std::uint64_t seed = 1;
  double theta_max_deg = 3.58, snr_db = 20.0;
  std::string out, plot, geometry = "nested:8,8", channel = "one_ring", sources;
  std::string config_path;
  bool as_json = false, as_csv = false;

  auto* bm = app.add_subcommand("beam-metrics", "Beam-pattern metric record for nested(n1,n2)");
  bm->add_option("--n1", n1)->required();
  bm->add_option("--n2", n2)->required();
  auto* jflag = bm->add_flag("--json", as_json);
  bm->add_flag("--csv", as_csv)->excludes(jflag);

  auto* bp = app.add_subcommand("beam-pattern", "Dump G(delta) samples to CSV");
  bp->add_option("--n1", n1)->required();
  bp->add_option("--n2", n2)->required();
  bp->add_option("--samples", samples);
  bp->add_option("--out", out)->required();
  bp->add_option("--plot", plot);

  auto* sr = app.add_subcommand("simulate-rate", "Paired uplink rate trials vs ULA baseline");
  sr->add_option("--geometry", geometry)->required();
  sr->add_option("--k", k);
  sr->add_option("--kc", kc);
  sr->add_option("--theta-max-deg", theta_max_deg);
  sr->add_option("--snr-db", snr_db);
  sr->add_option("--channel", channel);
  sr->add_option("--trials", trials);
  sr->add_option("--seed", seed);
  sr->add_option("--out", out)->required();
  sr->add_option("--plot", plot);

  auto* sd = app.add_subcommand("simulate-doa", "Co-array DoA estimation trials");
  sd->add_option("--geometry", geometry)->required();
  sd->add_option("--sources", sources, "comma-separated true angles in degrees")->required();
  sd->add_option("--snr-db", snr_db);
  sd->add_option("--snapshots", snapshots);
  sd->add_option("--trials", trials);
  sd->add_option("--seed", seed);
  sd->add_option("--grid", grid);
  sd->add_option("--out", out)->required();

  auto* sw = app.add_subcommand("sweep", "Run a configured experiment sweep");
  sw->add_option("--config", config_path)->required();
  sw->add_option("--out", out);
  sw->add_option("--plot", plot);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }

  try {
    if (bm->parsed()) return cmd_beam_metrics(n1, n2, as_json, as_csv);
    if (bp->parsed()) return cmd_beam_pattern(n1, n2, samples, out, plot);
    if (sr->parsed())
      return cmd_simulate_rate(geometry, k, kc, theta_max_deg, snr_db, channel, trials, seed,
                               out, plot);
    if (sd->parsed())
      return cmd_simulate_doa(geometry, sources, snr_db, snapshots, trials, seed, grid, out);
    if (sw->parsed()) return cmd_sweep(config_path, out, plot);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace nestar::cli
