#include "nestar/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "nestar/errors.hpp"
#include "nestar/rng.hpp"
#include "nestar/sensing.hpp"

namespace nestar {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Seed stream tags; arms share the same trial seed so their draws pair up.
constexpr std::uint64_t kAngleStream = 1;
constexpr std::uint64_t kSnapshotStream = 2;
constexpr std::uint64_t kUeStreamBase = 100;

std::vector<int> parse_int_list(const std::string& text, const std::string& key) {
  std::vector<int> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      vals.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ConfigError(key + ": invalid integer '" + item + "'");
    }
  }
  if (vals.empty()) throw ConfigError(key + ": empty list");
  return vals;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& key) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      vals.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError(key + ": invalid number '" + item + "'");
    }
  }
  if (vals.empty()) throw ConfigError(key + ": empty list");
  return vals;
}

int parse_int(const std::string& text, const std::string& key) {
  try {
    return std::stoi(text);
  } catch (const std::exception&) {
    throw ConfigError(key + ": invalid integer '" + text + "'");
  }
}

double parse_num(const std::string& text, const std::string& key) {
  try {
    return std::stod(text);
  } catch (const std::exception&) {
    throw ConfigError(key + ": invalid number '" + text + "'");
  }
}

}  // namespace

OneRingParams ExperimentConfig::ring_params(double center_angle_rad) const {
  OneRingParams p;
  p.num_paths = num_paths;
  p.ring_radius_m = ring_radius_m;
  p.center_range_m = center_range_m;
  p.rician_factor_db = rician_factor_db;
  p.center_angle_rad = center_angle_rad;
  return p;
}

ExperimentConfig parse_config(const std::map<std::string, std::string>& kv) {
  ExperimentConfig cfg;
  const auto it = kv.find("experiment");
  const std::string kind = it != kv.end() ? it->second : "custom";
  if (kind == "fig3_n1_sweep") {
    cfg.experiment = ExperimentKind::fig3_n1_sweep;
    cfg.trials = 2000;
    cfg.snapshots = 200;
  } else if (kind == "fig4_m_sweep") {
    cfg.experiment = ExperimentKind::fig4_m_sweep;
    cfg.m_list = {8, 12, 16, 20, 24, 28, 32};
    cfg.theta_max_list_deg = {5.0, 10.0, 30.0};
    cfg.trials = 500;
    cfg.snapshots = 0;
  } else if (kind == "fig5_sensing_first") {
    cfg.experiment = ExperimentKind::fig5_sensing_first;
    cfg.m_list = {8, 12, 16, 20, 24, 28, 32};
    cfg.theta_max_deg = 18.0;
    cfg.trials = 200;
    cfg.snapshots = 1000;
  } else if (kind == "custom") {
    cfg.experiment = ExperimentKind::custom;
  } else {
    throw ConfigError("experiment: unknown value '" + kind + "'");
  }

  for (const auto& [key, value] : kv) {
    if (key == "experiment") continue;
    if (key == "m") cfg.m = parse_int(value, key);
    else if (key == "m_list") cfg.m_list = parse_int_list(value, key);
    else if (key == "theta_max_deg") cfg.theta_max_deg = parse_num(value, key);
    else if (key == "theta_max_list_deg") cfg.theta_max_list_deg = parse_double_list(value, key);
    else if (key == "k") cfg.k = parse_int(value, key);
    else if (key == "k_c") cfg.k_c = parse_int(value, key);
    else if (key == "receive_snr_db") cfg.receive_snr_db = parse_num(value, key);
    else if (key == "channel") {
      if (value == "los") cfg.channel = ChannelMode::los;
      else if (value == "one_ring") cfg.channel = ChannelMode::one_ring;
      else throw ConfigError("channel: unknown value '" + value + "'");
    } else if (key == "num_paths") cfg.num_paths = parse_int(value, key);
    else if (key == "ring_radius_m") cfg.ring_radius_m = parse_num(value, key);
    else if (key == "center_range_m") cfg.center_range_m = parse_num(value, key);
    else if (key == "rician_factor_db") cfg.rician_factor_db = parse_num(value, key);
    else if (key == "trials") cfg.trials = parse_int(value, key);
    else if (key == "snapshots") cfg.snapshots = parse_int(value, key);
    else if (key == "music_grid") cfg.music_grid = parse_int(value, key);
    else if (key == "seed") {
      try {
        cfg.seed = static_cast<std::uint64_t>(std::stoull(value));
      } catch (const std::exception&) {
        throw ConfigError("seed: invalid integer '" + value + "'");
      }
    }
    else if (key == "nested_n1") cfg.nested_n1 = parse_int(value, key);
    else if (key == "geometry") cfg.geometry = value;
    else if (key == "out") cfg.out = value;
    else if (key == "plot") cfg.plot = value;
    else throw ConfigError(key + ": unknown configuration key");
  }

  if (cfg.trials < 1) throw ConfigError("trials: must be at least 1");
  if (cfg.k < 1) throw ConfigError("k: must be at least 1");
  if (cfg.k_c < 0 || cfg.k_c > cfg.k) throw ConfigError("k_c: must lie in [0, k]");
  if (cfg.snapshots < 0) throw ConfigError("snapshots: must be non-negative");
  if (cfg.music_grid < 180) throw ConfigError("music_grid: must be at least 180");
  if (!(cfg.theta_max_deg > 0.0 && cfg.theta_max_deg < 90.0))
    throw ConfigError("theta_max_deg: must lie in (0, 90)");
  if (cfg.m < 1) throw ConfigError("m: must be at least 1");
  if (cfg.num_paths < 1) throw ConfigError("num_paths: must be at least 1");
  if (cfg.experiment == ExperimentKind::custom && cfg.geometry.empty())
    throw ConfigError("geometry: required for the custom experiment");
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  return parse_config(load_key_value_file(path));
}

std::string canonical_config_text(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "experiment=" << to_string(cfg.experiment) << '\n';
  out << "m=" << cfg.m << '\n';
  out << "m_list=";
  for (std::size_t i = 0; i < cfg.m_list.size(); ++i) out << (i ? "," : "") << cfg.m_list[i];
  out << '\n';
  out << "theta_max_deg=" << format_double(cfg.theta_max_deg) << '\n';
  out << "theta_max_list_deg=";
  for (std::size_t i = 0; i < cfg.theta_max_list_deg.size(); ++i)
    out << (i ? "," : "") << format_double(cfg.theta_max_list_deg[i]);
  out << '\n';
  out << "k=" << cfg.k << '\n';
  out << "k_c=" << cfg.k_c << '\n';
  out << "receive_snr_db=" << format_double(cfg.receive_snr_db) << '\n';
  out << "channel=" << to_string(cfg.channel) << '\n';
  out << "num_paths=" << cfg.num_paths << '\n';
  out << "ring_radius_m=" << format_double(cfg.ring_radius_m) << '\n';
  out << "center_range_m=" << format_double(cfg.center_range_m) << '\n';
  out << "rician_factor_db=" << format_double(cfg.rician_factor_db) << '\n';
  out << "trials=" << cfg.trials << '\n';
  out << "snapshots=" << cfg.snapshots << '\n';
  out << "music_grid=" << cfg.music_grid << '\n';
  out << "seed=" << cfg.seed << '\n';
  out << "nested_n1=" << (cfg.nested_n1 ? std::to_string(*cfg.nested_n1) : "-") << '\n';
  out << "geometry=" << cfg.geometry << '\n';
  return out.str();
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  return fnv1a64(canonical_config_text(cfg));
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double paired_t_statistic(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw DimensionError("paired t statistic needs two equal-length samples");
  const std::size_t n = a.size();
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i] - mean;
    var += d * d;
  }
  var /= static_cast<double>(n - 1);
  return mean / std::sqrt(var / static_cast<double>(n));
}

namespace {

struct ArmOutcome {
  double mean_rate = 0.0;
  double sum_rate = 0.0;
  std::optional<double> rmse_deg;
  bool sensing_failed = false;
};

// Evaluates one array architecture under the shared per-trial random tape.
class ArmEngine {
 public:
  ArmEngine(const ExperimentConfig& cfg, ArrayGeometry geom, bool sensing)
      : cfg_(cfg),
        geom_(std::move(geom)),
        snr_(std::pow(10.0, cfg.receive_snr_db / 10.0)),
        theta_max_(cfg.theta_max_deg * kPi / 180.0),
        sensing_(sensing && cfg.snapshots > 0 && cfg.k_l() >= 1) {
    if (sensing_) coarray_ = difference_coarray(geom_);
  }

  const ArrayGeometry& geometry() const { return geom_; }

  ArmOutcome run_trial(std::uint64_t trial_seed) const {
    const int k = cfg_.k;
    const int kc = cfg_.k_c;
    Rng angle_rng(derive_seed(trial_seed, kAngleStream));
    std::vector<double> angles(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) angles[static_cast<std::size_t>(i)] =
        angle_rng.uniform(-theta_max_, theta_max_);

    std::vector<Eigen::VectorXcd> channels;
    channels.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      const double angle = angles[static_cast<std::size_t>(i)];
      if (i < kc && cfg_.channel == ChannelMode::one_ring) {
        channels.push_back(one_ring_channel(geom_, cfg_.ring_params(angle), snr_,
                                            derive_seed(trial_seed, kUeStreamBase + i))
                               .h);
      } else {
        channels.push_back(los_channel(geom_, angle, std::sqrt(snr_)).h);
      }
    }

    ArmOutcome out;
    if (kc > 0) {
      std::vector<Eigen::VectorXcd> combiners;
      combiners.reserve(channels.size());
      for (const auto& h : channels) combiners.push_back(mrc_combiner(h));
      for (int i = 0; i < kc; ++i) {
        out.sum_rate += achievable_rate(sinr_general(i, combiners, channels));
      }
      out.mean_rate = out.sum_rate / kc;
    } else {
      out.mean_rate = std::numeric_limits<double>::quiet_NaN();
      out.sum_rate = std::numeric_limits<double>::quiet_NaN();
    }

    if (sensing_) run_sensing(trial_seed, angles, channels, out);
    return out;
  }

 private:
  void run_sensing(std::uint64_t trial_seed, const std::vector<double>& angles,
                   const std::vector<Eigen::VectorXcd>& channels, ArmOutcome& out) const {
    const int k = cfg_.k;
    const int kc = cfg_.k_c;
    Eigen::MatrixXcd h(geom_.size(), k);
    std::vector<UeRole> roles(static_cast<std::size_t>(k), UeRole::comm);
    std::vector<double> truth;
    for (int i = 0; i < k; ++i) {
      h.col(i) = channels[static_cast<std::size_t>(i)];
      if (i >= kc) {
        roles[static_cast<std::size_t>(i)] = UeRole::loc;
        truth.push_back(angles[static_cast<std::size_t>(i)]);
      }
    }
    const SnapshotBatch batch = simulate_snapshots(
        h, roles, truth, cfg_.snapshots, derive_seed(trial_seed, kSnapshotStream));
    const SnapshotBatch residual = cancel_comm(batch, batch.comm);
    const VirtualSignal vs = coarray_signal(sample_covariance(residual), coarray_);
    try {
      const DoaEstimate est =
          doa_music(spatial_smoothing(vs), cfg_.k_l(), cfg_.music_grid);
      std::vector<double> tru = truth;
      std::sort(tru.begin(), tru.end());
      double sq = 0.0;
      for (std::size_t i = 0; i < tru.size(); ++i) {
        const double e = (est.angles[i] - tru[i]) * 180.0 / kPi;
        sq += e * e;
      }
      out.rmse_deg = std::sqrt(sq / static_cast<double>(tru.size()));
    } catch (const UnderResolutionError&) {
      out.sensing_failed = true;
    }
  }

  const ExperimentConfig& cfg_;
  ArrayGeometry geom_;
  double snr_;
  double theta_max_;
  bool sensing_;
  CoArray coarray_;
};

struct ArmAccumulator {
  std::vector<double> mean_rates;
  std::vector<double> sum_rates;
  std::vector<double> rmses;
  int failures = 0;

  void add(const ArmOutcome& o) {
    mean_rates.push_back(o.mean_rate);
    sum_rates.push_back(o.sum_rate);
    if (o.rmse_deg) rmses.push_back(*o.rmse_deg);
    if (o.sensing_failed) ++failures;
  }
  double mean_of_means() const {
    double s = 0.0;
    for (double v : mean_rates) s += v;
    return s / static_cast<double>(mean_rates.size());
  }
  double mean_of_sums() const {
    double s = 0.0;
    for (double v : sum_rates) s += v;
    return s / static_cast<double>(sum_rates.size());
  }
  double median_rmse() const { return median(rmses); }
};

}  // namespace

Fig3Result run_fig3(const ExperimentConfig& cfg) {
  const int m = cfg.m;
  std::vector<ArmEngine> engines;
  engines.reserve(static_cast<std::size_t>(m + 2));
  for (int n1 = 0; n1 <= m; ++n1) engines.emplace_back(cfg, build_nested(n1, m - n1), true);
  engines.emplace_back(cfg, build_ula(m), true);  // explicit baseline, same seeds

  std::vector<ArmAccumulator> acc(engines.size());
  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t ts = derive_seed(cfg.seed, static_cast<std::uint64_t>(t));
    for (std::size_t a = 0; a < engines.size(); ++a) acc[a].add(engines[a].run_trial(ts));
  }

  Fig3Result res;
  for (int n1 = 0; n1 <= m; ++n1) {
    const auto& a = acc[static_cast<std::size_t>(n1)];
    Fig3Result::Row row;
    row.n1 = n1;
    row.n2 = m - n1;
    row.mean_rate_per_ue = a.mean_of_means();
    row.sum_rate = a.mean_of_sums();
    row.rmse_deg = a.median_rmse();
    row.trials = cfg.trials;
    res.rows.push_back(row);
    res.nested_trial_rates.push_back(a.mean_rates);
    res.rmse_failures.push_back(a.failures);
  }
  res.ula_trial_rates = acc.back().mean_rates;
  return res;
}

Fig4Result run_fig4(const ExperimentConfig& cfg) {
  if (cfg.m_list.empty()) throw ConfigError("m_list: required for the fig4 sweep");
  const std::vector<double> thetas =
      cfg.theta_max_list_deg.empty() ? std::vector<double>{cfg.theta_max_deg}
                                     : cfg.theta_max_list_deg;
  Fig4Result res;
  for (double theta : thetas) {
    ExperimentConfig local = cfg;
    local.theta_max_deg = theta;
    for (int m : cfg.m_list) {
      local.m = m;
      const int n1 = cfg.nested_n1.value_or(m / 2);
      if (n1 < 0 || n1 > m) throw ConfigError("nested_n1: must lie in [0, m]");
      const ArmEngine nested(local, build_nested(n1, m - n1), false);
      const ArmEngine ula(local, build_ula(m), false);
      ArmAccumulator an;
      ArmAccumulator au;
      for (int t = 0; t < cfg.trials; ++t) {
        const std::uint64_t ts = derive_seed(cfg.seed, static_cast<std::uint64_t>(t));
        an.add(nested.run_trial(ts));
        au.add(ula.run_trial(ts));
      }
      res.rows.push_back({m, theta, "nested", an.mean_of_means(), an.mean_of_sums()});
      res.rows.push_back({m, theta, "ula", au.mean_of_means(), au.mean_of_sums()});
    }
  }
  return res;
}

namespace {

int predicted_crossing(const ExperimentConfig& cfg) {
  const double sector = 2.0 * std::sin(cfg.theta_max_deg * kPi / 180.0);
  for (int m = 2; m <= 4096; m += 2) {
    if (2.0 / (m / 2 + 1.0) < sector) return m;
  }
  return -1;
}

}  // namespace

Fig5Result run_fig5(const ExperimentConfig& cfg) {
  if (cfg.m_list.empty()) throw ConfigError("m_list: required for the fig5 sweep");
  Fig5Result res;
  std::vector<double> rate_diff;
  for (int m : cfg.m_list) {
    if (m % 2 != 0) throw ConfigError("m_list: fig5 nested arm requires even M values");
    ExperimentConfig local = cfg;
    local.m = m;
    const int n1 = cfg.nested_n1.value_or(m / 2);
    const ArmEngine nested(local, build_nested(n1, m - n1), true);
    const ArmEngine ula(local, build_ula(m), true);
    ArmAccumulator an;
    ArmAccumulator au;
    for (int t = 0; t < cfg.trials; ++t) {
      const std::uint64_t ts = derive_seed(cfg.seed, static_cast<std::uint64_t>(t));
      an.add(nested.run_trial(ts));
      au.add(ula.run_trial(ts));
    }
    res.rows.push_back({m, "nested", an.mean_of_means(), an.median_rmse(), an.failures});
    res.rows.push_back({m, "ula", au.mean_of_means(), au.median_rmse(), au.failures});
    rate_diff.push_back(an.mean_of_means() - au.mean_of_means());
  }
  res.predicted_crossing_m = predicted_crossing(cfg);
  for (std::size_t i = 1; i < rate_diff.size(); ++i) {
    if ((rate_diff[i - 1] > 0.0) != (rate_diff[i] > 0.0)) {
      res.observed_crossing_m = cfg.m_list[i];
      break;
    }
  }
  return res;
}

CustomResult run_custom(const ExperimentConfig& cfg) {
  if (cfg.geometry.empty()) throw ConfigError("geometry: required for the custom experiment");
  const ArrayGeometry geom = parse_geometry(cfg.geometry);
  ExperimentConfig local = cfg;
  local.m = geom.size();
  const ArmEngine arm(local, geom, true);
  const ArmEngine baseline(local, build_ula(geom.size()), true);
  ArmAccumulator aa;
  ArmAccumulator ab;
  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t ts = derive_seed(cfg.seed, static_cast<std::uint64_t>(t));
    aa.add(arm.run_trial(ts));
    ab.add(baseline.run_trial(ts));
  }
  CustomResult res;
  res.rows.push_back({format_geometry(geom), cfg.trials, aa.mean_of_means(),
                      aa.mean_of_sums(), aa.median_rmse(), aa.failures});
  res.rows.push_back({format_geometry(baseline.geometry()), cfg.trials, ab.mean_of_means(),
                      ab.mean_of_sums(), ab.median_rmse(), ab.failures});
  res.paired_rate_delta = aa.mean_of_means() - ab.mean_of_means();
  res.paired_t_stat = cfg.trials >= 2 && cfg.k_c > 0
                          ? paired_t_statistic(aa.mean_rates, ab.mean_rates)
                          : std::numeric_limits<double>::quiet_NaN();
  return res;
}

RateTrials run_rate_trials(const ExperimentConfig& cfg) {
  if (cfg.geometry.empty()) throw ConfigError("geometry: required");
  const ArrayGeometry geom = parse_geometry(cfg.geometry);
  ExperimentConfig local = cfg;
  local.m = geom.size();
  local.snapshots = 0;
  const ArmEngine arm(local, geom, false);
  const ArmEngine baseline(local, build_ula(geom.size()), false);
  RateTrials res;
  res.arm_name = format_geometry(geom);
  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t ts = derive_seed(cfg.seed, static_cast<std::uint64_t>(t));
    const ArmOutcome a = arm.run_trial(ts);
    const ArmOutcome b = baseline.run_trial(ts);
    res.arm_mean_rate.push_back(a.mean_rate);
    res.arm_sum_rate.push_back(a.sum_rate);
    res.ula_mean_rate.push_back(b.mean_rate);
    res.ula_sum_rate.push_back(b.sum_rate);
  }
  return res;
}

ResultTable to_table(const Fig3Result& result) {
  ResultTable t;
  t.columns = {"n1", "n2", "mean_rate_per_ue", "sum_rate", "rmse_deg", "trials"};
  for (const auto& r : result.rows) {
    t.add_row({std::to_string(r.n1), std::to_string(r.n2), format_double(r.mean_rate_per_ue),
               format_double(r.sum_rate), format_double(r.rmse_deg),
               std::to_string(r.trials)});
  }
  for (std::size_t i = 0; i < result.rmse_failures.size(); ++i) {
    if (result.rmse_failures[i] > 0)
      t.trailing_comments.push_back("rmse_failed_trials n1=" + std::to_string(i) + ": " +
                                    std::to_string(result.rmse_failures[i]));
  }
  return t;
}

ResultTable to_table(const Fig4Result& result) {
  ResultTable t;
  t.columns = {"m", "theta_max", "arch", "mean_rate", "sum_rate"};
  for (const auto& r : result.rows) {
    t.add_row({std::to_string(r.m), format_double(r.theta_max_deg), r.arch,
               format_double(r.mean_rate), format_double(r.sum_rate)});
  }
  return t;
}

ResultTable to_table(const Fig5Result& result) {
  ResultTable t;
  t.columns = {"m", "arch", "mean_rate", "rmse_deg"};
  for (const auto& r : result.rows) {
    t.add_row({std::to_string(r.m), r.arch, format_double(r.mean_rate),
               format_double(r.rmse_deg)});
    if (r.rmse_failures > 0)
      t.trailing_comments.push_back("rmse_failed_trials m=" + std::to_string(r.m) + " arch=" +
                                    r.arch + ": " + std::to_string(r.rmse_failures));
  }
  t.trailing_comments.push_back("predicted_crossing_m=" +
                                std::to_string(result.predicted_crossing_m));
  t.trailing_comments.push_back("observed_crossing_m=" +
                                std::to_string(result.observed_crossing_m));
  return t;
}

ResultTable to_table(const CustomResult& result) {
  ResultTable t;
  t.columns = {"arch", "trials", "mean_rate_per_ue", "sum_rate", "rmse_deg"};
  for (const auto& r : result.rows) {
    t.add_row({r.arch, std::to_string(r.trials), format_double(r.mean_rate_per_ue),
               format_double(r.sum_rate), format_double(r.rmse_deg)});
    if (r.rmse_failures > 0)
      t.trailing_comments.push_back("rmse_failed_trials arch=" + r.arch + ": " +
                                    std::to_string(r.rmse_failures));
  }
  t.trailing_comments.push_back("paired_rate_delta=" + format_double(result.paired_rate_delta));
  t.trailing_comments.push_back("paired_t_stat=" + format_double(result.paired_t_stat));
  return t;
}

namespace {

void emit_plot(const ExperimentConfig& cfg, const ResultTable& table) {
  if (cfg.plot.empty()) return;
  std::vector<PlotSeries> series;
  const auto col = [&](const std::string& name) {
    for (std::size_t i = 0; i < table.columns.size(); ++i)
      if (table.columns[i] == name) return static_cast<int>(i);
    return -1;
  };
  if (cfg.experiment == ExperimentKind::fig3_n1_sweep) {
    PlotSeries s{"nested mean rate", {}, {}};
    for (const auto& row : table.rows) {
      s.x.push_back(std::stod(row[0]));
      s.y.push_back(std::stod(row[static_cast<std::size_t>(col("mean_rate_per_ue"))]));
    }
    series.push_back(std::move(s));
    write_line_plot_svg(cfg.plot, "Mean rate vs N1", "N1", "bits/s/Hz", series);
    return;
  }
  // m-sweep families: one series per (arch [, theta]) pair
  const int ci_m = col("m");
  const int ci_arch = col("arch");
  const int ci_rate = col("mean_rate");
  const int ci_theta = col("theta_max");
  std::map<std::string, PlotSeries> by_label;
  for (const auto& row : table.rows) {
    std::string label = row[static_cast<std::size_t>(ci_arch)];
    if (ci_theta >= 0) label += " tm=" + row[static_cast<std::size_t>(ci_theta)];
    auto& s = by_label[label];
    s.label = label;
    s.x.push_back(std::stod(row[static_cast<std::size_t>(ci_m)]));
    s.y.push_back(std::stod(row[static_cast<std::size_t>(ci_rate)]));
  }
  for (auto& [label, s] : by_label) series.push_back(std::move(s));
  write_line_plot_svg(cfg.plot, "Mean rate vs M", "M", "bits/s/Hz", series);
}

}  // namespace

ResultTable run_experiment(const ExperimentConfig& cfg) {
  ResultTable table;
  switch (cfg.experiment) {
    case ExperimentKind::fig3_n1_sweep: table = to_table(run_fig3(cfg)); break;
    case ExperimentKind::fig4_m_sweep: table = to_table(run_fig4(cfg)); break;
    case ExperimentKind::fig5_sensing_first: table = to_table(run_fig5(cfg)); break;
    case ExperimentKind::custom: table = to_table(run_custom(cfg)); break;
  }
  if (!cfg.out.empty()) write_csv(cfg.out, table, config_hash(cfg));
  emit_plot(cfg, table);
  return table;
}

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::fig3_n1_sweep: return "fig3_n1_sweep";
    case ExperimentKind::fig4_m_sweep: return "fig4_m_sweep";
    case ExperimentKind::fig5_sensing_first: return "fig5_sensing_first";
    case ExperimentKind::custom: return "custom";
  }
  return "unknown";
}

const char* to_string(ChannelMode mode) {
  return mode == ChannelMode::los ? "los" : "one_ring";
}

}  // namespace nestar
