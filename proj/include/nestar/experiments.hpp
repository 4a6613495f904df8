#ifndef NESTAR_EXPERIMENTS_HPP
#define NESTAR_EXPERIMENTS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nestar/array_geometry.hpp"
#include "nestar/channel.hpp"
#include "nestar/io.hpp"

namespace nestar {

enum class ExperimentKind { fig3_n1_sweep, fig4_m_sweep, fig5_sensing_first, custom };
enum class ChannelMode { los, one_ring };

/// Configuration for the Monte Carlo harness. Loaded from flat
/// `key = value` text; unknown keys are rejected with the offending name.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::custom;
  int m = 16;
  std::vector<int> m_list;
  double theta_max_deg = 3.58;
  std::vector<double> theta_max_list_deg;
  int k = 7;
  int k_c = 6;
  double receive_snr_db = 20.0;
  ChannelMode channel = ChannelMode::one_ring;
  int num_paths = 10;
  double ring_radius_m = 5.0;
  double center_range_m = 40.0;
  double rician_factor_db = 20.0;
  int trials = 200;
  int snapshots = 200;   // 0 disables the sensing arm
  int music_grid = 4096;
  std::uint64_t seed = 1;
  std::optional<int> nested_n1;  // overrides the nested arm's n1 (n2 = m - n1)
  std::string geometry;          // custom experiment geometry spec
  std::string out;
  std::string plot;

  int k_l() const { return k - k_c; }
  OneRingParams ring_params(double center_angle_rad) const;
};

ExperimentConfig parse_config(const std::map<std::string, std::string>& kv);
ExperimentConfig load_config_file(const std::string& path);

/// Canonical serialization of every field; its FNV-1a hash binds each output
/// CSV to the configuration that produced it.
std::string canonical_config_text(const ExperimentConfig& config);
std::uint64_t config_hash(const ExperimentConfig& config);

double median(std::vector<double> values);

/// Paired one-sided t statistic for mean(a - b) > 0.
double paired_t_statistic(const std::vector<double>& a, const std::vector<double>& b);

struct Fig3Result {
  struct Row {
    int n1 = 0;
    int n2 = 0;
    double mean_rate_per_ue = 0.0;
    double sum_rate = 0.0;
    double rmse_deg = 0.0;  // median per-trial RMSE; NaN when sensing is off
    int trials = 0;
  };
  std::vector<Row> rows;
  // Per-trial mean rates for paired statistics: one series per n1 plus the
  // explicit ULA baseline evaluated with the same trial seeds.
  std::vector<std::vector<double>> nested_trial_rates;
  std::vector<double> ula_trial_rates;
  std::vector<int> rmse_failures;  // per n1
};

/// N1 sweep at fixed M: nested(N1, M-N1) against the compact ULA baseline
/// with shared per-trial draws.
Fig3Result run_fig3(const ExperimentConfig& config);

struct Fig4Result {
  struct Row {
    int m = 0;
    double theta_max_deg = 0.0;
    std::string arch;
    double mean_rate = 0.0;
    double sum_rate = 0.0;
  };
  std::vector<Row> rows;
};

/// M sweep of communication rate for several UE sector widths.
Fig4Result run_fig4(const ExperimentConfig& config);

struct Fig5Result {
  struct Row {
    int m = 0;
    std::string arch;
    double mean_rate = 0.0;
    double rmse_deg = 0.0;
    int rmse_failures = 0;
  };
  std::vector<Row> rows;
  int predicted_crossing_m = -1;  // sector-entry rule
  int observed_crossing_m = -1;   // first sweep point where the rate order flips
};

/// Sensing-first sweep: nested(M/2, M/2) versus ula(M), rates and DoA RMSE.
Fig5Result run_fig5(const ExperimentConfig& config);

struct CustomResult {
  struct Row {
    std::string arch;
    int trials = 0;
    double mean_rate_per_ue = 0.0;
    double sum_rate = 0.0;
    double rmse_deg = 0.0;
    int rmse_failures = 0;
  };
  std::vector<Row> rows;  // configured geometry first, ULA baseline second
  double paired_rate_delta = 0.0;   // configured minus ULA, per-trial mean
  double paired_t_stat = 0.0;
};

/// Single-geometry run paired with a same-M ULA baseline.
CustomResult run_custom(const ExperimentConfig& config);

/// Per-trial paired rate samples for the configured geometry and its same-M
/// ULA baseline (communication only, no sensing arm).
struct RateTrials {
  std::string arm_name;
  std::vector<double> arm_mean_rate, arm_sum_rate;
  std::vector<double> ula_mean_rate, ula_sum_rate;
};

RateTrials run_rate_trials(const ExperimentConfig& config);

ResultTable to_table(const Fig3Result& result);
ResultTable to_table(const Fig4Result& result);
ResultTable to_table(const Fig5Result& result);
ResultTable to_table(const CustomResult& result);

/// Dispatches on config.experiment, writes config.out (and config.plot when
/// set), and returns the rendered table.
ResultTable run_experiment(const ExperimentConfig& config);

const char* to_string(ExperimentKind kind);
const char* to_string(ChannelMode mode);

}  // namespace nestar

#endif
