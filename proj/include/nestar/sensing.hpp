#ifndef NESTAR_SENSING_HPP
#define NESTAR_SENSING_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "nestar/array_geometry.hpp"
#include "nestar/comm_link.hpp"

namespace nestar {

/// Genie-aided knowledge of the communication part of a snapshot batch:
/// detected symbols and the channels they rode in on.
struct CommComponents {
  Eigen::MatrixXcd channels;  // M x K_c
  Eigen::MatrixXcd symbols;   // K_c x T, unit-power
};

struct SnapshotBatch {
  Eigen::MatrixXcd samples;   // M x T
  std::vector<double> truth;  // localization-UE angles, radians
  double noise_power = 1.0;
  CommComponents comm;
};

struct SimOptions {
  double noise_power = 1.0;
  int qpsk_offset = 0;  // reserved
};

/// Simulate T uplink snapshots with explicit per-UE channels (columns of
/// `channels`, in scenario order: comm UEs first). Symbols are i.i.d.
/// unit-modulus QPSK; noise is CN(0, noise_power I). Deterministic per seed.
SnapshotBatch simulate_snapshots(const Eigen::MatrixXcd& channels,
                                 const std::vector<UeRole>& roles,
                                 const std::vector<double>& loc_truth, int num_snapshots,
                                 std::uint64_t seed, const SimOptions& opts = {});

/// Scenario convenience overload: all channels LoS with gain sqrt(snr).
SnapshotBatch simulate_snapshots(const UplinkScenario& scenario, int num_snapshots,
                                 std::uint64_t seed, const SimOptions& opts = {});

/// Exact subtraction of the communication signals, leaving localization
/// signals plus noise.
SnapshotBatch cancel_comm(const SnapshotBatch& batch, const CommComponents& comm);

/// (1/T) sum_t y_t y_t^H; Hermitian by construction.
Eigen::MatrixXcd sample_covariance(const SnapshotBatch& batch);

/// Equivalent single-snapshot signal on the virtual array: one entry per lag
/// of the contiguous co-array segment -(Lv-1)..(Lv-1), each obtained by
/// redundancy-averaging the covariance entries of all physical pairs at that
/// lag.
struct VirtualSignal {
  Eigen::VectorXcd z;                  // index 0 <-> lag -(extent-1)
  std::vector<int> averaging_counts;   // pairs averaged per lag
  int extent = 0;                      // Lv = contiguous co-array extent

  int lag_of_index(int idx) const { return idx - (extent - 1); }
};

VirtualSignal coarray_signal(const Eigen::MatrixXcd& covariance, const CoArray& coarray);

/// Rank restoration: average the outer products of the Lv overlapping
/// length-Lv subvectors of z. Output is Lv x Lv positive semidefinite.
Eigen::MatrixXcd spatial_smoothing(const VirtualSignal& vs);

struct DoaEstimate {
  std::vector<double> angles;  // sorted ascending, radians
  std::vector<std::pair<double, double>> spectrum;  // (angle, pseudo-spectrum)
  int num_sources = 0;
};

/// Subspace spectral search on the smoothed virtual-array covariance:
/// pseudo-spectrum 1/||E_n^H a_v(theta)||^2 over a uniform sin(theta) grid,
/// peaks refined by quadratic interpolation of the null spectrum. Throws
/// UnderResolutionError (carrying the peaks found) when num_sources cannot
/// be resolved.
DoaEstimate doa_music(const Eigen::MatrixXcd& smoothed, int num_sources, int grid_size = 4096);

struct RmseResult {
  double rmse_deg = 0.0;
  int failed_trials = 0;
  int total_trials = 0;
  double failure_rate() const {
    return total_trials > 0 ? static_cast<double>(failed_trials) / total_trials : 0.0;
  }
};

/// RMSE in degrees over all sources and trials, matching estimates to truth
/// in sorted order. Trials whose estimate count mismatches the truth count
/// are excluded and reported via failed_trials.
RmseResult rmse(const std::vector<std::vector<double>>& estimates_rad,
                const std::vector<double>& truth_rad);

/// Per-trial truth variant (each trial may have its own source angles).
RmseResult rmse(const std::vector<std::vector<double>>& estimates_rad,
                const std::vector<std::vector<double>>& truth_rad);

}  // namespace nestar

#endif
