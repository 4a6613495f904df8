#include "nestar/sensing.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "nestar/errors.hpp"
#include "nestar/rng.hpp"

namespace nestar {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

SnapshotBatch simulate_snapshots(const Eigen::MatrixXcd& channels,
                                 const std::vector<UeRole>& roles,
                                 const std::vector<double>& loc_truth, int num_snapshots,
                                 std::uint64_t seed, const SimOptions& opts) {
  if (num_snapshots < 1) throw ConfigError("need at least one snapshot");
  if (channels.cols() != static_cast<Eigen::Index>(roles.size()))
    throw DimensionError("one channel column per UE required");
  const int m = static_cast<int>(channels.rows());
  const int k = static_cast<int>(channels.cols());

  Rng rng(seed);
  Eigen::MatrixXcd symbols(k, num_snapshots);
  for (int t = 0; t < num_snapshots; ++t) {
    for (int i = 0; i < k; ++i) {
      const double phase = kPi / 4.0 + kPi / 2.0 * rng.uniform_int(4);
      symbols(i, t) = std::complex<double>(std::cos(phase), std::sin(phase));
    }
  }
  const double noise_std = std::sqrt(opts.noise_power);
  Eigen::MatrixXcd noise(m, num_snapshots);
  for (int t = 0; t < num_snapshots; ++t) {
    for (int i = 0; i < m; ++i) noise(i, t) = noise_std * rng.cnormal();
  }

  SnapshotBatch batch;
  batch.samples = channels * symbols + noise;
  batch.truth = loc_truth;
  batch.noise_power = opts.noise_power;

  int num_comm = 0;
  for (const UeRole r : roles) num_comm += r == UeRole::comm ? 1 : 0;
  batch.comm.channels = channels.leftCols(num_comm);
  batch.comm.symbols = symbols.topRows(num_comm);
  return batch;
}

SnapshotBatch simulate_snapshots(const UplinkScenario& scenario, int num_snapshots,
                                 std::uint64_t seed, const SimOptions& opts) {
  const int k = scenario.num_ues();
  const int m = scenario.geometry.size();
  Eigen::MatrixXcd channels(m, k);
  std::vector<UeRole> roles(static_cast<std::size_t>(k));
  std::vector<double> truth;
  for (int i = 0; i < k; ++i) {
    const UeConfig& ue = scenario.ues[static_cast<std::size_t>(i)];
    const double snr = std::pow(10.0, ue.receive_snr_db / 10.0);
    channels.col(i) = std::sqrt(snr) * steering_vector(scenario.geometry, ue.angle_rad);
    roles[static_cast<std::size_t>(i)] = ue.role;
    if (ue.role == UeRole::loc) truth.push_back(ue.angle_rad);
  }
  return simulate_snapshots(channels, roles, truth, num_snapshots, seed, opts);
}

SnapshotBatch cancel_comm(const SnapshotBatch& batch, const CommComponents& comm) {
  SnapshotBatch residual = batch;
  if (comm.channels.cols() == 0) return residual;
  if (comm.channels.rows() != batch.samples.rows() ||
      comm.symbols.cols() != batch.samples.cols() ||
      comm.channels.cols() != comm.symbols.rows())
    throw DimensionError("communication component dimensions do not match the batch");
  residual.samples -= comm.channels * comm.symbols;
  residual.comm.channels = Eigen::MatrixXcd(batch.samples.rows(), 0);
  residual.comm.symbols = Eigen::MatrixXcd(0, batch.samples.cols());
  return residual;
}

Eigen::MatrixXcd sample_covariance(const SnapshotBatch& batch) {
  const auto t = static_cast<double>(batch.samples.cols());
  Eigen::MatrixXcd r = batch.samples * batch.samples.adjoint() / t;
  // enforce exact Hermitian symmetry against rounding
  return 0.5 * (r + r.adjoint().eval());
}

VirtualSignal coarray_signal(const Eigen::MatrixXcd& covariance, const CoArray& coarray) {
  if (covariance.rows() != covariance.cols() ||
      covariance.rows() != static_cast<Eigen::Index>(coarray.num_sensors))
    throw DimensionError("covariance does not match the co-array's physical array");
  const int ext = coarray.contiguous_extent;
  VirtualSignal vs;
  vs.extent = ext;
  vs.z = Eigen::VectorXcd::Zero(2 * ext - 1);
  vs.averaging_counts.assign(static_cast<std::size_t>(2 * ext - 1), 0);
  for (int lag = 0; lag < ext; ++lag) {
    const auto& pairs = coarray.pairs_for(lag);
    std::complex<double> acc(0.0, 0.0);
    for (const auto& [i, j] : pairs) acc += covariance(i, j);
    const std::complex<double> mean = acc / static_cast<double>(pairs.size());
    vs.z(ext - 1 + lag) = mean;
    vs.z(ext - 1 - lag) = std::conj(mean);
    vs.averaging_counts[static_cast<std::size_t>(ext - 1 + lag)] =
        static_cast<int>(pairs.size());
    vs.averaging_counts[static_cast<std::size_t>(ext - 1 - lag)] =
        static_cast<int>(pairs.size());
  }
  return vs;
}

Eigen::MatrixXcd spatial_smoothing(const VirtualSignal& vs) {
  const int lv = vs.extent;
  if (lv < 1 || vs.z.size() != 2 * lv - 1)
    throw DimensionError("virtual signal must cover the contiguous lags -(Lv-1)..(Lv-1)");
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(lv, lv);
  for (int i = 0; i < lv; ++i) {
    const Eigen::VectorXcd zi = vs.z.segment(i, lv);  // lags i-(Lv-1) .. i
    r.noalias() += zi * zi.adjoint();
  }
  return r / static_cast<double>(lv);
}

DoaEstimate doa_music(const Eigen::MatrixXcd& smoothed, int num_sources, int grid_size) {
  const int lv = static_cast<int>(smoothed.rows());
  if (smoothed.cols() != lv) throw DimensionError("smoothed covariance must be square");
  if (grid_size < 180) throw DomainError("doa_music grid must have at least 180 points");
  if (num_sources < 1) throw DomainError("num_sources must be positive");
  if (num_sources >= lv)
    throw UnderResolutionError("virtual array too small for the requested source count", {});

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(smoothed);
  if (eig.info() != Eigen::Success) throw Error("eigendecomposition failed");
  // eigenvalues ascending: signal subspace = trailing num_sources columns
  const Eigen::MatrixXcd es = eig.eigenvectors().rightCols(num_sources);

  // Null spectrum ||E_n^H a||^2 via the signal-subspace complement
  // ||a||^2 - ||E_s^H a||^2; identical value, far cheaper for small D.
  std::vector<double> null_spec(static_cast<std::size_t>(grid_size));
  std::vector<double> sin_grid(static_cast<std::size_t>(grid_size));
  Eigen::VectorXcd a(lv);
  for (int gi = 0; gi < grid_size; ++gi) {
    const double s = -1.0 + 2.0 * gi / (grid_size - 1);
    sin_grid[static_cast<std::size_t>(gi)] = s;
    for (int mi = 0; mi < lv; ++mi) {
      const double phase = kPi * mi * s;
      a(mi) = std::complex<double>(std::cos(phase), std::sin(phase));
    }
    const double proj = (es.adjoint() * a).squaredNorm();
    null_spec[static_cast<std::size_t>(gi)] = std::max(lv - proj, 0.0);
  }

  DoaEstimate est;
  est.num_sources = num_sources;
  est.spectrum.reserve(static_cast<std::size_t>(grid_size));
  for (int gi = 0; gi < grid_size; ++gi) {
    const double p = 1.0 / std::max(null_spec[static_cast<std::size_t>(gi)], 1e-300);
    est.spectrum.emplace_back(std::asin(sin_grid[static_cast<std::size_t>(gi)]), p);
  }

  // Peak detection tolerates exact ties on the left so that a maximum falling
  // midway between two grid points is still registered once.
  std::vector<int> peaks;
  for (int gi = 1; gi + 1 < grid_size; ++gi) {
    const double p = est.spectrum[static_cast<std::size_t>(gi)].second;
    if (p >= est.spectrum[static_cast<std::size_t>(gi - 1)].second &&
        p > est.spectrum[static_cast<std::size_t>(gi + 1)].second) {
      peaks.push_back(gi);
    }
  }
  std::sort(peaks.begin(), peaks.end(), [&](int a_, int b_) {
    return est.spectrum[static_cast<std::size_t>(a_)].second >
           est.spectrum[static_cast<std::size_t>(b_)].second;
  });

  const auto refine = [&](int gi) {
    const double d0 = null_spec[static_cast<std::size_t>(gi - 1)];
    const double d1 = null_spec[static_cast<std::size_t>(gi)];
    const double d2 = null_spec[static_cast<std::size_t>(gi + 1)];
    const double curv = d0 - 2.0 * d1 + d2;
    double offset = curv > 0.0 ? 0.5 * (d0 - d2) / curv : 0.0;
    offset = std::clamp(offset, -1.0, 1.0);
    const double step = 2.0 / (grid_size - 1);
    const double s = std::clamp(sin_grid[static_cast<std::size_t>(gi)] + offset * step,
                                -1.0, 1.0);
    return std::asin(s);
  };

  if (static_cast<int>(peaks.size()) < num_sources) {
    std::vector<double> found;
    for (int gi : peaks) found.push_back(refine(gi));
    std::sort(found.begin(), found.end());
    throw UnderResolutionError("found " + std::to_string(peaks.size()) +
                                   " spectral peaks for " + std::to_string(num_sources) +
                                   " sources",
                               std::move(found));
  }
  peaks.resize(static_cast<std::size_t>(num_sources));
  for (int gi : peaks) est.angles.push_back(refine(gi));
  std::sort(est.angles.begin(), est.angles.end());
  return est;
}

namespace {

RmseResult rmse_impl(const std::vector<std::vector<double>>& estimates_rad,
                     const std::vector<std::vector<double>>& truth_rad) {
  RmseResult res;
  res.total_trials = static_cast<int>(estimates_rad.size());
  double sq_sum = 0.0;
  long count = 0;
  for (std::size_t t = 0; t < estimates_rad.size(); ++t) {
    const auto& truth = truth_rad[t];
    if (estimates_rad[t].size() != truth.size()) {
      ++res.failed_trials;
      continue;
    }
    std::vector<double> est = estimates_rad[t];
    std::vector<double> tru = truth;
    std::sort(est.begin(), est.end());
    std::sort(tru.begin(), tru.end());
    for (std::size_t i = 0; i < est.size(); ++i) {
      const double e = (est[i] - tru[i]) * 180.0 / kPi;
      sq_sum += e * e;
      ++count;
    }
  }
  res.rmse_deg = count > 0 ? std::sqrt(sq_sum / static_cast<double>(count)) : 0.0;
  return res;
}

}  // namespace

RmseResult rmse(const std::vector<std::vector<double>>& estimates_rad,
                const std::vector<double>& truth_rad) {
  std::vector<std::vector<double>> truths(estimates_rad.size(), truth_rad);
  return rmse_impl(estimates_rad, truths);
}

RmseResult rmse(const std::vector<std::vector<double>>& estimates_rad,
                const std::vector<std::vector<double>>& truth_rad) {
  if (estimates_rad.size() != truth_rad.size())
    throw DimensionError("one truth list per trial required");
  return rmse_impl(estimates_rad, truth_rad);
}

}  // namespace nestar
