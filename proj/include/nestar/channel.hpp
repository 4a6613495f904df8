#ifndef NESTAR_CHANNEL_HPP
#define NESTAR_CHANNEL_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "nestar/array_geometry.hpp"

namespace nestar {

/// One-ring scattering geometry around a user. The ring must not enclose the
/// array: ring_radius_m < center_range_m.
struct OneRingParams {
  int num_paths = 10;            // total paths, LoS counted inside
  double ring_radius_m = 5.0;
  double center_range_m = 40.0;
  double rician_factor_db = 20.0;  // LoS power over total NLoS power
  double center_angle_rad = 0.0;
};

/// Channel as a finite sum of steering vectors: h = sum_i beta_i a(theta_i).
struct ChannelRealization {
  Eigen::VectorXcd h;
  std::vector<double> path_angles;                // radians
  std::vector<std::complex<double>> path_gains;   // beta_i, post-normalization
  double los_angle = 0.0;
};

/// Single-path channel h = gain * a(angle); ||h||^2 = |gain|^2 * M.
ChannelRealization los_channel(const ArrayGeometry& geom, double angle_rad,
                               std::complex<double> gain);

/// One-ring multipath realization: one LoS path at the ring-center azimuth
/// plus num_paths-1 scatterers uniform on the ring, i.i.d. complex Gaussian
/// gains with mean power set by the Rician factor. The result is scaled so
/// that ||h||^2 = receive_snr * M (noise power 1, unit transmit power).
/// Deterministic given the seed; draws do not depend on the geometry, so the
/// same seed yields paired realizations across array architectures.
ChannelRealization one_ring_channel(const ArrayGeometry& geom, const OneRingParams& params,
                                    double receive_snr, std::uint64_t seed);

}  // namespace nestar

#endif
