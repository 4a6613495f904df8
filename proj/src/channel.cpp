#include "nestar/channel.hpp"

#include <cmath>

#include "nestar/errors.hpp"
#include "nestar/rng.hpp"

namespace nestar {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kMaxRicianDb = 300.0;
}  // namespace

ChannelRealization los_channel(const ArrayGeometry& geom, double angle_rad,
                               std::complex<double> gain) {
  ChannelRealization ch;
  ch.los_angle = angle_rad;
  ch.path_angles = {angle_rad};
  ch.path_gains = {gain};
  ch.h = gain * steering_vector(geom, angle_rad);
  return ch;
}

ChannelRealization one_ring_channel(const ArrayGeometry& geom, const OneRingParams& params,
                                    double receive_snr, std::uint64_t seed) {
  if (params.num_paths < 1) throw ConfigError("one-ring model needs at least one path");
  if (!(params.ring_radius_m < params.center_range_m))
    throw ConfigError("one-ring model requires ring_radius_m < center_range_m");
  if (!(receive_snr > 0.0)) throw ConfigError("receive SNR must be positive");

  const int num_nlos = params.num_paths - 1;
  const double kappa =
      std::pow(10.0, std::min(params.rician_factor_db, kMaxRicianDb) / 10.0);

  // Scatterer placement and per-path gains first, independent of geometry.
  Rng rng(seed);
  ChannelRealization ch;
  ch.los_angle = params.center_angle_rad;
  ch.path_angles.reserve(params.num_paths);
  ch.path_gains.reserve(params.num_paths);
  ch.path_angles.push_back(params.center_angle_rad);
  ch.path_gains.emplace_back(1.0, 0.0);

  const double cx = params.center_range_m * std::sin(params.center_angle_rad);
  const double cy = params.center_range_m * std::cos(params.center_angle_rad);
  const double nlos_scale = num_nlos > 0 ? std::sqrt(1.0 / (kappa * num_nlos)) : 0.0;
  for (int i = 0; i < num_nlos; ++i) {
    const double t = rng.uniform(0.0, 2.0 * kPi);
    const double sx = cx + params.ring_radius_m * std::cos(t);
    const double sy = cy + params.ring_radius_m * std::sin(t);
    ch.path_angles.push_back(std::atan2(sx, sy));
    ch.path_gains.push_back(nlos_scale * rng.cnormal());
  }

  const int m = geom.size();
  Eigen::VectorXcd h = Eigen::VectorXcd::Zero(m);
  for (int i = 0; i < params.num_paths; ++i) {
    h += ch.path_gains[static_cast<std::size_t>(i)] *
         steering_vector_sin(geom, std::sin(ch.path_angles[static_cast<std::size_t>(i)]));
  }
  const double scale = std::sqrt(receive_snr * m) / h.norm();
  for (auto& g : ch.path_gains) g *= scale;
  ch.h = scale * h;
  return ch;
}

}  // namespace nestar
