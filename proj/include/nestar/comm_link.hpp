#ifndef NESTAR_COMM_LINK_HPP
#define NESTAR_COMM_LINK_HPP

#include <vector>

#include "nestar/array_geometry.hpp"

namespace nestar {

enum class UeRole { comm, loc };

struct UeConfig {
  UeRole role = UeRole::comm;
  double angle_rad = 0.0;       // LoS angle, or one-ring center azimuth
  double receive_snr_db = 20.0;
};

/// Multi-user uplink with the communication UEs listed first. Noise power is
/// normalized to 1 and per-UE receive SNRs are baked into the channel scale,
/// so all SINR expressions run with unit transmit powers.
struct UplinkScenario {
  ArrayGeometry geometry;
  std::vector<UeConfig> ues;

  int num_ues() const { return static_cast<int>(ues.size()); }
  int num_comm() const;
  int num_loc() const;
};

/// Maximal-ratio combiner h/||h||.
Eigen::VectorXcd mrc_combiner(const Eigen::VectorXcd& h);

/// General SINR of UE k: |v_k^H h_k|^2 / (sum_{i != k} |v_k^H h_i|^2 + 1).
double sinr_general(int k, const std::vector<Eigen::VectorXcd>& combiners,
                    const std::vector<Eigen::VectorXcd>& channels);

/// MRC closed form parameterized by the beam-pattern correlations:
///   snr_k M / (M sum_{i != k} snr_i rho_ki + 1).
double sinr_from_correlations(int k, const std::vector<double>& receive_snrs,
                              const std::vector<double>& rho_row, int num_antennas);

/// Closed-form LoS SINR with rho_ki taken from the beam pattern of the
/// geometry at delta = sin(theta_k) - sin(theta_i).
double sinr_los_closed_form(int k, const std::vector<double>& angles_rad,
                            const std::vector<double>& receive_snrs,
                            const ArrayGeometry& geom);

/// Shannon rate log2(1 + sinr) in bits/s/Hz.
double achievable_rate(double sinr);

}  // namespace nestar

#endif
