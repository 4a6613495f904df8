#include "nestar/comm_link.hpp"

#include <cmath>

#include "nestar/beam_pattern.hpp"
#include "nestar/errors.hpp"

namespace nestar {

int UplinkScenario::num_comm() const {
  int n = 0;
  for (const auto& ue : ues) n += ue.role == UeRole::comm ? 1 : 0;
  return n;
}

int UplinkScenario::num_loc() const { return num_ues() - num_comm(); }

Eigen::VectorXcd mrc_combiner(const Eigen::VectorXcd& h) {
  const double norm = h.norm();
  if (norm == 0.0) throw DomainError("MRC combiner undefined for the zero channel");
  return h / norm;
}

double sinr_general(int k, const std::vector<Eigen::VectorXcd>& combiners,
                    const std::vector<Eigen::VectorXcd>& channels) {
  if (combiners.size() != channels.size())
    throw DimensionError("combiner/channel count mismatch");
  if (k < 0 || k >= static_cast<int>(channels.size()))
    throw DomainError("UE index out of range");
  const Eigen::VectorXcd& v = combiners[static_cast<std::size_t>(k)];
  double interference = 0.0;
  for (std::size_t i = 0; i < channels.size(); ++i) {
    if (static_cast<int>(i) == k) continue;
    interference += std::norm(v.dot(channels[i]));
  }
  const double signal = std::norm(v.dot(channels[static_cast<std::size_t>(k)]));
  return signal / (interference + 1.0);
}

double sinr_from_correlations(int k, const std::vector<double>& receive_snrs,
                              const std::vector<double>& rho_row, int num_antennas) {
  if (receive_snrs.size() != rho_row.size())
    throw DimensionError("snr/correlation count mismatch");
  const double m = static_cast<double>(num_antennas);
  double interference = 0.0;
  for (std::size_t i = 0; i < receive_snrs.size(); ++i) {
    if (static_cast<int>(i) == k) continue;
    interference += receive_snrs[i] * rho_row[i];
  }
  return receive_snrs[static_cast<std::size_t>(k)] * m / (m * interference + 1.0);
}

double sinr_los_closed_form(int k, const std::vector<double>& angles_rad,
                            const std::vector<double>& receive_snrs,
                            const ArrayGeometry& geom) {
  if (angles_rad.size() != receive_snrs.size())
    throw DimensionError("angle/snr count mismatch");
  std::vector<double> rho(angles_rad.size());
  const double sk = std::sin(angles_rad[static_cast<std::size_t>(k)]);
  for (std::size_t i = 0; i < angles_rad.size(); ++i) {
    rho[i] = gain_direct(geom, sk - std::sin(angles_rad[i]));
  }
  return sinr_from_correlations(k, receive_snrs, rho, geom.size());
}

double achievable_rate(double sinr) {
  if (sinr < 0.0) throw DomainError("SINR must be non-negative");
  return std::log2(1.0 + sinr);
}

}  // namespace nestar
