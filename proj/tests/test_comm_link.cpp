#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "nestar/beam_pattern.hpp"
#include "nestar/channel.hpp"
#include "nestar/comm_link.hpp"
#include "nestar/errors.hpp"
#include "nestar/rng.hpp"

using namespace nestar;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("MRC combiner") {
  Eigen::VectorXcd h(3);
  h << std::complex<double>(2, 0), 0.0, 0.0;
  const Eigen::VectorXcd v = mrc_combiner(h);
  CHECK(v(0) == std::complex<double>(1, 0));
  CHECK(v(1) == std::complex<double>(0, 0));

  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    Eigen::VectorXcd x(8);
    for (int j = 0; j < 8; ++j) x(j) = rng.cnormal();
    const Eigen::VectorXcd u = mrc_combiner(x);
    CHECK(u.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(u.dot(x)) == doctest::Approx(x.norm()).epsilon(1e-13));
  }

  CHECK_THROWS_AS(mrc_combiner(Eigen::VectorXcd::Zero(4)), DomainError);
}

TEST_CASE("isolated UE hits the closed-form SNR") {
  const ArrayGeometry g = build_ula(16);
  const std::vector<Eigen::VectorXcd> h{los_channel(g, 0.35, std::sqrt(100.0)).h};
  const std::vector<Eigen::VectorXcd> v{mrc_combiner(h[0])};
  const double gamma = sinr_general(0, v, h);
  CHECK(gamma == doctest::Approx(1600.0).epsilon(1e-12));
  CHECK(achievable_rate(gamma) == doctest::Approx(std::log2(1601.0)).epsilon(1e-12));
}

TEST_CASE("co-located equal-power UEs") {
  const ArrayGeometry g = build_nested(4, 4);
  const double snr = 31.0;
  std::vector<Eigen::VectorXcd> h{los_channel(g, 0.2, std::sqrt(snr)).h,
                                  los_channel(g, 0.2, std::sqrt(snr)).h};
  std::vector<Eigen::VectorXcd> v{mrc_combiner(h[0]), mrc_combiner(h[1])};
  const double m = g.size();
  CHECK(sinr_general(0, v, h) ==
        doctest::Approx(snr * m / (snr * m + 1.0)).epsilon(1e-12));
}

TEST_CASE("achievable rate anchors") {
  CHECK(achievable_rate(0.0) == 0.0);
  CHECK(achievable_rate(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(achievable_rate(-0.5), DomainError);
}

TEST_CASE("general SINR equals the closed form for LoS scenarios") {
  Rng rng(31337);
  double worst = 0.0;
  for (int scen = 0; scen < 100; ++scen) {
    const int m = 2 + rng.uniform_int(63);
    const int k = 1 + rng.uniform_int(16);
    const int n1 = rng.uniform_int(m + 1);
    const ArrayGeometry geom = build_nested(n1, m - n1);
    std::vector<double> angles(k);
    std::vector<double> snrs(k);
    std::vector<Eigen::VectorXcd> h;
    for (int i = 0; i < k; ++i) {
      angles[i] = rng.uniform(-1.5, 1.5);
      snrs[i] = std::pow(10.0, rng.uniform(0.0, 2.0));
      h.push_back(los_channel(geom, angles[i], std::sqrt(snrs[i])).h);
    }
    std::vector<Eigen::VectorXcd> v;
    for (const auto& hi : h) v.push_back(mrc_combiner(hi));
    for (int ue = 0; ue < k; ++ue) {
      const double a = sinr_general(ue, v, h);
      const double b = sinr_los_closed_form(ue, angles, snrs, geom);
      worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("SINR decreases as an interferer's correlation grows") {
  const std::vector<double> snrs{100.0, 50.0};
  double prev = -1.0;
  for (double rho = 1.0; rho >= 0.0; rho -= 0.05) {
    const double gamma = sinr_from_correlations(0, snrs, {1.0, rho}, 16);
    CHECK(gamma > prev);
    prev = gamma;
  }
}

TEST_CASE("beam-pattern correlation is a valid squared correlation") {
  Rng rng(55);
  const ArrayGeometry g = build_nested(5, 6);
  for (int i = 0; i < 300; ++i) {
    const double rho = gain_direct(g, rng.uniform(-2.0, 2.0));
    CHECK(rho >= 0.0);
    CHECK(rho <= 1.0 + 1e-12);
  }
  CHECK(gain_direct(g, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("degenerate nested geometries yield bitwise-identical rates to the ULA") {
  const std::vector<double> angles{-0.05, 0.01, 0.04, 0.11};
  const std::vector<double> snrs{100.0, 100.0, 100.0, 100.0};
  const ArrayGeometry ula = build_ula(16);
  for (const ArrayGeometry& geom :
       {build_nested(0, 16), build_nested(15, 1), build_nested(16, 0)}) {
    REQUIRE(geom.positions == ula.positions);
    std::vector<Eigen::VectorXcd> hn;
    std::vector<Eigen::VectorXcd> hu;
    for (std::size_t i = 0; i < angles.size(); ++i) {
      hn.push_back(los_channel(geom, angles[i], std::sqrt(snrs[i])).h);
      hu.push_back(los_channel(ula, angles[i], std::sqrt(snrs[i])).h);
    }
    std::vector<Eigen::VectorXcd> vn;
    std::vector<Eigen::VectorXcd> vu;
    for (std::size_t i = 0; i < hn.size(); ++i) {
      vn.push_back(mrc_combiner(hn[i]));
      vu.push_back(mrc_combiner(hu[i]));
    }
    for (int ue = 0; ue < 4; ++ue) {
      CHECK(achievable_rate(sinr_general(ue, vn, hn)) ==
            achievable_rate(sinr_general(ue, vu, hu)));
    }
  }
}

TEST_CASE("interferer parked on a grating lobe degrades SINR as predicted") {
  const ArrayGeometry g = build_nested(32, 32);
  const auto lobes = grating_lobes(32, 32);
  const double lobe_sin = lobes[0].measured_position;  // relative to broadside
  const double snr = 100.0;
  const double m = g.size();

  const std::vector<double> angles{0.0, std::asin(lobe_sin)};
  const std::vector<double> snrs{snr, snr};
  const double isolated = snr * m;
  const double with_interferer = sinr_los_closed_form(0, angles, snrs, g);
  const double predicted_factor = 1.0 + snr * m * (31.0 / 64) * (31.0 / 64);
  const double actual_factor = isolated / with_interferer;
  CHECK(std::abs(actual_factor - predicted_factor) / predicted_factor < 0.15);
}
