#include <cmath>
#include <complex>

#include "doctest.h"
#include "nestar/channel.hpp"
#include "nestar/errors.hpp"
#include "nestar/rng.hpp"

using namespace nestar;

namespace {
constexpr double kPi = 3.14159265358979323846;

OneRingParams ring_at(double angle_rad) {
  OneRingParams p;
  p.center_angle_rad = angle_rad;
  return p;
}
}  // namespace

TEST_CASE("LoS channel") {
  const ChannelRealization flat = los_channel(build_ula(4), 0.0, {1.0, 0.0});
  for (int i = 0; i < 4; ++i) {
    CHECK(flat.h(i).real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(flat.h(i).imag() == doctest::Approx(0.0).epsilon(1e-15));
  }

  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const std::complex<double> beta(rng.normal(), rng.normal());
    const double angle = rng.uniform(-1.4, 1.4);
    const ChannelRealization ch = los_channel(build_nested(3, 4), angle, beta);
    CHECK(ch.h.squaredNorm() == doctest::Approx(std::norm(beta) * 7).epsilon(1e-12));
  }

  const ChannelRealization ph = los_channel(build_nested(2, 3), kPi / 6, {1.0, 0.0});
  const double expected[] = {0, 1, 2, 5, 8};
  for (int i = 0; i < 5; ++i) {
    const double want = std::remainder(kPi / 2 * expected[i], 2 * kPi);
    CHECK(std::remainder(std::arg(ph.h(i)) - want, 2 * kPi) ==
          doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("one-ring realizations are deterministic per seed") {
  const ArrayGeometry g = build_nested(4, 4);
  const ChannelRealization a = one_ring_channel(g, ring_at(0.2), 100.0, 42);
  const ChannelRealization b = one_ring_channel(g, ring_at(0.2), 100.0, 42);
  const ChannelRealization c = one_ring_channel(g, ring_at(0.2), 100.0, 43);
  CHECK((a.h - b.h).norm() == 0.0);
  bool same = true;
  for (std::size_t i = 0; i < a.path_gains.size(); ++i)
    same = same && a.path_gains[i] == c.path_gains[i];
  CHECK_FALSE(same);
}

TEST_CASE("one-ring path angles stay within the tangent cone") {
  const double bound = std::asin(5.0 / 40.0);
  Rng seeds(11);
  for (int trial = 0; trial < 300; ++trial) {
    const double center = -0.3 + 0.002 * trial;
    const ChannelRealization ch =
        one_ring_channel(build_ula(8), ring_at(center), 100.0, seeds.next_u64());
    for (double a : ch.path_angles) {
      CHECK(std::abs(a - ch.los_angle) <= bound + 1e-12);
    }
  }
}

TEST_CASE("one-ring receive SNR normalization and reconstruction") {
  const ArrayGeometry g = build_nested(8, 8);
  Rng seeds(3);
  for (int trial = 0; trial < 100; ++trial) {
    const ChannelRealization ch =
        one_ring_channel(g, ring_at(0.1), 100.0, seeds.next_u64());
    CHECK(ch.h.squaredNorm() == doctest::Approx(100.0 * 16).epsilon(1e-12));
    // stored paths recompose h
    Eigen::VectorXcd rebuilt = Eigen::VectorXcd::Zero(16);
    for (std::size_t i = 0; i < ch.path_gains.size(); ++i)
      rebuilt += ch.path_gains[i] * steering_vector_sin(g, std::sin(ch.path_angles[i]));
    CHECK((rebuilt - ch.h).norm() < 1e-12 * ch.h.norm());
  }
}

TEST_CASE("Rician power split matches the configured factor") {
  // ratio of averaged LoS power to averaged NLoS power over many draws
  OneRingParams params = ring_at(0.05);
  params.rician_factor_db = 7.0;
  const double kappa = std::pow(10.0, 0.7);
  const ArrayGeometry g = build_ula(4);
  double los_power = 0.0;
  double nlos_power = 0.0;
  Rng seeds(99);
  for (int i = 0; i < 10000; ++i) {
    const ChannelRealization ch = one_ring_channel(g, params, 1.0, seeds.next_u64());
    los_power += std::norm(ch.path_gains[0]);
    for (std::size_t pi = 1; pi < ch.path_gains.size(); ++pi)
      nlos_power += std::norm(ch.path_gains[pi]);
  }
  CHECK(los_power / nlos_power == doctest::Approx(kappa).epsilon(0.05));
}

TEST_CASE("infinite Rician factor degenerates to the LoS channel") {
  OneRingParams params = ring_at(0.3);
  params.rician_factor_db = 1e9;  // capped at 300 dB internally
  const ArrayGeometry g = build_nested(2, 3);
  const ChannelRealization ch = one_ring_channel(g, params, 100.0, 7);
  const ChannelRealization los = los_channel(g, 0.3, {1.0, 0.0});
  // collinearity up to normalization
  const double corr = std::abs(ch.h.dot(los.h)) / (ch.h.norm() * los.h.norm());
  CHECK(corr == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("one-ring validation") {
  OneRingParams bad = ring_at(0.0);
  bad.ring_radius_m = 50.0;  // ring would enclose the array
  CHECK_THROWS_AS(one_ring_channel(build_ula(4), bad, 100.0, 1), ConfigError);
  OneRingParams none = ring_at(0.0);
  none.num_paths = 0;
  CHECK_THROWS_AS(one_ring_channel(build_ula(4), none, 100.0, 1), ConfigError);
}
