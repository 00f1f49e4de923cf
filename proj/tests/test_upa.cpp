// SPDX-License-Identifier: Apache-2.0
//
// mmcodebook — hybrid beamforming codebook synthesis and evaluation for
// mmWave uniform planar arrays
// Copyright (C) 2026 mmcodebook contributors

#include <doctest.h>

#include "mmcb/upa.hpp"
#include "test_helpers.hpp"

using namespace mmcb;
using mmcb::testing::quantize_phase_oracle;
using mmcb::testing::random_unit_vector;

namespace {
const UpaConfig kTiny{2, 2, 1, 6, 0.5};
}

TEST_CASE("steering_vector matches the progressive-phase formula") {
  const CVector a = steering_vector(2, 0.0);
  CHECK(a(0).real() == doctest::Approx(0.70711).epsilon(1e-4));
  CHECK(a(1).real() == doctest::Approx(0.70711).epsilon(1e-4));
  CHECK(a(0).imag() == doctest::Approx(0.0));

  const CVector b = steering_vector(2, kPi);
  CHECK(b(0).real() == doctest::Approx(0.70711).epsilon(1e-4));
  CHECK(b(1).real() == doctest::Approx(-0.70711).epsilon(1e-4));

  // entrywise hand evaluation of e^{j l pi/2} / 2
  const CVector c = steering_vector(4, kPi / 2.0);
  CHECK(std::abs(c(0) - Complex(0.5, 0.0)) < 1e-12);
  CHECK(std::abs(c(1) - Complex(0.0, 0.5)) < 1e-12);
  CHECK(std::abs(c(2) - Complex(-0.5, 0.0)) < 1e-12);
  CHECK(std::abs(c(3) - Complex(0.0, -0.5)) < 1e-12);
}

TEST_CASE("steering vectors are unit norm for all sizes") {
  SubStream rng(1, 0, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + static_cast<int>(rng.uniform() * 64.0);
    const double psi = rng.uniform(-kPi, kPi);
    CHECK(std::abs(steering_vector(m, psi).norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("planar_steering is the horizontal-outer Kronecker product") {
  const CVector a = planar_steering(kTiny, make_direction(0.0, 0.0));
  for (int i = 0; i < 4; ++i) CHECK(std::abs(a(i) - Complex(0.5, 0.0)) < 1e-12);

  // hand Kronecker: d_2(pi) (x) d_2(0) = [0.5, 0.5, -0.5, -0.5]
  const CVector b = planar_steering(kTiny, make_direction(kPi, 0.0));
  CHECK(std::abs(b(0) - Complex(0.5, 0.0)) < 1e-12);
  CHECK(std::abs(b(1) - Complex(0.5, 0.0)) < 1e-12);
  CHECK(std::abs(b(2) - Complex(-0.5, 0.0)) < 1e-12);
  CHECK(std::abs(b(3) - Complex(-0.5, 0.0)) < 1e-12);

  SubStream rng(2, 0, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const UpaConfig cfg{3, 5, 1, 6, 0.5};
    const double ph = rng.uniform(-kPi, kPi);
    const double pv = rng.uniform(-kPi, kPi);
    const CVector v = planar_steering(cfg, make_direction(ph, pv));
    CHECK(std::abs(v.norm() - 1.0) < 1e-12);
    // 2*pi periodicity per axis
    const CVector w = planar_steering(cfg, make_direction(ph + 2.0 * kPi, pv));
    CHECK((v - w).norm() < 1e-12);
  }
}

TEST_CASE("reference_gain at matched and orthogonal directions") {
  const Direction d0 = make_direction(0.0, 0.0);
  const CVector c = planar_steering(kTiny, d0);
  CHECK(reference_gain(kTiny, c, d0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(reference_gain(kTiny, c, make_direction(kPi, 0.0)) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(reference_gain(kTiny, 2.0 * c, d0), std::invalid_argument);
}

TEST_CASE("reference_gain never exceeds 1") {
  const UpaConfig cfg{4, 3, 1, 6, 0.5};
  SubStream rng(3, 0, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const CVector c = random_unit_vector(cfg.antennas(), rng);
    const Direction d = make_direction(rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi));
    const double g = reference_gain(cfg, c, d);
    CHECK(g >= 0.0);
    CHECK(g <= 1.0 + 1e-12);
  }
}

TEST_CASE("full-period beam-pattern energy equals (2 pi)^2 / M") {
  const UpaConfig cfg{12, 6, 4, 6, 0.5};
  const double expected = 4.0 * kPi * kPi / cfg.antennas();
  SubStream rng(4, 0, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const CVector c = random_unit_vector(cfg.antennas(), rng);
    const double energy = full_period_energy(cfg, c, 512);
    CHECK(std::abs(energy - expected) / expected < 5e-3);
  }
}

TEST_CASE("gain_grid agrees with per-direction reference_gain") {
  const UpaConfig cfg{5, 3, 1, 6, 0.5};
  SubStream rng(5, 0, 0);
  const CVector c = random_unit_vector(cfg.antennas(), rng);
  std::vector<double> ph{-2.1, 0.3, 2.9}, pv{-0.7, 1.4};
  const Eigen::MatrixXd g = gain_grid(cfg, c, ph, pv);
  for (std::size_t i = 0; i < ph.size(); ++i)
    for (std::size_t j = 0; j < pv.size(); ++j)
      CHECK(g(static_cast<int>(i), static_cast<int>(j)) ==
            doctest::Approx(reference_gain(cfg, c, make_direction(ph[i], pv[j])))
                .epsilon(1e-12));
}

TEST_CASE("direction_grid follows the per-range midpoint formula") {
  const std::vector<double> g = direction_grid(8, 2, kPi);
  REQUIRE(g.size() == 16);
  CHECK(g.front() == doctest::Approx(-kPi + kPi / 16.0).epsilon(1e-14));
  CHECK(g.front() == doctest::Approx(-2.9452).epsilon(1e-4));

  const std::vector<double> single = direction_grid(1, 1, kPi);
  REQUIRE(single.size() == 1);
  CHECK(single[0] == doctest::Approx(0.0));

  // vertical spacing 2 * psi_bound / Q
  const std::vector<double> v = direction_grid(4, 2, kPsiBoundV);
  const double delta = v[2] - v[0];
  CHECK(delta == doctest::Approx(kPi / (2.0 * kSqrt2)).epsilon(1e-12));
  CHECK(delta == doctest::Approx(1.1107).epsilon(1e-4));
}

TEST_CASE("full-period dictionary satisfies D D^H = (L Q / M) I") {
  const DirectionDictionary d = build_dictionary(Axis::Horizontal, 12, 8, 8, kPi);
  const double scale = 8.0 * 8.0 / 12.0;
  const CMatrix gram = d.columns * d.columns.adjoint();
  CHECK((gram - scale * CMatrix::Identity(12, 12)).cwiseAbs().maxCoeff() < 1e-9);

  const DirectionDictionary tiny = build_dictionary(Axis::Horizontal, 1, 1, 1, kPi);
  REQUIRE(tiny.columns.rows() == 1);
  REQUIRE(tiny.columns.cols() == 1);
  CHECK(std::abs(tiny.columns(0, 0) - Complex(1.0, 0.0)) < 1e-15);
}

TEST_CASE("partial-period vertical dictionary deviates from scaled identity") {
  const DirectionDictionary d =
      build_dictionary(Axis::Vertical, 6, 8, 8, kPsiBoundV);
  const double scale = 8.0 * 8.0 / 6.0;
  const CMatrix gram = d.columns * d.columns.adjoint();
  // direct matrix-product oracle: the off-diagonal mass is clearly nonzero
  CHECK((gram - scale * CMatrix::Identity(6, 6)).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("dictionary blocks slice the grid by range") {
  const DirectionDictionary d = build_dictionary(Axis::Horizontal, 4, 3, 2, kPi);
  const CMatrix b2 = d.block(2);
  CHECK((b2.col(0) - steering_vector(4, d.grid[2])).norm() < 1e-15);
  CHECK((b2.col(1) - steering_vector(4, d.grid[3])).norm() < 1e-15);
  CHECK_THROWS_AS(d.block(0), std::out_of_range);
  CHECK_THROWS_AS(d.block(4), std::out_of_range);
}

TEST_CASE("quantize_phase matches the brute-force nearest-element oracle") {
  CHECK(quantize_phase(0.8, 2) == doctest::Approx(kPi / 2.0));
  CHECK(quantize_phase(2.0 * kPi / 64.0, 6) ==
        doctest::Approx(2.0 * kPi / 64.0).epsilon(1e-15));
  CHECK(quantize_phase(kPi / 2.0, 1) == doctest::Approx(0.0));  // tie -> lower

  SubStream rng(6, 0, 0);
  for (int trial = 0; trial < 500; ++trial) {
    const int b = 1 + static_cast<int>(rng.uniform() * 6.0);
    const double phase = rng.uniform(0.0, 2.0 * kPi);
    CHECK(quantize_phase(phase, b) ==
          doctest::Approx(quantize_phase_oracle(phase, b)).epsilon(1e-12));
  }
}

TEST_CASE("quantize_phases is idempotent and magnitude-preserving") {
  SubStream rng(7, 0, 0);
  const CMatrix f = mmcb::testing::random_equal_gain(24, 4, rng);
  const CMatrix q1 = quantize_phases(f, 3);
  const CMatrix q2 = quantize_phases(q1, 3);
  CHECK((q1 - q2).cwiseAbs().maxCoeff() < 1e-15);
  for (Eigen::Index j = 0; j < q1.cols(); ++j)
    for (Eigen::Index i = 0; i < q1.rows(); ++i)
      CHECK(std::abs(q1(i, j)) == doctest::Approx(std::abs(f(i, j))).epsilon(1e-15));
}

TEST_CASE("entry phases use the [0, 2 pi) convention with phase(0) = 0") {
  CVector v(3);
  v << Complex(0.0, 0.0), Complex(0.0, -1.0), Complex(-1.0, 0.0);
  const Eigen::VectorXd p = entry_phases(v);
  CHECK(p(0) == 0.0);
  CHECK(p(1) == doctest::Approx(3.0 * kPi / 2.0));
  CHECK(p(2) == doctest::Approx(kPi));
}

TEST_CASE("UpaConfig validation rejects bad geometry") {
  CHECK_THROWS_AS((UpaConfig{0, 2, 1, 6, 0.5}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((UpaConfig{2, 2, 5, 6, 0.5}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((UpaConfig{2, 2, 1, 0, 0.5}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((UpaConfig{2, 2, 1, 6, 0.6}).validate(), std::invalid_argument);
  CHECK_NOTHROW((UpaConfig{2, 2, 4, 6, 0.5}).validate());
}

TEST_CASE("wrap_psi lands in [-pi, pi)") {
  CHECK(wrap_psi(kPi) == doctest::Approx(-kPi));
  CHECK(wrap_psi(-kPi) == doctest::Approx(-kPi));
  CHECK(wrap_psi(3.0 * kPi) == doctest::Approx(-kPi));
  CHECK(wrap_psi(0.5) == doctest::Approx(0.5));
  SubStream rng(8, 0, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const double w = wrap_psi(rng.uniform(-50.0, 50.0));
    CHECK(w >= -kPi);
    CHECK(w < kPi);
  }
}
