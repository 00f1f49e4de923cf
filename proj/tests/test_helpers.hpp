// SPDX-License-Identifier: Apache-2.0
//
// mmcodebook — hybrid beamforming codebook synthesis and evaluation for
// mmWave uniform planar arrays
// Copyright (C) 2026 mmcodebook contributors

#ifndef MMCB_TEST_HELPERS_HPP
#define MMCB_TEST_HELPERS_HPP

#include <cmath>
#include <complex>

#include "mmcb/channel.hpp"
#include "mmcb/upa.hpp"

namespace mmcb::testing {

inline CVector random_unit_vector(int m, SubStream& rng) {
  CVector v(m);
  for (int i = 0; i < m; ++i) v(i) = rng.cnormal();
  return v / v.norm();
}

inline CMatrix random_equal_gain(int m, int n, SubStream& rng) {
  CMatrix f(m, n);
  const double mag = 1.0 / std::sqrt(static_cast<double>(m));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i)
      f(i, j) = std::polar(mag, rng.uniform(0.0, 2.0 * kPi));
  return f;
}

inline double circular_distance(double a, double b) {
  return std::abs(std::remainder(a - b, 2.0 * kPi));
}

// independent nearest-element search over the whole phase grid
inline double quantize_phase_oracle(double phase, int b) {
  const long n = 1L << b;
  double best_phase = 0.0;
  double best_dist = circular_distance(phase, 0.0);
  for (long k = 1; k < n; ++k) {
    const double p = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
    const double d = circular_distance(phase, p);
    if (d < best_dist || (d == best_dist && p < best_phase)) {
      best_dist = d;
      best_phase = p;
    }
  }
  return best_phase;
}

}  // namespace mmcb::testing

#endif  // MMCB_TEST_HELPERS_HPP
