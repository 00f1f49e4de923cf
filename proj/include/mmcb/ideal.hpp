// SPDX-License-Identifier: Apache-2.0
//
// mmcodebook — hybrid beamforming codebook synthesis and evaluation for
// mmWave uniform planar arrays
// Copyright (C) 2026 mmcodebook contributors

#ifndef MMCB_IDEAL_HPP
#define MMCB_IDEAL_HPP

#include <Eigen/Dense>
#include <vector>

#include "mmcb/upa.hpp"

namespace mmcb {

/// Half-open spatial-frequency rectangle [psi_h_lo, psi_h_hi) x
/// [psi_v_lo, psi_v_hi). Guard-banded regions are kept unwrapped, so the
/// bounds may exceed the coverage-region edges.
struct BeamRegion {
  double psi_h_lo = 0.0, psi_h_hi = 0.0;
  double psi_v_lo = 0.0, psi_v_hi = 0.0;

  bool contains(double psi_h, double psi_v) const {
    return psi_h >= psi_h_lo && psi_h < psi_h_hi && psi_v >= psi_v_lo &&
           psi_v < psi_v_hi;
  }
  double area() const { return (psi_h_hi - psi_h_lo) * (psi_v_hi - psi_v_lo); }
};

/// Codebook shape and candidate-generation parameters: Q_h x Q_v beams,
/// optional guard-band fraction gamma, per-axis decomposition grid sizes
/// L_h/L_v, I candidate phase levels, and the MSE-grid density.
struct CodebookConfig {
  int q_h = 1;
  int q_v = 1;
  double gamma = 0.0;
  int l_h = 1;
  int l_v = 1;
  int i_phases = 1;
  int mse_grid_per_beam = 20;

  int beams() const { return q_h * q_v; }
  double delta_h() const { return 2.0 * kPsiBoundH / q_h; }
  double delta_v() const { return 2.0 * kPsiBoundV / q_v; }
  void validate() const;  // throws std::invalid_argument
};

/// Flat target beam pattern: gain `level` inside `region`, zero elsewhere.
struct IdealPattern {
  BeamRegion region;
  double level = 0.0;
};

/// Tiles the coverage region into Q_h x Q_v disjoint rectangles; entry
/// (q-1)*Q_v + (p-1) is the region of beam (q, p).
std::vector<BeamRegion> partition_regions(const CodebookConfig& cfg);

/// Flat in-region gain min{1, Q*Lambda / (M (1+2 gamma)^2)} with
/// Lambda = pi^2 / (psi_bound_h * psi_bound_v) = sqrt(2).
double ideal_level(int antennas, const CodebookConfig& cfg);

IdealPattern ideal_pattern(int antennas, const CodebookConfig& cfg, int q,
                           int p);

/// Target pattern sampled on the per-axis quantized direction grids, in
/// dictionary Kronecker order (horizontal block index outer). Length
/// (L_h Q_h) * (L_v Q_v); nonzero exactly on the (q, p) range pair.
Eigen::VectorXd ideal_vector(const CodebookConfig& cfg, const UpaConfig& upa,
                             int q, int p);

/// log2(1 + rho * ||h||^2 * Q * Lambda / M), the flat-pattern rate bound.
double rate_upper_bound(double rho, double h_norm_sq, int antennas,
                        const CodebookConfig& cfg);

/// Widens each axis extent from delta*[0, 1) to delta*[-gamma, 1+gamma).
BeamRegion guard_band_region(const BeamRegion& region, double gamma);

}  // namespace mmcb

#endif  // MMCB_IDEAL_HPP
