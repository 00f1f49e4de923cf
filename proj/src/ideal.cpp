// SPDX-License-Identifier: Apache-2.0
//
// mmcodebook — hybrid beamforming codebook synthesis and evaluation for
// mmWave uniform planar arrays
// Copyright (C) 2026 mmcodebook contributors

#include "mmcb/ideal.hpp"

#include <cmath>
#include <stdexcept>

namespace mmcb {

namespace {
constexpr double kLambda = kPi * kPi / (kPsiBoundH * kPsiBoundV);

void check_beam_index(const CodebookConfig& cfg, int q, int p) {
  if (q < 1 || q > cfg.q_h || p < 1 || p > cfg.q_v)
    throw std::out_of_range("beam index (q, p) out of range");
}
}  // namespace

void CodebookConfig::validate() const {
  if (q_h < 1 || q_v < 1)
    throw std::invalid_argument("codebook: q_h, q_v must be >= 1");
  if (gamma < 0.0)
    throw std::invalid_argument("codebook: gamma must be >= 0");
  if (l_h < 1 || l_v < 1)
    throw std::invalid_argument("codebook: l_h, l_v must be >= 1");
  if (i_phases < 1)
    throw std::invalid_argument("codebook: i_phases must be >= 1");
  if (mse_grid_per_beam < 1)
    throw std::invalid_argument("codebook: mse_grid_per_beam must be >= 1");
}

std::vector<BeamRegion> partition_regions(const CodebookConfig& cfg) {
  cfg.validate();
  const double dh = cfg.delta_h();
  const double dv = cfg.delta_v();
  std::vector<BeamRegion> regions;
  regions.reserve(static_cast<std::size_t>(cfg.beams()));
  for (int q = 1; q <= cfg.q_h; ++q) {
    for (int p = 1; p <= cfg.q_v; ++p) {
      BeamRegion r;
      r.psi_h_lo = -kPsiBoundH + (q - 1) * dh;
      r.psi_h_hi = -kPsiBoundH + q * dh;
      r.psi_v_lo = -kPsiBoundV + (p - 1) * dv;
      r.psi_v_hi = -kPsiBoundV + p * dv;
      regions.push_back(r);
    }
  }
  return regions;
}

double ideal_level(int antennas, const CodebookConfig& cfg) {
  if (antennas < 1)
    throw std::invalid_argument("ideal_level: antennas must be >= 1");
  const double widen = (1.0 + 2.0 * cfg.gamma) * (1.0 + 2.0 * cfg.gamma);
  const double level = cfg.beams() * kLambda / (antennas * widen);
  return std::min(1.0, level);
}

IdealPattern ideal_pattern(int antennas, const CodebookConfig& cfg, int q,
                           int p) {
  check_beam_index(cfg, q, p);
  const std::vector<BeamRegion> regions = partition_regions(cfg);
  IdealPattern pat;
  pat.region = guard_band_region(
      regions[static_cast<std::size_t>((q - 1) * cfg.q_v + (p - 1))],
      cfg.gamma);
  pat.level = ideal_level(antennas, cfg);
  return pat;
}

Eigen::VectorXd ideal_vector(const CodebookConfig& cfg, const UpaConfig& upa,
                             int q, int p) {
  check_beam_index(cfg, q, p);
  const Eigen::Index nh = static_cast<Eigen::Index>(cfg.l_h) * cfg.q_h;
  const Eigen::Index nv = static_cast<Eigen::Index>(cfg.l_v) * cfg.q_v;
  const double level = ideal_level(upa.antennas(), cfg);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(nh * nv);
  for (int lh = 0; lh < cfg.l_h; ++lh) {
    const Eigen::Index ih = static_cast<Eigen::Index>(q - 1) * cfg.l_h + lh;
    for (int lv = 0; lv < cfg.l_v; ++lv) {
      const Eigen::Index iv = static_cast<Eigen::Index>(p - 1) * cfg.l_v + lv;
      out(ih * nv + iv) = level;
    }
  }
  return out;
}

double rate_upper_bound(double rho, double h_norm_sq, int antennas,
                        const CodebookConfig& cfg) {
  if (rho <= 0.0)
    throw std::invalid_argument("rate_upper_bound: rho must be positive");
  if (h_norm_sq <= 0.0)
    throw std::invalid_argument("rate_upper_bound: ||h||^2 must be positive");
  if (antennas < 1)
    throw std::invalid_argument("rate_upper_bound: antennas must be >= 1");
  return std::log2(1.0 + rho * h_norm_sq * cfg.beams() * kLambda / antennas);
}

BeamRegion guard_band_region(const BeamRegion& region, double gamma) {
  if (gamma < 0.0)
    throw std::invalid_argument("guard_band_region: gamma must be >= 0");
  BeamRegion r = region;
  const double wh = region.psi_h_hi - region.psi_h_lo;
  const double wv = region.psi_v_hi - region.psi_v_lo;
  r.psi_h_lo -= gamma * wh;
  r.psi_h_hi += gamma * wh;
  r.psi_v_lo -= gamma * wv;
  r.psi_v_hi += gamma * wv;
  return r;
}

}  // namespace mmcb
