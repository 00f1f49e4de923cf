// SPDX-License-Identifier: Apache-2.0
//
// mmcodebook — hybrid beamforming codebook synthesis and evaluation for
// mmWave uniform planar arrays
// Copyright (C) 2026 mmcodebook contributors

#include "mmcb/upa.hpp"

#include <cmath>
#include <stdexcept>

namespace mmcb {

double psi_bound(Axis axis) {
  return axis == Axis::Horizontal ? kPsiBoundH : kPsiBoundV;
}

double wrap_psi(double psi) {
  double p = std::remainder(psi, 2.0 * kPi);  // (-pi, pi]
  if (p >= kPi) p -= 2.0 * kPi;
  return p;
}

void UpaConfig::validate() const {
  if (m_h < 1 || m_v < 1)
    throw std::invalid_argument("upa: antenna counts m_h, m_v must be >= 1");
  if (n_rf < 1 || n_rf > antennas())
    throw std::invalid_argument("upa: n_rf must satisfy 1 <= N <= M");
  if (b_phase < 1)
    throw std::invalid_argument("upa: b_phase must be >= 1");
  if (b_phase > 30)
    throw std::invalid_argument("upa: b_phase larger than 30 bits is not supported");
  if (spacing_over_lambda != 0.5)
    throw std::invalid_argument(
        "upa: only half-wavelength element spacing is supported");
}

Direction make_direction(double psi_h, double psi_v) {
  return Direction{wrap_psi(psi_h), wrap_psi(psi_v)};
}

Direction direction_from_aod(const AngleOfDeparture& aod,
                             double spacing_over_lambda) {
  const double f = 2.0 * kPi * spacing_over_lambda;
  return make_direction(f * std::sin(aod.theta_h) * std::cos(aod.theta_v),
                        f * std::sin(aod.theta_v));
}

CVector steering_vector(int m_a, double psi) {
  if (m_a < 1) throw std::invalid_argument("steering_vector: m_a must be >= 1");
  const double scale = 1.0 / std::sqrt(static_cast<double>(m_a));
  CVector d(m_a);
  for (int l = 0; l < m_a; ++l) d(l) = std::polar(scale, l * psi);
  return d;
}

CMatrix steering_matrix(int m_a, const std::vector<double>& psis) {
  CMatrix d(m_a, static_cast<Eigen::Index>(psis.size()));
  const double scale = 1.0 / std::sqrt(static_cast<double>(m_a));
  for (Eigen::Index c = 0; c < d.cols(); ++c)
    for (int l = 0; l < m_a; ++l)
      d(l, c) = std::polar(scale, l * psis[static_cast<std::size_t>(c)]);
  return d;
}

CVector kron_vec(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

CVector planar_steering(const UpaConfig& cfg, const Direction& dir) {
  return kron_vec(steering_vector(cfg.m_h, dir.psi_h),
                  steering_vector(cfg.m_v, dir.psi_v));
}

double reference_gain(const UpaConfig& cfg, const CVector& c,
                      const Direction& dir) {
  if (c.size() != cfg.antennas())
    throw std::invalid_argument("reference_gain: beamformer length != M");
  if (std::abs(c.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("reference_gain: beamformer is not unit-norm");
  const Complex ip = planar_steering(cfg, dir).dot(c);  // d^H c
  return std::norm(ip);
}

Eigen::MatrixXd gain_grid(const UpaConfig& cfg, const CVector& c,
                          const std::vector<double>& psis_h,
                          const std::vector<double>& psis_v) {
  if (c.size() != cfg.antennas())
    throw std::invalid_argument("gain_grid: beamformer length != M");
  using RowMajorC =
      Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  // c index l_h * m_v + l_v maps to entry (l_h, l_v)
  Eigen::Map<const RowMajorC> cm(c.data(), cfg.m_h, cfg.m_v);
  const CMatrix dh = steering_matrix(cfg.m_h, psis_h);
  const CMatrix dv = steering_matrix(cfg.m_v, psis_v);
  // (d_h (x) d_v)^H c = d_h^H C conj(d_v)
  const CMatrix a = dh.adjoint() * (cm * dv.conjugate());
  return a.cwiseAbs2();
}

double full_period_energy(const UpaConfig& cfg, const CVector& c, int n) {
  if (n < 1) throw std::invalid_argument("full_period_energy: n must be >= 1");
  std::vector<double> grid(static_cast<std::size_t>(n));
  const double step = 2.0 * kPi / n;
  for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = -kPi + (i + 0.5) * step;
  const Eigen::MatrixXd g = gain_grid(cfg, c, grid, grid);
  return g.sum() * step * step;
}

std::vector<double> direction_grid(int q_count, int l_count, double psi_bound) {
  if (q_count < 1 || l_count < 1)
    throw std::invalid_argument("direction_grid: counts must be >= 1");
  if (psi_bound <= 0.0)
    throw std::invalid_argument("direction_grid: psi_bound must be positive");
  const double delta = 2.0 * psi_bound / q_count;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(q_count) * static_cast<std::size_t>(l_count));
  for (int b = 1; b <= q_count; ++b)
    for (int l = 1; l <= l_count; ++l)
      grid.push_back(-psi_bound + (b - 1) * delta + delta * (l - 0.5) / l_count);
  return grid;
}

CMatrix DirectionDictionary::block(int b) const {
  if (b < 1 || b > q_count)
    throw std::out_of_range("DirectionDictionary::block: range index");
  return columns.middleCols(static_cast<Eigen::Index>(b - 1) * l_count, l_count);
}

DirectionDictionary build_dictionary(Axis axis, int m_a, int q_count,
                                     int l_count, double psi_bound) {
  DirectionDictionary d;
  d.axis = axis;
  d.m_a = m_a;
  d.q_count = q_count;
  d.l_count = l_count;
  d.bound = psi_bound;
  d.grid = direction_grid(q_count, l_count, psi_bound);
  d.columns = steering_matrix(m_a, d.grid);
  return d;
}

double quantize_phase(double phase, int b_phase) {
  if (b_phase < 1 || b_phase > 30)
    throw std::invalid_argument("quantize_phase: b_phase out of range");
  const long n = 1L << b_phase;
  const double step = 2.0 * kPi / static_cast<double>(n);
  double p = phase - 2.0 * kPi * std::floor(phase / (2.0 * kPi));
  if (p >= 2.0 * kPi || p < 0.0) p = 0.0;  // fp guard at the wrap point
  long k1 = static_cast<long>(std::floor(p / step));
  if (k1 >= n) k1 = n - 1;
  const double p1 = k1 * step;
  const double p2 = (k1 + 1) * step;
  const double d1 = p - p1;
  const double d2 = p2 - p;
  const long k2 = (k1 + 1) % n;
  const double phase2 = k2 * step;
  if (d1 < d2) return p1;
  if (d2 < d1) return phase2;
  return std::min(p1, phase2);  // exact tie: smaller phase value wins
}

CMatrix quantize_phases(const CMatrix& analog, int b_phase) {
  CMatrix out(analog.rows(), analog.cols());
  for (Eigen::Index j = 0; j < analog.cols(); ++j) {
    for (Eigen::Index i = 0; i < analog.rows(); ++i) {
      const Complex e = analog(i, j);
      const double mag = std::abs(e);
      double ph = (mag == 0.0) ? 0.0 : std::arg(e);
      if (ph < 0.0) ph += 2.0 * kPi;
      out(i, j) = std::polar(mag, quantize_phase(ph, b_phase));
    }
  }
  return out;
}

Eigen::VectorXd entry_phases(const CVector& v) {
  Eigen::VectorXd phases(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) == 0.0) {
      phases(i) = 0.0;
      continue;
    }
    double ph = std::arg(v(i));
    if (ph < 0.0) ph += 2.0 * kPi;
    phases(i) = ph;
  }
  return phases;
}

}  // namespace mmcb
