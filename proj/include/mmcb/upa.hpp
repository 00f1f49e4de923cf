// SPDX-License-Identifier: Apache-2.0
//
// mmcodebook — hybrid beamforming codebook synthesis and evaluation for
// mmWave uniform planar arrays
// Copyright (C) 2026 mmcodebook contributors

#ifndef MMCB_UPA_HPP
#define MMCB_UPA_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace mmcb {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.41421356237309504880;

/// Spatial-frequency extent of the sectorized coverage region per axis:
/// psi_h in [-pi, pi), psi_v in [-pi/sqrt(2), pi/sqrt(2)).
constexpr double kPsiBoundH = kPi;
constexpr double kPsiBoundV = kPi / kSqrt2;

enum class Axis { Horizontal, Vertical };

double psi_bound(Axis axis);

/// Wraps a spatial frequency into [-pi, pi).
double wrap_psi(double psi);

/// Planar array geometry and hybrid-beamforming hardware parameters.
/// M = m_h * m_v antennas driven by n_rf chains; analog phase shifters have
/// b_phase control bits; element spacing is fixed at half a wavelength.
struct UpaConfig {
  int m_h = 1;
  int m_v = 1;
  int n_rf = 1;
  int b_phase = 6;
  double spacing_over_lambda = 0.5;

  int antennas() const { return m_h * m_v; }
  void validate() const;  // throws std::invalid_argument
};

/// A beam direction in spatial frequencies, wrapped into [-pi, pi) per axis.
struct Direction {
  double psi_h = 0.0;
  double psi_v = 0.0;
};

Direction make_direction(double psi_h, double psi_v);

/// Physical departure angles: azimuth in [-pi/2, pi/2), elevation in
/// [-pi/4, pi/4).
struct AngleOfDeparture {
  double theta_h = 0.0;
  double theta_v = 0.0;
};

/// psi_h = 2*pi*d/lambda * sin(theta_h) * cos(theta_v),
/// psi_v = 2*pi*d/lambda * sin(theta_v).
Direction direction_from_aod(const AngleOfDeparture& aod,
                             double spacing_over_lambda = 0.5);

/// Array response vector (1/sqrt(m)) * [1, e^{j psi}, ..., e^{j(m-1) psi}].
CVector steering_vector(int m_a, double psi);

/// Columns are steering vectors at the given directions; m_a x psis.size().
CMatrix steering_matrix(int m_a, const std::vector<double>& psis);

/// Planar response d_{M_h}(psi_h) (x) d_{M_v}(psi_v); the horizontal index is
/// the outer Kronecker factor, so entry (l_h * m_v + l_v) has phase
/// l_h*psi_h + l_v*psi_v.
CVector planar_steering(const UpaConfig& cfg, const Direction& dir);

CVector kron_vec(const CVector& a, const CVector& b);

/// Reference gain |d_M(psi_h, psi_v)^H c|^2 of a unit-norm beamformer.
/// Throws std::invalid_argument if c is not unit-norm within 1e-9.
double reference_gain(const UpaConfig& cfg, const CVector& c,
                      const Direction& dir);

/// Reference gain of c at every (psis_h[i], psis_v[j]); returns an
/// n_h x n_v matrix. Separable evaluation, no per-direction norm check.
Eigen::MatrixXd gain_grid(const UpaConfig& cfg, const CVector& c,
                          const std::vector<double>& psis_h,
                          const std::vector<double>& psis_v);

/// Midpoint-rule integral of the beam pattern of c over one full period
/// [-pi, pi)^2 using an n x n grid. Equals (2 pi)^2 / M for unit-norm c.
double full_period_energy(const UpaConfig& cfg, const CVector& c, int n = 512);

/// Quantized beam directions for one axis: Q_a contiguous ranges of width
/// delta = 2*psi_bound/q_count, each sampled at l_count interior midpoint
/// offsets delta*(l - 0.5)/l_count. Ordered by (range, offset) ascending.
std::vector<double> direction_grid(int q_count, int l_count, double psi_bound);

/// Steering vectors at all quantized directions of one axis, ordered by
/// (range b, offset l). Column norms are exactly 1.
struct DirectionDictionary {
  Axis axis = Axis::Horizontal;
  int m_a = 1;
  int q_count = 1;
  int l_count = 1;
  double bound = kPi;
  std::vector<double> grid;  // l_count * q_count directions
  CMatrix columns;           // m_a x (l_count * q_count)

  /// Columns of the b-th range (1-based), an m_a x l_count block.
  CMatrix block(int b) const;
};

DirectionDictionary build_dictionary(Axis axis, int m_a, int q_count,
                                     int l_count, double psi_bound);

/// Nearest element of {0, 2pi/2^b, ..., 2pi(2^b-1)/2^b} under circular
/// distance; exact ties resolved toward the smaller phase value.
double quantize_phase(double phase, int b_phase);

/// Rounds every entry phase of an equal-gain matrix onto the 2^b-point grid;
/// magnitudes are preserved.
CMatrix quantize_phases(const CMatrix& analog, int b_phase);

/// Entry phases in [0, 2*pi); the phase of a zero entry is defined as 0.
Eigen::VectorXd entry_phases(const CVector& v);

/// Hybrid transmit beamformer c = F v with N equal-gain analog columns
/// (|F_{m,n}| = 1/sqrt(M)) and ||F v||_2 = 1.
struct Beamformer {
  CMatrix analog;     // M x N
  CVector baseband;   // N
  CVector composite;  // M, equals analog * baseband
  bool quantized = false;    // analog phases lie on the 2^B grid
  bool regularized = false;  // Gram ridge was needed during design
};

}  // namespace mmcb

#endif  // MMCB_UPA_HPP
