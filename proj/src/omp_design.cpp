// SPDX-License-Identifier: Apache-2.0
//
// mmcodebook — hybrid beamforming codebook synthesis and evaluation for
// mmWave uniform planar arrays
// Copyright (C) 2026 mmcodebook contributors

#include "mmcb/omp_design.hpp"

#include <cmath>
#include <stdexcept>

namespace mmcb {

void EqualGainVector::validate() const {
  if (values.size() < 1)
    throw std::invalid_argument("equal-gain vector must be non-empty");
  if (i_phases < 1)
    throw std::invalid_argument("equal-gain vector: i_phases must be >= 1");
  if (phase_indices.size() != static_cast<std::size_t>(values.size()))
    throw std::invalid_argument("equal-gain vector: index/value length mismatch");
  if (phase_indices.front() != 0)
    throw std::invalid_argument("equal-gain vector: first phase index must be 0");
  for (int idx : phase_indices)
    if (idx < 0 || idx >= i_phases)
      throw std::invalid_argument("equal-gain vector: phase index out of range");
}

EqualGainVector all_ones_equal_gain(int length) {
  return equal_gain_from_indices(std::vector<int>(static_cast<std::size_t>(length), 0), 1);
}

EqualGainVector equal_gain_from_indices(const std::vector<int>& indices,
                                        int i_phases) {
  EqualGainVector g;
  g.i_phases = i_phases;
  g.phase_indices = indices;
  g.values.resize(static_cast<Eigen::Index>(indices.size()));
  for (std::size_t k = 0; k < indices.size(); ++k)
    g.values(static_cast<Eigen::Index>(k)) =
        std::polar(1.0, 2.0 * kPi * indices[k] / i_phases);
  g.validate();
  return g;
}

CandidateEnumerator::CandidateEnumerator(int l_h, int l_v, int i_phases)
    : l_h_(l_h), l_v_(l_v), i_phases_(i_phases) {
  if (l_h < 1 || l_v < 1)
    throw std::invalid_argument("enumerator: l_h, l_v must be >= 1");
  if (i_phases < 1)
    throw std::invalid_argument("enumerator: i_phases must be >= 1");
  const int digits = l_h - 1 + l_v - 1;
  total_ = 1;
  for (int k = 0; k < digits; ++k) {
    if (total_ > UINT64_MAX / static_cast<std::uint64_t>(i_phases))
      throw std::invalid_argument("enumerator: candidate space exceeds 2^64");
    total_ *= static_cast<std::uint64_t>(i_phases);
  }
}

std::pair<EqualGainVector, EqualGainVector> CandidateEnumerator::at(
    std::uint64_t index) const {
  if (index >= total_)
    throw std::out_of_range("enumerator: candidate index out of range");
  const int digits = l_h_ - 1 + l_v_ - 1;
  std::vector<int> d(static_cast<std::size_t>(digits), 0);
  // earlier free entries are the most significant digits
  for (int k = digits - 1; k >= 0; --k) {
    d[static_cast<std::size_t>(k)] =
        static_cast<int>(index % static_cast<std::uint64_t>(i_phases_));
    index /= static_cast<std::uint64_t>(i_phases_);
  }
  std::vector<int> ih(static_cast<std::size_t>(l_h_), 0);
  std::vector<int> iv(static_cast<std::size_t>(l_v_), 0);
  for (int k = 1; k < l_h_; ++k) ih[static_cast<std::size_t>(k)] = d[static_cast<std::size_t>(k - 1)];
  for (int k = 1; k < l_v_; ++k)
    iv[static_cast<std::size_t>(k)] = d[static_cast<std::size_t>(l_h_ - 1 + k - 1)];
  return {equal_gain_from_indices(ih, i_phases_),
          equal_gain_from_indices(iv, i_phases_)};
}

CVector target_beamformer(const CMatrix& d_h1, const CMatrix& d_v1,
                          const EqualGainVector& g_h,
                          const EqualGainVector& g_v) {
  if (d_h1.cols() != g_h.values.size() || d_v1.cols() != g_v.values.size())
    throw std::invalid_argument("target_beamformer: block/vector size mismatch");
  const CVector w = kron_vec(d_h1 * g_h.values, d_v1 * g_v.values);
  const double n = w.norm();
  if (n < 1e-12)
    throw std::runtime_error("target_beamformer: zero-norm combination");
  return w / n;
}

namespace {

// Gram solve with rank-deficiency ridge; shared by both baseband routes.
struct GramSolve {
  Eigen::LDLT<CMatrix> ldlt;
  bool regularized = false;
};

GramSolve factor_gram(const CMatrix& f) {
  CMatrix gram = f.adjoint() * f;
  GramSolve gs;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(gram);
  const double lmax = es.eigenvalues().cwiseAbs().maxCoeff();
  const double lmin = es.eigenvalues().minCoeff();
  if (lmax <= 0.0 || lmin < 1e-12 * lmax) {
    gram += 1e-10 * gram.trace().real() *
            CMatrix::Identity(gram.rows(), gram.cols());
    gs.regularized = true;
  }
  gs.ldlt.compute(gram);
  return gs;
}

CVector normalize_through(const CMatrix& f, const CVector& u,
                          double w_norm) {
  const double fu = (f * u).norm();
  if (fu < 1e-12 * std::max(1.0, w_norm))
    throw std::runtime_error(
        "rayleigh_baseband: target orthogonal to analog subspace");
  return u / fu;
}

}  // namespace

RayleighResult rayleigh_baseband(const CMatrix& f, const CVector& w) {
  if (f.rows() != w.size() || f.cols() < 1)
    throw std::invalid_argument("rayleigh_baseband: dimension mismatch");
  GramSolve gs = factor_gram(f);
  const CVector u = gs.ldlt.solve(f.adjoint() * w);
  RayleighResult out;
  out.regularized = gs.regularized;
  out.v = normalize_through(f, u, w.norm());
  return out;
}

RayleighResult rayleigh_baseband_power_iteration(const CMatrix& f,
                                                 const CVector& w,
                                                 int iterations) {
  if (f.rows() != w.size() || f.cols() < 1)
    throw std::invalid_argument("rayleigh_baseband: dimension mismatch");
  const Eigen::Index n = f.cols();
  GramSolve gs = factor_gram(f);
  const CVector fw = f.adjoint() * w;
  const CVector a = gs.ldlt.solve(fw);  // iteration matrix is a * fw^H
  if ((f * a).norm() < 1e-12 * std::max(1.0, w.norm()))
    throw std::runtime_error(
        "rayleigh_baseband: target orthogonal to analog subspace");
  CVector u = CVector::Constant(n, Complex(1.0 / std::sqrt(static_cast<double>(n)), 0.0));
  for (int it = 0; it < iterations; ++it) {
    CVector next = a * fw.dot(u);  // fw.dot(u) = fw^H u
    const double nn = next.norm();
    if (nn < 1e-300) {
      // start vector annihilated; restart from a basis vector
      u = CVector::Zero(n);
      u(it % n) = Complex(1.0, 0.0);
      continue;
    }
    u = next / nn;
  }
  RayleighResult out;
  out.regularized = gs.regularized;
  out.v = normalize_through(f, u, w.norm());
  return out;
}

Beamformer omp_design(const UpaConfig& cfg, const CVector& target,
                      bool quantize) {
  cfg.validate();
  const int m = cfg.antennas();
  if (target.size() != m)
    throw std::invalid_argument("omp_design: target length != M");
  if (std::abs(target.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("omp_design: target is not unit-norm");

  const double mag = 1.0 / std::sqrt(static_cast<double>(m));
  CVector residual = target;
  Beamformer bf;
  bf.analog.resize(m, cfg.n_rf);
  bf.quantized = quantize;
  for (int n = 1; n <= cfg.n_rf; ++n) {
    // a fully suppressed target leaves flat-phase columns for the
    // remaining chains
    Eigen::VectorXd theta = residual.norm() < 1e-12
                                ? Eigen::VectorXd::Zero(m)
                                : entry_phases(residual);
    if (quantize)
      for (Eigen::Index i = 0; i < theta.size(); ++i)
        theta(i) = quantize_phase(theta(i), cfg.b_phase);
    for (int i = 0; i < m; ++i) bf.analog(i, n - 1) = std::polar(mag, theta(i));

    const auto fn = bf.analog.leftCols(n);
    RayleighResult rr = rayleigh_baseband(fn, target);
    bf.regularized = bf.regularized || rr.regularized;
    bf.baseband = rr.v;
    residual = target - fn * rr.v;
  }
  bf.composite = bf.analog * bf.baseband;
  return bf;
}

Beamformer omp_design(const UpaConfig& cfg, const CMatrix& d_h1,
                      const CMatrix& d_v1, const EqualGainVector& g_h,
                      const EqualGainVector& g_v, bool quantize) {
  return omp_design(cfg, target_beamformer(d_h1, d_v1, g_h, g_v), quantize);
}

}  // namespace mmcb
