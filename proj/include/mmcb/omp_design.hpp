// SPDX-License-Identifier: Apache-2.0
//
// mmcodebook — hybrid beamforming codebook synthesis and evaluation for
// mmWave uniform planar arrays
// Copyright (C) 2026 mmcodebook contributors

#ifndef MMCB_OMP_DESIGN_HPP
#define MMCB_OMP_DESIGN_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "mmcb/upa.hpp"

namespace mmcb {

/// Unit-modulus candidate vector with phases on an I-point grid; the first
/// entry is pinned to 1 (phase index 0).
struct EqualGainVector {
  CVector values;
  std::vector<int> phase_indices;
  int i_phases = 1;

  void validate() const;  // throws std::invalid_argument
};

EqualGainVector all_ones_equal_gain(int length);

/// Builds the candidate from the full index vector (first index must be 0).
EqualGainVector equal_gain_from_indices(const std::vector<int>& indices,
                                        int i_phases);

/// Deterministic enumeration of all I^(L_h-1) * I^(L_v-1) candidate pairs in
/// lexicographic order of the concatenated free phase indices (horizontal
/// entries first, earlier entries most significant). Index 0 is the all-ones
/// pair. Random access by index supports strided sub-sampling.
class CandidateEnumerator {
 public:
  CandidateEnumerator(int l_h, int l_v, int i_phases);

  std::uint64_t total() const { return total_; }
  std::pair<EqualGainVector, EqualGainVector> at(std::uint64_t index) const;

 private:
  int l_h_, l_v_, i_phases_;
  std::uint64_t total_;
};

/// Normalized Kronecker combination of first-range dictionary columns,
/// (D_{h,1} g_h) (x) (D_{v,1} g_v) / ||.||. Throws std::runtime_error on a
/// zero-norm combination.
CVector target_beamformer(const CMatrix& d_h1, const CMatrix& d_v1,
                          const EqualGainVector& g_h,
                          const EqualGainVector& g_v);

struct RayleighResult {
  CVector v;
  bool regularized = false;
};

/// Baseband combiner maximizing |w^H F v|^2 subject to ||F v||_2 = 1. The
/// quadratic form has a rank-one numerator, so the principal eigenvector of
/// (F^H F)^{-1} F^H w w^H F reduces to the linear solve
/// u = (F^H F)^{-1} F^H w, v = u / ||F u||. A near-singular Gram matrix
/// (duplicate analog columns) gets a ridge of 1e-10 * trace and is flagged.
/// Throws std::runtime_error when w is orthogonal to range(F).
RayleighResult rayleigh_baseband(const CMatrix& f, const CVector& w);

/// Eigen-iteration route to the same solution, kept as an independent
/// verification path. Matches rayleigh_baseband up to a unit-modulus scalar.
RayleighResult rayleigh_baseband_power_iteration(const CMatrix& f,
                                                 const CVector& w,
                                                 int iterations = 100);

/// Greedy hybrid factorization of a unit-norm target: each iteration appends
/// the equal-gain column 1/sqrt(M) * exp(j * arg(residual)) (phases rounded
/// to the 2^B grid when `quantize` is set), refits the baseband combiner in
/// closed form, and updates the residual target - F_n v_n.
Beamformer omp_design(const UpaConfig& cfg, const CVector& target,
                      bool quantize);

/// Convenience overload constructing the target from a candidate pair.
Beamformer omp_design(const UpaConfig& cfg, const CMatrix& d_h1,
                      const CMatrix& d_v1, const EqualGainVector& g_h,
                      const EqualGainVector& g_v, bool quantize);

}  // namespace mmcb

#endif  // MMCB_OMP_DESIGN_HPP
