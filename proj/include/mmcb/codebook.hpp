// SPDX-License-Identifier: Apache-2.0
//
// mmcodebook — hybrid beamforming codebook synthesis and evaluation for
// mmWave uniform planar arrays
// Copyright (C) 2026 mmcodebook contributors

#ifndef MMCB_CODEBOOK_HPP
#define MMCB_CODEBOOK_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "mmcb/ideal.hpp"
#include "mmcb/omp_design.hpp"
#include "mmcb/upa.hpp"

namespace mmcb {

/// Design rejected because the codebook cannot satisfy the sounding-overhead
/// assumption Q < M.
class InfeasibleConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Which candidate indices of the enumeration a design run evaluates.
struct SweepSpec {
  enum class Mode { kFull, kStrided, kExplicit };
  Mode mode = Mode::kFull;
  std::uint64_t stride = 1;             // strided: indices 0, k, 2k, ...
  std::vector<std::uint64_t> indices;   // explicit list

  std::uint64_t count(std::uint64_t total) const;
  std::uint64_t candidate(std::uint64_t position, std::uint64_t total) const;
  void validate(std::uint64_t total) const;
  std::string describe() const;
};

/// Entrywise modulation of the analog matrix by the unit-modulus planar
/// response sqrt(M) * d_M(dpsi_h, dpsi_v); translates the beam pattern by
/// (dpsi_h, dpsi_v) and preserves entry magnitudes.
CMatrix phase_shift(const CMatrix& analog, double dpsi_h, double dpsi_v,
                    const UpaConfig& cfg);

/// MSE-evaluation discretization: mse_grid_per_beam midpoint directions per
/// beam-width per axis across the coverage region, extended below the lower
/// edge when a guard band widens the first beam's region.
struct MseGrid {
  std::vector<double> psis_h, psis_v;
  int per_beam = 20;
  double gamma = 0.0;
  int q_h = 1, q_v = 1;

  static MseGrid build(const CodebookConfig& cfg);
  /// 0/1 membership of each axis sample in the (guard-banded) range of beam b.
  Eigen::VectorXd axis_mask(Axis axis, int b) const;
};

/// Reference gain of c at every grid direction, flattened in dictionary
/// Kronecker order (horizontal index outer).
Eigen::VectorXd beam_pattern_vector(const UpaConfig& cfg, const CVector& c,
                                    const std::vector<double>& psis_h,
                                    const std::vector<double>& psis_v);

/// Mean over the grid of |ideal (q,p) pattern - actual pattern|^2. The mean
/// (not the sum) keeps values comparable across grid densities.
double mse_to_ideal(const UpaConfig& upa, const CodebookConfig& cfg,
                    const CVector& c, int q, int p, const MseGrid& grid);

/// Precomputed steering grids for the hot candidate-selection loop.
class MseEvaluator {
 public:
  MseEvaluator(const UpaConfig& upa, const CodebookConfig& cfg);
  double operator()(const CVector& composite, int q, int p) const;
  const MseGrid& grid() const { return grid_; }

 private:
  MseGrid grid_;
  double level_;
  int m_h_, m_v_;
  CMatrix dh_adj_, dv_conj_;
  Eigen::MatrixXd masks_h_, masks_v_;  // samples x beams
};

/// Per-entry beam-pattern MSE on a uniform full-period midpoint grid
/// anchored at the entry's region offset ((q-1)*delta_h, (p-1)*delta_v), so
/// that phase-shift-expanded entries reproduce the (1,1) value exactly.
double mse_full_period(const UpaConfig& upa, const CodebookConfig& cfg,
                       const CVector& c, int q, int p, int n = 256);

struct BuildStats {
  std::uint64_t candidates_evaluated = 0;
  std::uint64_t best_candidate_index = 0;
  double best_mse = std::numeric_limits<double>::quiet_NaN();
  double wall_seconds = 0.0;
  bool any_regularized = false;
  double mean_gain_theta = std::numeric_limits<double>::quiet_NaN();
  double min_gain_theta = std::numeric_limits<double>::quiet_NaN();
  double mean_gain_psi = std::numeric_limits<double>::quiet_NaN();
  double min_gain_psi = std::numeric_limits<double>::quiet_NaN();
  double requant_mse_delta_mean = 0.0;
  double requant_mse_delta_max = 0.0;
};

/// A full Q_h x Q_v set of hybrid beamformers plus its build provenance.
/// Entries are stored in sounding order, index (q-1)*Q_v + (p-1).
struct Codebook {
  UpaConfig upa;
  CodebookConfig cb;
  std::string label;
  bool quantize = true;
  bool requantize_shift = false;
  std::uint64_t seed = 0;
  SweepSpec sweep;
  std::vector<int> selected_gh, selected_gv;  // phase indices, empty for kp-dft
  BuildStats stats;
  std::vector<Beamformer> entries;

  const Beamformer& entry(int q, int p) const;
  /// M x Q matrix of composite beamformers in sounding order.
  CMatrix composites() const;
};

struct SweepCheckpoint {
  std::uint64_t completed = 0;  // contiguous prefix of the sweep list
  std::uint64_t total = 0;
  bool has_best = false;
  double best_mse = std::numeric_limits<double>::infinity();
  std::uint64_t best_candidate = 0;
};

struct DesignOptions {
  bool quantize = true;
  bool requantize_shift = false;
  int workers = 1;
  std::uint64_t checkpoint_every = 100000;
  std::function<void(const SweepCheckpoint&)> on_checkpoint;
  // resume support: skip the completed prefix and seed the running best
  std::uint64_t resume_completed = 0;
  bool resume_has_best = false;
  double resume_best_mse = std::numeric_limits<double>::infinity();
  std::uint64_t resume_best_candidate = 0;
  int pattern_grid_theta_h = 180;
  int pattern_grid_theta_v = 90;
};

/// Sweeps candidate equal-gain pairs, designs one hybrid beamformer per pair,
/// selects the first-beam MSE minimizer (ties to the lowest candidate index),
/// and expands it to all beams by phase shifting. Deterministic given the
/// configs and sweep spec, independent of the worker count.
Codebook design_codebook(const UpaConfig& upa, const CodebookConfig& cb,
                         const SweepSpec& sweep, std::uint64_t seed,
                         const DesignOptions& options = {});

/// Single-candidate pipeline using all-ones equal-gain vectors of length
/// ceil(256 / Q_a) per axis.
Codebook baseline_allones(const UpaConfig& upa, int q_h, int q_v,
                          const DesignOptions& options = {});

/// Two-dimensional Kronecker-product DFT grid-of-beams codebook; entry (q,p)
/// is d_{M_h}(2 pi q / Q_h) (x) d_{M_v}(2 pi p / Q_v) with a single-column
/// analog stage.
Codebook baseline_kp_dft(const UpaConfig& upa, int q_h, int q_v);

struct PatternRow {
  double theta_h = 0.0, theta_v = 0.0;
  double psi_h = 0.0, psi_v = 0.0;
  int best_q = 1, best_p = 1;
  double gain = 0.0;
};

/// Best-entry reference gain over a midpoint grid of physical departure
/// angles covering [-pi/2, pi/2) x [-pi/4, pi/4); rows ordered by
/// (theta_h, theta_v) ascending.
std::vector<PatternRow> pattern_report(const Codebook& cb, int n_theta_h,
                                       int n_theta_v);

struct PatternSummary {
  double mean_gain_theta = 0.0, min_gain_theta = 0.0;
  double mean_gain_psi = 0.0, min_gain_psi = 0.0;
};

/// Mean/min best-entry gain over the physical-angle grid and over the
/// spatial-frequency lattice covering the coverage region.
PatternSummary pattern_summary(const Codebook& cb, int n_theta_h = 180,
                               int n_theta_v = 90);

}  // namespace mmcb

#endif  // MMCB_CODEBOOK_HPP
