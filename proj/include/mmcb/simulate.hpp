// SPDX-License-Identifier: Apache-2.0
//
// mmcodebook — hybrid beamforming codebook synthesis and evaluation for
// mmWave uniform planar arrays
// Copyright (C) 2026 mmcodebook contributors

#ifndef MMCB_SIMULATE_HPP
#define MMCB_SIMULATE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mmcb/channel.hpp"
#include "mmcb/codebook.hpp"

namespace mmcb {

/// Index-feedback overhead in bits, ceil(log2(Q_h * Q_v)).
int feedback_bits(int q_h, int q_v);

struct BeamIndex {
  int q = 1, p = 1;
  bool operator==(const BeamIndex&) const = default;
};

/// Threshold-triggered beam alignment over one codebook sounding pass:
/// every beam is observed once through sqrt(rho) h^H c + n; when the
/// top-two test-statistic ratio falls below tau_threshold one extra cycle is
/// drawn and the per-beam statistics are combined non-coherently
/// (|y1|^2 + |y2|^2). Ties select the lowest (q, p).
struct SoundingResult {
  BeamIndex best, second;
  double ratio = 1.0;     // final top-two statistic ratio, >= 1
  int resound_count = 0;  // 0 or 1
  CMatrix samples;        // Q x cycles complex observations
};

SoundingResult sound_and_select(const CVector& h, const Codebook& cb,
                                double rho, double tau_threshold,
                                SubStream& noise, bool noiseless = false);

/// Tie and threshold rules on externally supplied per-beam test statistics:
/// best/second by value with ties to the lowest flat index; a re-sound is
/// wanted iff best/second < tau_threshold (a ratio equal to the threshold
/// is accepted).
struct StatisticSelection {
  int best_flat = 0;
  int second_flat = 0;
  double ratio = 1.0;
  bool resound_wanted = false;
};

StatisticSelection select_from_statistics(const Eigen::VectorXd& statistics,
                                          double tau_threshold);

/// argmax over beams of |h^H c|^2, ties to the lowest (q, p).
BeamIndex noiseless_best(const CVector& h, const Codebook& cb);

struct RatePoint {
  double snr_db = 0.0;
  double mean_rate = 0.0;
  double stderr_mean = 0.0;
  double misalign_rate = 0.0;
  double resound_rate = 0.0;
  double feedback_bits_mean = 0.0;
};

struct RateTable {
  std::string codebook;
  std::vector<RatePoint> points;
};

struct SimOptions {
  double tau_threshold = 2.0;
  int workers = 1;
};

/// Monte Carlo expected data rate log2(1 + rho |h^H c|^2) of the aligned
/// beam, with misalignment (noisy selection != noiseless argmax) and
/// re-sound bookkeeping. Channels and noise derive from per-realization
/// substreams of master_seed, so the result is byte-identical for any
/// worker count and paired across codebooks sharing a seed.
RateTable evaluate_rate(const Codebook& cb, const ChannelScenario& scenario,
                        const std::vector<double>& snr_db_grid,
                        int n_realizations, std::uint64_t master_seed,
                        const SimOptions& options = {});

struct PairedPoint {
  double snr_db = 0.0;
  double mean_rate_a = 0.0;
  double mean_rate_b = 0.0;
  double mean_diff = 0.0;    // a - b
  double stderr_diff = 0.0;  // paired standard error of the mean difference
};

/// Rate difference of two codebooks on identical channel and noise draws.
std::vector<PairedPoint> paired_compare(const Codebook& a, const Codebook& b,
                                        const ChannelScenario& scenario,
                                        const std::vector<double>& snr_db_grid,
                                        int n_realizations,
                                        std::uint64_t master_seed,
                                        const SimOptions& options = {});

}  // namespace mmcb

#endif  // MMCB_SIMULATE_HPP
