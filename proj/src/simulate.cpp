// SPDX-License-Identifier: Apache-2.0
//
// mmcodebook — hybrid beamforming codebook synthesis and evaluation for
// mmWave uniform planar arrays
// Copyright (C) 2026 mmcodebook contributors

#include "mmcb/simulate.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mmcb/parallel.hpp"

namespace mmcb {

int feedback_bits(int q_h, int q_v) {
  if (q_h < 1 || q_v < 1)
    throw std::invalid_argument("feedback_bits: beam counts must be >= 1");
  const std::uint64_t q = static_cast<std::uint64_t>(q_h) * q_v;
  int bits = 0;
  while ((1ULL << bits) < q) ++bits;
  return bits;
}

namespace {

struct TopTwo {
  int best = 0, second = -1;
  double s_best = 0.0, s_second = 0.0;
};

// ascending scan with strict comparisons keeps ties on the lowest (q, p)
TopTwo top_two(const Eigen::VectorXd& stats) {
  TopTwo t;
  t.best = 0;
  t.s_best = stats(0);
  for (int i = 1; i < stats.size(); ++i) {
    if (stats(i) > t.s_best) {
      t.second = t.best;
      t.s_second = t.s_best;
      t.best = i;
      t.s_best = stats(i);
    } else if (t.second < 0 || stats(i) > t.s_second) {
      t.second = i;
      t.s_second = stats(i);
    }
  }
  return t;
}

BeamIndex to_beam(int flat, int q_v) {
  return BeamIndex{flat / q_v + 1, flat % q_v + 1};
}

struct SelectionOutcome {
  int best_flat = 0;
  int second_flat = 0;
  double ratio = std::numeric_limits<double>::infinity();
  int resound = 0;
  CMatrix samples;
};

SelectionOutcome select_with_noise(const CVector& g, double rho,
                                   double tau_threshold, SubStream& noise,
                                   bool noiseless, bool keep_samples) {
  const int q = static_cast<int>(g.size());
  SelectionOutcome out;
  Eigen::VectorXd stats(q);
  CVector y1(q);
  if (noiseless) {
    for (int i = 0; i < q; ++i) {
      y1(i) = g(i);
      stats(i) = std::norm(g(i));
    }
    const TopTwo t = top_two(stats);
    out.best_flat = t.best;
    out.second_flat = std::max(t.second, 0);
    out.ratio = t.s_second > 0.0 ? t.s_best / t.s_second
                                 : std::numeric_limits<double>::infinity();
    if (keep_samples) out.samples = y1;
    return out;
  }
  const double amp = std::sqrt(rho);
  for (int i = 0; i < q; ++i) {
    y1(i) = amp * g(i) + noise.cnormal();
    stats(i) = std::norm(y1(i));
  }
  TopTwo t = top_two(stats);
  out.ratio = t.s_second > 0.0 ? t.s_best / t.s_second
                               : std::numeric_limits<double>::infinity();
  CVector y2;
  if (out.ratio < tau_threshold) {
    out.resound = 1;
    y2.resize(q);
    for (int i = 0; i < q; ++i) {
      y2(i) = amp * g(i) + noise.cnormal();
      stats(i) += std::norm(y2(i));
    }
    t = top_two(stats);
    out.ratio = t.s_second > 0.0 ? t.s_best / t.s_second
                                 : std::numeric_limits<double>::infinity();
  }
  out.best_flat = t.best;
  out.second_flat = std::max(t.second, 0);
  if (keep_samples) {
    out.samples.resize(q, out.resound ? 2 : 1);
    out.samples.col(0) = y1;
    if (out.resound) out.samples.col(1) = y2;
  }
  return out;
}

// per-beam h^H c for all entries
CVector beam_responses(const CMatrix& composites, const CVector& h) {
  return (composites.adjoint() * h).conjugate();
}

double snr_db_to_rho(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

}  // namespace

StatisticSelection select_from_statistics(const Eigen::VectorXd& statistics,
                                          double tau_threshold) {
  if (statistics.size() < 1)
    throw std::invalid_argument("select_from_statistics: empty statistics");
  const TopTwo t = top_two(statistics);
  StatisticSelection s;
  s.best_flat = t.best;
  s.second_flat = std::max(t.second, 0);
  s.ratio = t.s_second > 0.0 ? t.s_best / t.s_second
                             : std::numeric_limits<double>::infinity();
  s.resound_wanted = s.ratio < tau_threshold;
  return s;
}

SoundingResult sound_and_select(const CVector& h, const Codebook& cb,
                                double rho, double tau_threshold,
                                SubStream& noise, bool noiseless) {
  if (cb.entries.empty())
    throw std::invalid_argument("sound_and_select: empty codebook");
  if (!noiseless && rho <= 0.0)
    throw std::invalid_argument("sound_and_select: rho must be positive");
  if (tau_threshold < 1.0)
    throw std::invalid_argument("sound_and_select: tau_threshold must be >= 1");
  const CVector g = beam_responses(cb.composites(), h);
  const SelectionOutcome sel =
      select_with_noise(g, rho, tau_threshold, noise, noiseless, true);
  SoundingResult out;
  out.best = to_beam(sel.best_flat, cb.cb.q_v);
  out.second = to_beam(sel.second_flat, cb.cb.q_v);
  out.ratio = sel.ratio;
  out.resound_count = sel.resound;
  out.samples = sel.samples;
  return out;
}

BeamIndex noiseless_best(const CVector& h, const Codebook& cb) {
  if (cb.entries.empty())
    throw std::invalid_argument("noiseless_best: empty codebook");
  const CVector g = beam_responses(cb.composites(), h);
  Eigen::VectorXd stats = g.cwiseAbs2();
  return to_beam(top_two(stats).best, cb.cb.q_v);
}

RateTable evaluate_rate(const Codebook& cb, const ChannelScenario& scenario,
                        const std::vector<double>& snr_db_grid,
                        int n_realizations, std::uint64_t master_seed,
                        const SimOptions& options) {
  if (n_realizations < 1)
    throw std::invalid_argument("evaluate_rate: n_realizations must be >= 1");
  if (snr_db_grid.empty())
    throw std::invalid_argument("evaluate_rate: empty SNR grid");
  scenario.validate();
  const CMatrix composites = cb.composites();
  const int n_snr = static_cast<int>(snr_db_grid.size());
  const std::size_t slots =
      static_cast<std::size_t>(n_snr) * static_cast<std::size_t>(n_realizations);
  std::vector<double> rate(slots, 0.0);
  std::vector<std::uint8_t> misalign(slots, 0), resound(slots, 0);

  std::atomic<int> next{0};
  run_workers(options.workers, [&](int) {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n_realizations) break;
      SubStream channel_rng(master_seed, static_cast<std::uint64_t>(i), 0);
      const ChannelRealization ch = generate_channel(scenario, cb.upa, channel_rng);
      const CVector g = beam_responses(composites, ch.h);
      Eigen::VectorXd pure = g.cwiseAbs2();
      const int ideal_flat = top_two(pure).best;
      for (int s = 0; s < n_snr; ++s) {
        const double rho = snr_db_to_rho(snr_db_grid[static_cast<std::size_t>(s)]);
        // fresh substream per SNR point: identical draws across the grid and
        // across codebooks sharing the master seed
        SubStream noise(master_seed, static_cast<std::uint64_t>(i), 1);
        const SelectionOutcome sel = select_with_noise(
            g, rho, options.tau_threshold, noise, false, false);
        const std::size_t slot = static_cast<std::size_t>(s) *
                                     static_cast<std::size_t>(n_realizations) +
                                 static_cast<std::size_t>(i);
        rate[slot] = std::log2(1.0 + rho * pure(sel.best_flat));
        misalign[slot] = sel.best_flat != ideal_flat ? 1 : 0;
        resound[slot] = static_cast<std::uint8_t>(sel.resound);
      }
    }
  });

  RateTable table;
  table.codebook = cb.label;
  const int fb = feedback_bits(cb.cb.q_h, cb.cb.q_v);
  for (int s = 0; s < n_snr; ++s) {
    RatePoint pt;
    pt.snr_db = snr_db_grid[static_cast<std::size_t>(s)];
    double sum = 0.0, mis = 0.0, res = 0.0;
    const std::size_t base = static_cast<std::size_t>(s) *
                             static_cast<std::size_t>(n_realizations);
    for (int i = 0; i < n_realizations; ++i) {
      sum += rate[base + static_cast<std::size_t>(i)];
      mis += misalign[base + static_cast<std::size_t>(i)];
      res += resound[base + static_cast<std::size_t>(i)];
    }
    pt.mean_rate = sum / n_realizations;
    double ss = 0.0;
    for (int i = 0; i < n_realizations; ++i) {
      const double d = rate[base + static_cast<std::size_t>(i)] - pt.mean_rate;
      ss += d * d;
    }
    pt.stderr_mean = n_realizations > 1
                         ? std::sqrt(ss / (n_realizations - 1.0) / n_realizations)
                         : 0.0;
    pt.misalign_rate = mis / n_realizations;
    pt.resound_rate = res / n_realizations;
    // index feedback plus one request bit per extra sounding cycle
    pt.feedback_bits_mean = fb + pt.resound_rate;
    table.points.push_back(pt);
  }
  return table;
}

std::vector<PairedPoint> paired_compare(const Codebook& a, const Codebook& b,
                                        const ChannelScenario& scenario,
                                        const std::vector<double>& snr_db_grid,
                                        int n_realizations,
                                        std::uint64_t master_seed,
                                        const SimOptions& options) {
  if (a.upa.m_h != b.upa.m_h || a.upa.m_v != b.upa.m_v)
    throw std::invalid_argument("paired_compare: array geometries differ");
  if (n_realizations < 1)
    throw std::invalid_argument("paired_compare: n_realizations must be >= 1");
  scenario.validate();
  const CMatrix ca = a.composites();
  const CMatrix cbm = b.composites();
  const int n_snr = static_cast<int>(snr_db_grid.size());
  const std::size_t slots =
      static_cast<std::size_t>(n_snr) * static_cast<std::size_t>(n_realizations);
  std::vector<double> rate_a(slots, 0.0), rate_b(slots, 0.0);

  std::atomic<int> next{0};
  run_workers(options.workers, [&](int) {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n_realizations) break;
      SubStream channel_rng(master_seed, static_cast<std::uint64_t>(i), 0);
      const ChannelRealization ch = generate_channel(scenario, a.upa, channel_rng);
      const CVector ga = beam_responses(ca, ch.h);
      const CVector gb = beam_responses(cbm, ch.h);
      const Eigen::VectorXd pa = ga.cwiseAbs2();
      const Eigen::VectorXd pb = gb.cwiseAbs2();
      for (int s = 0; s < n_snr; ++s) {
        const double rho = snr_db_to_rho(snr_db_grid[static_cast<std::size_t>(s)]);
        SubStream noise_a(master_seed, static_cast<std::uint64_t>(i), 1);
        SubStream noise_b(master_seed, static_cast<std::uint64_t>(i), 1);
        const SelectionOutcome sa = select_with_noise(
            ga, rho, options.tau_threshold, noise_a, false, false);
        const SelectionOutcome sb = select_with_noise(
            gb, rho, options.tau_threshold, noise_b, false, false);
        const std::size_t slot = static_cast<std::size_t>(s) *
                                     static_cast<std::size_t>(n_realizations) +
                                 static_cast<std::size_t>(i);
        rate_a[slot] = std::log2(1.0 + rho * pa(sa.best_flat));
        rate_b[slot] = std::log2(1.0 + rho * pb(sb.best_flat));
      }
    }
  });

  std::vector<PairedPoint> out;
  for (int s = 0; s < n_snr; ++s) {
    PairedPoint pt;
    pt.snr_db = snr_db_grid[static_cast<std::size_t>(s)];
    const std::size_t base = static_cast<std::size_t>(s) *
                             static_cast<std::size_t>(n_realizations);
    double sa = 0.0, sb = 0.0;
    for (int i = 0; i < n_realizations; ++i) {
      sa += rate_a[base + static_cast<std::size_t>(i)];
      sb += rate_b[base + static_cast<std::size_t>(i)];
    }
    pt.mean_rate_a = sa / n_realizations;
    pt.mean_rate_b = sb / n_realizations;
    pt.mean_diff = pt.mean_rate_a - pt.mean_rate_b;
    double ss = 0.0;
    for (int i = 0; i < n_realizations; ++i) {
      const double d = rate_a[base + static_cast<std::size_t>(i)] -
                       rate_b[base + static_cast<std::size_t>(i)] - pt.mean_diff;
      ss += d * d;
    }
    pt.stderr_diff = n_realizations > 1
                         ? std::sqrt(ss / (n_realizations - 1.0) / n_realizations)
                         : 0.0;
    out.push_back(pt);
  }
  return out;
}

}  // namespace mmcb
