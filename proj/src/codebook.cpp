// SPDX-License-Identifier: Apache-2.0
//
// mmcodebook — hybrid beamforming codebook synthesis and evaluation for
// mmWave uniform planar arrays
// Copyright (C) 2026 mmcodebook contributors

#include "mmcb/codebook.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "mmcb/parallel.hpp"

namespace mmcb {

std::uint64_t SweepSpec::count(std::uint64_t total) const {
  switch (mode) {
    case Mode::kFull:
      return total;
    case Mode::kStrided:
      return stride == 0 ? 0 : (total + stride - 1) / stride;
    case Mode::kExplicit:
      return indices.size();
  }
  return 0;
}

std::uint64_t SweepSpec::candidate(std::uint64_t position,
                                   std::uint64_t total) const {
  switch (mode) {
    case Mode::kFull:
      return position;
    case Mode::kStrided:
      return position * stride;
    case Mode::kExplicit:
      return indices[position];
  }
  (void)total;
  return 0;
}

void SweepSpec::validate(std::uint64_t total) const {
  if (mode == Mode::kStrided && stride < 1)
    throw std::invalid_argument("sweep: stride must be >= 1");
  if (mode == Mode::kExplicit)
    for (std::uint64_t idx : indices)
      if (idx >= total)
        throw std::invalid_argument("sweep: explicit candidate index out of range");
  if (count(total) == 0) throw std::invalid_argument("sweep: empty candidate list");
}

std::string SweepSpec::describe() const {
  switch (mode) {
    case Mode::kFull:
      return "full";
    case Mode::kStrided:
      return "strided(" + std::to_string(stride) + ")";
    case Mode::kExplicit:
      return "explicit(n=" + std::to_string(indices.size()) + ")";
  }
  return "?";
}

CMatrix phase_shift(const CMatrix& analog, double dpsi_h, double dpsi_v,
                    const UpaConfig& cfg) {
  if (analog.rows() != cfg.antennas())
    throw std::invalid_argument("phase_shift: analog rows != M");
  CVector mod(cfg.antennas());  // sqrt(M) * d_M, unit-modulus entries
  for (int lh = 0; lh < cfg.m_h; ++lh)
    for (int lv = 0; lv < cfg.m_v; ++lv)
      mod(static_cast<Eigen::Index>(lh) * cfg.m_v + lv) =
          std::polar(1.0, lh * dpsi_h + lv * dpsi_v);
  return mod.asDiagonal() * analog;
}

MseGrid MseGrid::build(const CodebookConfig& cfg) {
  cfg.validate();
  MseGrid g;
  g.per_beam = cfg.mse_grid_per_beam;
  g.gamma = cfg.gamma;
  g.q_h = cfg.q_h;
  g.q_v = cfg.q_v;
  const int n = cfg.mse_grid_per_beam;
  const auto build_axis = [&](int q, double bound) {
    const double delta = 2.0 * bound / q;
    std::vector<double> psis;
    // lattice points inside the guard strip below the lower coverage edge
    const int n_guard =
        cfg.gamma > 0.0
            ? static_cast<int>(std::floor(cfg.gamma * n + 0.5 + 1e-9))
            : 0;
    for (int k = n_guard; k >= 1; --k)
      psis.push_back(-bound - delta * (k - 0.5) / n);
    for (int b = 1; b <= q; ++b)
      for (int j = 1; j <= n; ++j)
        psis.push_back(-bound + (b - 1) * delta + delta * (j - 0.5) / n);
    return psis;
  };
  g.psis_h = build_axis(cfg.q_h, kPsiBoundH);
  g.psis_v = build_axis(cfg.q_v, kPsiBoundV);
  return g;
}

Eigen::VectorXd MseGrid::axis_mask(Axis axis, int b) const {
  const bool horizontal = axis == Axis::Horizontal;
  const int q = horizontal ? q_h : q_v;
  if (b < 1 || b > q) throw std::out_of_range("MseGrid::axis_mask: range index");
  const double bound = psi_bound(axis);
  const double delta = 2.0 * bound / q;
  const double lo = -bound + (b - 1) * delta - gamma * delta;
  const double hi = -bound + b * delta + gamma * delta;
  const std::vector<double>& psis = horizontal ? psis_h : psis_v;
  Eigen::VectorXd mask(static_cast<Eigen::Index>(psis.size()));
  for (std::size_t i = 0; i < psis.size(); ++i)
    mask(static_cast<Eigen::Index>(i)) =
        (psis[i] >= lo && psis[i] < hi) ? 1.0 : 0.0;
  return mask;
}

Eigen::VectorXd beam_pattern_vector(const UpaConfig& cfg, const CVector& c,
                                    const std::vector<double>& psis_h,
                                    const std::vector<double>& psis_v) {
  if (std::abs(c.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("beam_pattern_vector: beamformer is not unit-norm");
  const Eigen::MatrixXd g = gain_grid(cfg, c, psis_h, psis_v);
  Eigen::VectorXd out(g.size());
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    out.segment(i * g.cols(), g.cols()) = g.row(i).transpose();
  return out;
}

MseEvaluator::MseEvaluator(const UpaConfig& upa, const CodebookConfig& cfg)
    : grid_(MseGrid::build(cfg)),
      level_(ideal_level(upa.antennas(), cfg)),
      m_h_(upa.m_h),
      m_v_(upa.m_v) {
  dh_adj_ = steering_matrix(upa.m_h, grid_.psis_h).adjoint();
  dv_conj_ = steering_matrix(upa.m_v, grid_.psis_v).conjugate();
  masks_h_.resize(static_cast<Eigen::Index>(grid_.psis_h.size()), cfg.q_h);
  masks_v_.resize(static_cast<Eigen::Index>(grid_.psis_v.size()), cfg.q_v);
  for (int b = 1; b <= cfg.q_h; ++b)
    masks_h_.col(b - 1) = grid_.axis_mask(Axis::Horizontal, b);
  for (int b = 1; b <= cfg.q_v; ++b)
    masks_v_.col(b - 1) = grid_.axis_mask(Axis::Vertical, b);
}

double MseEvaluator::operator()(const CVector& composite, int q, int p) const {
  if (q < 1 || q > masks_h_.cols() || p < 1 || p > masks_v_.cols())
    throw std::out_of_range("MseEvaluator: beam index out of range");
  using RowMajorC =
      Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMajorC> cm(composite.data(), m_h_, m_v_);
  const Eigen::MatrixXd g = (dh_adj_ * (cm * dv_conj_)).cwiseAbs2();
  const Eigen::MatrixXd ideal =
      level_ * masks_h_.col(q - 1) * masks_v_.col(p - 1).transpose();
  return (g - ideal).squaredNorm() / static_cast<double>(g.size());
}

double mse_to_ideal(const UpaConfig& upa, const CodebookConfig& cfg,
                    const CVector& c, int q, int p, const MseGrid& grid) {
  if (std::abs(c.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("mse_to_ideal: beamformer is not unit-norm");
  const double level = ideal_level(upa.antennas(), cfg);
  const Eigen::MatrixXd g = gain_grid(upa, c, grid.psis_h, grid.psis_v);
  const Eigen::MatrixXd ideal = level *
                                grid.axis_mask(Axis::Horizontal, q) *
                                grid.axis_mask(Axis::Vertical, p).transpose();
  return (g - ideal).squaredNorm() / static_cast<double>(g.size());
}

double mse_full_period(const UpaConfig& upa, const CodebookConfig& cfg,
                       const CVector& c, int q, int p, int n) {
  if (q < 1 || q > cfg.q_h || p < 1 || p > cfg.q_v)
    throw std::out_of_range("mse_full_period: beam index out of range");
  if (n < 2) throw std::invalid_argument("mse_full_period: n must be >= 2");
  const double step = 2.0 * kPi / n;
  const double off_h = (q - 1) * cfg.delta_h();
  const double off_v = (p - 1) * cfg.delta_v();
  std::vector<double> base(static_cast<std::size_t>(n)), gh(base), gv(base);
  for (int i = 0; i < n; ++i) {
    base[static_cast<std::size_t>(i)] = -kPi + (i + 0.5) * step;
    gh[static_cast<std::size_t>(i)] = base[static_cast<std::size_t>(i)] + off_h;
    gv[static_cast<std::size_t>(i)] = base[static_cast<std::size_t>(i)] + off_v;
  }
  const Eigen::MatrixXd g = gain_grid(upa, c, gh, gv);
  // first-beam (guard-banded) region in base coordinates; membership checks
  // the 2*pi-periodic copies, which only ever matter on the horizontal axis
  const double glo_h = -kPsiBoundH - cfg.gamma * cfg.delta_h();
  const double ghi_h = -kPsiBoundH + (1.0 + cfg.gamma) * cfg.delta_h();
  const double glo_v = -kPsiBoundV - cfg.gamma * cfg.delta_v();
  const double ghi_v = -kPsiBoundV + (1.0 + cfg.gamma) * cfg.delta_v();
  const auto in_interval = [](double x, double lo, double hi) {
    return (x >= lo && x < hi) || (x - 2.0 * kPi >= lo && x - 2.0 * kPi < hi) ||
           (x + 2.0 * kPi >= lo && x + 2.0 * kPi < hi);
  };
  Eigen::VectorXd mask_h(n), mask_v(n);
  for (int i = 0; i < n; ++i) {
    const double x = base[static_cast<std::size_t>(i)];
    mask_h(i) = in_interval(x, glo_h, ghi_h) ? 1.0 : 0.0;
    mask_v(i) = in_interval(x, glo_v, ghi_v) ? 1.0 : 0.0;
  }
  const double level = ideal_level(upa.antennas(), cfg);
  const Eigen::MatrixXd ideal = level * mask_h * mask_v.transpose();
  return (g - ideal).squaredNorm() / static_cast<double>(g.size());
}

const Beamformer& Codebook::entry(int q, int p) const {
  if (q < 1 || q > cb.q_h || p < 1 || p > cb.q_v)
    throw std::out_of_range("Codebook::entry: beam index out of range");
  return entries[static_cast<std::size_t>((q - 1) * cb.q_v + (p - 1))];
}

CMatrix Codebook::composites() const {
  CMatrix c(upa.antennas(), static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i)
    c.col(static_cast<Eigen::Index>(i)) = entries[i].composite;
  return c;
}

namespace {

void check_design_feasible(const UpaConfig& upa, const CodebookConfig& cb) {
  upa.validate();
  cb.validate();
  if (cb.beams() >= upa.antennas())
    throw InfeasibleConfigError("design: requires Q < M (got Q=" +
                                std::to_string(cb.beams()) +
                                ", M=" + std::to_string(upa.antennas()) + ")");
  const std::uint64_t lq = static_cast<std::uint64_t>(cb.l_h) * cb.l_v *
                           static_cast<std::uint64_t>(cb.beams());
  if (lq < static_cast<std::uint64_t>(upa.antennas()))
    throw std::invalid_argument("design: decomposition grid too coarse, needs L*Q >= M");
}

// Expands the selected first-beam design to all beams and fills build stats.
void finish_codebook(Codebook& out, const Beamformer& first,
                     const DesignOptions& options) {
  const double dh = out.cb.delta_h();
  const double dv = out.cb.delta_v();
  out.entries.clear();
  out.entries.reserve(static_cast<std::size_t>(out.cb.beams()));
  for (int q = 1; q <= out.cb.q_h; ++q) {
    for (int p = 1; p <= out.cb.q_v; ++p) {
      Beamformer e;
      if (q == 1 && p == 1) {
        e = first;
      } else {
        e.analog = phase_shift(first.analog, (q - 1) * dh, (p - 1) * dv, out.upa);
        e.baseband = first.baseband;
        e.composite = e.analog * e.baseband;
        e.quantized = false;  // shift phases leave the 2^B grid
        e.regularized = first.regularized;
      }
      out.entries.push_back(std::move(e));
    }
  }
  if (out.requantize_shift) {
    double delta_sum = 0.0, delta_max = 0.0;
    for (int q = 1; q <= out.cb.q_h; ++q) {
      for (int p = 1; p <= out.cb.q_v; ++p) {
        Beamformer& e =
            out.entries[static_cast<std::size_t>((q - 1) * out.cb.q_v + (p - 1))];
        const double mse_cont = mse_full_period(out.upa, out.cb, e.composite, q, p);
        CMatrix fq = quantize_phases(e.analog, out.upa.b_phase);
        CVector vq = e.baseband / (fq * e.baseband).norm();
        e.analog = std::move(fq);
        e.baseband = std::move(vq);
        e.composite = e.analog * e.baseband;
        e.quantized = true;
        const double mse_req = mse_full_period(out.upa, out.cb, e.composite, q, p);
        const double delta = mse_req - mse_cont;
        delta_sum += delta;
        delta_max = std::max(delta_max, delta);
      }
    }
    out.stats.requant_mse_delta_mean = delta_sum / out.cb.beams();
    out.stats.requant_mse_delta_max = delta_max;
  }
  const PatternSummary s = pattern_summary(out, options.pattern_grid_theta_h,
                                           options.pattern_grid_theta_v);
  out.stats.mean_gain_theta = s.mean_gain_theta;
  out.stats.min_gain_theta = s.min_gain_theta;
  out.stats.mean_gain_psi = s.mean_gain_psi;
  out.stats.min_gain_psi = s.min_gain_psi;
}

}  // namespace

Codebook design_codebook(const UpaConfig& upa, const CodebookConfig& cb,
                         const SweepSpec& sweep, std::uint64_t seed,
                         const DesignOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  check_design_feasible(upa, cb);
  const CandidateEnumerator enumerator(cb.l_h, cb.l_v, cb.i_phases);
  sweep.validate(enumerator.total());
  const std::uint64_t count = sweep.count(enumerator.total());
  if (options.resume_completed > count)
    throw std::invalid_argument("design: resume offset beyond sweep length");

  const CMatrix d_h1 =
      build_dictionary(Axis::Horizontal, upa.m_h, cb.q_h, cb.l_h, kPsiBoundH)
          .block(1);
  const CMatrix d_v1 =
      build_dictionary(Axis::Vertical, upa.m_v, cb.q_v, cb.l_v, kPsiBoundV)
          .block(1);
  const MseEvaluator evaluate(upa, cb);

  struct Best {
    bool valid = false;
    double mse = std::numeric_limits<double>::infinity();
    std::uint64_t candidate = 0;
    void offer(double m, std::uint64_t c) {
      if (!valid || m < mse || (m == mse && c < candidate)) {
        valid = true;
        mse = m;
        candidate = c;
      }
    }
  };

  Best global;
  if (options.resume_has_best)
    global.offer(options.resume_best_mse, options.resume_best_candidate);
  bool any_regularized = false;

  const std::uint64_t remaining = count - options.resume_completed;
  constexpr std::uint64_t kBlock = 1024;
  const std::uint64_t n_blocks = (remaining + kBlock - 1) / kBlock;
  std::atomic<std::uint64_t> next_block{0};
  std::vector<char> block_done(static_cast<std::size_t>(n_blocks), 0);
  std::uint64_t prefix_blocks = 0;
  std::uint64_t last_checkpoint = options.resume_completed;
  std::mutex merge_mutex;

  run_workers(options.workers, [&](int) {
    Best local;
    bool local_regularized = false;
    for (;;) {
      const std::uint64_t blk = next_block.fetch_add(1);
      if (blk >= n_blocks) break;
      const std::uint64_t begin = options.resume_completed + blk * kBlock;
      const std::uint64_t end = std::min(begin + kBlock, count);
      for (std::uint64_t pos = begin; pos < end; ++pos) {
        const std::uint64_t idx = sweep.candidate(pos, enumerator.total());
        const auto [gh, gv] = enumerator.at(idx);
        const Beamformer bf = omp_design(upa, d_h1, d_v1, gh, gv, options.quantize);
        local_regularized = local_regularized || bf.regularized;
        local.offer(evaluate(bf.composite, 1, 1), idx);
      }
      std::lock_guard<std::mutex> lock(merge_mutex);
      if (local.valid) global.offer(local.mse, local.candidate);
      any_regularized = any_regularized || local_regularized;
      block_done[static_cast<std::size_t>(blk)] = 1;
      while (prefix_blocks < n_blocks &&
             block_done[static_cast<std::size_t>(prefix_blocks)])
        ++prefix_blocks;
      const std::uint64_t completed =
          std::min(count, options.resume_completed + prefix_blocks * kBlock);
      if (options.on_checkpoint &&
          (completed - last_checkpoint >= options.checkpoint_every ||
           completed == count)) {
        last_checkpoint = completed;
        SweepCheckpoint ck;
        ck.completed = completed;
        ck.total = count;
        ck.has_best = global.valid;
        ck.best_mse = global.mse;
        ck.best_candidate = global.candidate;
        options.on_checkpoint(ck);
      }
    }
  });

  if (!global.valid) throw std::invalid_argument("design: empty candidate list");

  Codebook out;
  out.upa = upa;
  out.cb = cb;
  out.label = "proposed";
  out.quantize = options.quantize;
  out.requantize_shift = options.requantize_shift;
  out.seed = seed;
  out.sweep = sweep;
  const auto [gh, gv] = enumerator.at(global.candidate);
  out.selected_gh = gh.phase_indices;
  out.selected_gv = gv.phase_indices;
  const Beamformer first = omp_design(upa, d_h1, d_v1, gh, gv, options.quantize);
  out.stats.candidates_evaluated = count;
  out.stats.best_candidate_index = global.candidate;
  out.stats.best_mse = global.mse;
  out.stats.any_regularized = any_regularized;
  finish_codebook(out, first, options);
  out.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

Codebook baseline_allones(const UpaConfig& upa, int q_h, int q_v,
                          const DesignOptions& options) {
  CodebookConfig cb;
  cb.q_h = q_h;
  cb.q_v = q_v;
  cb.gamma = 0.0;
  cb.l_h = static_cast<int>((256 + q_h - 1) / q_h);
  cb.l_v = static_cast<int>((256 + q_v - 1) / q_v);
  cb.i_phases = 1;
  Codebook out = design_codebook(upa, cb, SweepSpec{}, 0, options);
  out.label = "allones";
  return out;
}

Codebook baseline_kp_dft(const UpaConfig& upa, int q_h, int q_v) {
  upa.validate();
  if (q_h < 1 || q_v < 1)
    throw std::invalid_argument("kp_dft: beam counts must be >= 1");
  Codebook out;
  out.upa = upa;
  out.cb.q_h = q_h;
  out.cb.q_v = q_v;
  out.cb.l_h = 1;
  out.cb.l_v = 1;
  out.cb.i_phases = 1;
  out.label = "kp_dft";
  out.quantize = false;
  out.entries.reserve(static_cast<std::size_t>(q_h) * q_v);
  for (int q = 1; q <= q_h; ++q) {
    for (int p = 1; p <= q_v; ++p) {
      Beamformer e;
      e.composite = kron_vec(steering_vector(upa.m_h, 2.0 * kPi * q / q_h),
                             steering_vector(upa.m_v, 2.0 * kPi * p / q_v));
      e.analog = e.composite;  // single-column analog stage, |entry|=1/sqrt(M)
      e.baseband = CVector::Constant(1, Complex(1.0, 0.0));
      out.entries.push_back(std::move(e));
    }
  }
  const PatternSummary s = pattern_summary(out);
  out.stats.mean_gain_theta = s.mean_gain_theta;
  out.stats.min_gain_theta = s.min_gain_theta;
  out.stats.mean_gain_psi = s.mean_gain_psi;
  out.stats.min_gain_psi = s.min_gain_psi;
  return out;
}

std::vector<PatternRow> pattern_report(const Codebook& cb, int n_theta_h,
                                       int n_theta_v) {
  if (n_theta_h < 1 || n_theta_v < 1)
    throw std::invalid_argument("pattern_report: grid sizes must be >= 1");
  if (cb.entries.empty())
    throw std::invalid_argument("pattern_report: empty codebook");
  const UpaConfig& upa = cb.upa;
  const int n_beams = static_cast<int>(cb.entries.size());
  using RowMajorC =
      Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  std::vector<PatternRow> rows(static_cast<std::size_t>(n_theta_h) *
                               static_cast<std::size_t>(n_theta_v));
  const double step_h = kPi / n_theta_h;
  const double step_v = (kPi / 2.0) / n_theta_v;
  std::vector<double> psis_h(static_cast<std::size_t>(n_theta_h));
  Eigen::MatrixXd best_gain(n_theta_h, 1);

  for (int jv = 0; jv < n_theta_v; ++jv) {
    const double theta_v = -kPi / 4.0 + (jv + 0.5) * step_v;
    const double psi_v = kPi * std::sin(theta_v);
    const CVector dv = steering_vector(upa.m_v, psi_v);
    for (int ih = 0; ih < n_theta_h; ++ih) {
      const double theta_h = -kPi / 2.0 + (ih + 0.5) * step_h;
      psis_h[static_cast<std::size_t>(ih)] =
          kPi * std::sin(theta_h) * std::cos(theta_v);
    }
    const CMatrix dh_adj = steering_matrix(upa.m_h, psis_h).adjoint();
    Eigen::MatrixXd gains(n_theta_h, n_beams);
    for (int b = 0; b < n_beams; ++b) {
      Eigen::Map<const RowMajorC> cm(
          cb.entries[static_cast<std::size_t>(b)].composite.data(), upa.m_h,
          upa.m_v);
      gains.col(b) = (dh_adj * (cm * dv.conjugate())).cwiseAbs2();
    }
    for (int ih = 0; ih < n_theta_h; ++ih) {
      int best = 0;
      double best_g = gains(ih, 0);
      for (int b = 1; b < n_beams; ++b)
        if (gains(ih, b) > best_g) {  // strict: ties keep the lowest (q, p)
          best_g = gains(ih, b);
          best = b;
        }
      PatternRow& r = rows[static_cast<std::size_t>(ih) *
                               static_cast<std::size_t>(n_theta_v) +
                           static_cast<std::size_t>(jv)];
      r.theta_h = -kPi / 2.0 + (ih + 0.5) * step_h;
      r.theta_v = theta_v;
      r.psi_h = psis_h[static_cast<std::size_t>(ih)];
      r.psi_v = psi_v;
      r.best_q = best / cb.cb.q_v + 1;
      r.best_p = best % cb.cb.q_v + 1;
      r.gain = best_g;
    }
  }
  return rows;
}

PatternSummary pattern_summary(const Codebook& cb, int n_theta_h,
                               int n_theta_v) {
  PatternSummary s;
  const std::vector<PatternRow> rows = pattern_report(cb, n_theta_h, n_theta_v);
  double acc = 0.0;
  double mn = rows.front().gain;
  for (const PatternRow& r : rows) {
    acc += r.gain;
    mn = std::min(mn, r.gain);
  }
  s.mean_gain_theta = acc / static_cast<double>(rows.size());
  s.min_gain_theta = mn;

  // spatial-frequency lattice over the coverage region proper (no guard band)
  CodebookConfig lattice_cfg = cb.cb;
  lattice_cfg.gamma = 0.0;
  const MseGrid grid = MseGrid::build(lattice_cfg);
  Eigen::MatrixXd best = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(grid.psis_h.size()),
      static_cast<Eigen::Index>(grid.psis_v.size()));
  for (const Beamformer& e : cb.entries)
    best = best.cwiseMax(gain_grid(cb.upa, e.composite, grid.psis_h, grid.psis_v));
  s.mean_gain_psi = best.mean();
  s.min_gain_psi = best.minCoeff();
  return s;
}

}  // namespace mmcb
