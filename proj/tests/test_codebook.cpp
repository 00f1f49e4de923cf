// SPDX-License-Identifier: Apache-2.0
//
// mmcodebook — hybrid beamforming codebook synthesis and evaluation for
// mmWave uniform planar arrays
// Copyright (C) 2026 mmcodebook contributors

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "mmcb/io.hpp"
#include "mmcb/simulate.hpp"
#include "test_helpers.hpp"

using namespace mmcb;
using mmcb::testing::random_equal_gain;
using mmcb::testing::random_unit_vector;

namespace {

const UpaConfig kSmallUpa{4, 2, 2, 4, 0.5};

CodebookConfig small_cb() {
  CodebookConfig cfg;
  cfg.q_h = 2;
  cfg.q_v = 2;
  cfg.l_h = 2;
  cfg.l_v = 2;
  cfg.i_phases = 2;
  cfg.mse_grid_per_beam = 10;
  return cfg;
}

}  // namespace

TEST_CASE("phase_shift is a reversible unit-modulus modulation") {
  SubStream rng(31, 0, 0);
  const UpaConfig cfg{4, 3, 2, 6, 0.5};
  const CMatrix f = random_equal_gain(cfg.antennas(), 2, rng);
  const CMatrix same = phase_shift(f, 0.0, 0.0, cfg);
  CHECK((same - f).cwiseAbs().maxCoeff() < 1e-15);

  const double a = 0.83, b = -1.91;
  const CMatrix back = phase_shift(phase_shift(f, a, b, cfg), -a, -b, cfg);
  CHECK((back - f).cwiseAbs().maxCoeff() < 1e-14);

  const CMatrix shifted = phase_shift(f, a, b, cfg);
  for (Eigen::Index j = 0; j < f.cols(); ++j)
    for (Eigen::Index i = 0; i < f.rows(); ++i)
      CHECK(std::abs(std::abs(shifted(i, j)) - std::abs(f(i, j))) < 1e-15);
}

TEST_CASE("phase_shift translates the beam pattern exactly") {
  SubStream rng(32, 0, 0);
  const UpaConfig cfg{6, 4, 3, 6, 0.5};
  const CMatrix f = random_equal_gain(cfg.antennas(), cfg.n_rf, rng);
  CVector v = random_unit_vector(cfg.n_rf, rng);
  v /= (f * v).norm();
  const double sh = 2.0 * kPi * 3.0 / 8.0;      // a beam-offset-style shift
  const double sv = kSqrt2 * kPi * 2.0 / 8.0;   // irrational fraction of 2 pi
  const CVector shifted = phase_shift(f, sh, sv, cfg) * v;
  for (int trial = 0; trial < 1000; ++trial) {
    const double ph = rng.uniform(-kPi, kPi);
    const double pv = rng.uniform(-kPi, kPi);
    const double g0 = reference_gain(cfg, f * v, make_direction(ph, pv));
    const double g1 =
        reference_gain(cfg, shifted, make_direction(ph + sh, pv + sv));
    CHECK(std::abs(g0 - g1) < 1e-10);
  }
}

TEST_CASE("beam_pattern_vector flattens gains in dictionary order") {
  const UpaConfig cfg{4, 3, 1, 6, 0.5};
  const auto dh = build_dictionary(Axis::Horizontal, 4, 2, 2, kPsiBoundH);
  const auto dv = build_dictionary(Axis::Vertical, 3, 2, 2, kPsiBoundV);
  // a beamformer matched to one grid direction hits gain 1 at its own entry
  const CVector c = kron_vec(steering_vector(4, dh.grid[2]),
                             steering_vector(3, dv.grid[1]));
  const Eigen::VectorXd pattern = beam_pattern_vector(cfg, c, dh.grid, dv.grid);
  REQUIRE(pattern.size() == 16);
  CHECK(pattern(2 * 4 + 1) == doctest::Approx(1.0).epsilon(1e-12));
  for (Eigen::Index i = 0; i < pattern.size(); ++i) CHECK(pattern(i) <= 1.0 + 1e-12);

  CHECK_THROWS_AS(beam_pattern_vector(cfg, 0.5 * c, dh.grid, dv.grid),
                  std::invalid_argument);
}

TEST_CASE("full-period pattern sums reproduce the energy identities") {
  const UpaConfig cfg{4, 3, 1, 6, 0.5};
  SubStream rng(33, 0, 0);
  const CVector c = random_unit_vector(cfg.antennas(), rng);
  // uniform full-period grids on both axes (vertical bound forced to pi)
  const int q = 4, l = 4;
  const std::vector<double> gh = direction_grid(q, l, kPi);
  const Eigen::VectorXd pattern = beam_pattern_vector(cfg, c, gh, gh);
  const double cell = (2.0 * kPi / (q * l)) * (2.0 * kPi / (q * l));
  CHECK(pattern.sum() * cell ==
        doctest::Approx(4.0 * kPi * kPi / cfg.antennas()).epsilon(1e-9));
  // || (D_h^H (x) D_v^H) c ||^2 = L Q / M on full-period grids
  CHECK(pattern.sum() ==
        doctest::Approx(static_cast<double>(q * l) * (q * l) / cfg.antennas())
            .epsilon(1e-9));
}

TEST_CASE("mse_to_ideal agrees with a per-direction oracle") {
  const UpaConfig upa = kSmallUpa;
  const CodebookConfig cfg = small_cb();
  const MseGrid grid = MseGrid::build(cfg);
  SubStream rng(34, 0, 0);
  const CVector c = random_unit_vector(upa.antennas(), rng);
  const double level = ideal_level(upa.antennas(), cfg);
  const auto regions = partition_regions(cfg);
  for (int q = 1; q <= cfg.q_h; ++q) {
    for (int p = 1; p <= cfg.q_v; ++p) {
      const BeamRegion region = guard_band_region(
          regions[static_cast<std::size_t>((q - 1) * cfg.q_v + (p - 1))],
          cfg.gamma);
      double acc = 0.0;
      for (double ph : grid.psis_h) {
        for (double pv : grid.psis_v) {
          const double actual = reference_gain(upa, c, make_direction(ph, pv));
          const double ideal = region.contains(ph, pv) ? level : 0.0;
          acc += (actual - ideal) * (actual - ideal);
        }
      }
      acc /= static_cast<double>(grid.psis_h.size() * grid.psis_v.size());
      CHECK(mse_to_ideal(upa, cfg, c, q, p, grid) ==
            doctest::Approx(acc).epsilon(1e-12));
      CHECK(MseEvaluator(upa, cfg)(c, q, p) == doctest::Approx(acc).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(mse_to_ideal(upa, cfg, 0.1 * c, 1, 1, grid),
                  std::invalid_argument);
}

TEST_CASE("guard band extends the evaluation grid below the coverage edge") {
  CodebookConfig cfg = small_cb();
  cfg.gamma = 0.075;
  cfg.mse_grid_per_beam = 20;
  const MseGrid grid = MseGrid::build(cfg);
  // floor(0.075 * 20 + 0.5) = 2 extra lattice points per axis
  CHECK(grid.psis_h.size() == 2u + 2u * 20u);
  CHECK(grid.psis_v.size() == 2u + 2u * 20u);
  CHECK(grid.psis_h.front() < -kPsiBoundH);
  CHECK(grid.psis_h.front() >= -kPsiBoundH - cfg.gamma * cfg.delta_h() - 1e-12);
  // the first beam's widened range contains the extension points
  const Eigen::VectorXd mask = grid.axis_mask(Axis::Horizontal, 1);
  CHECK(mask(0) == 1.0);
  CHECK(mask(1) == 1.0);
}

TEST_CASE("design_codebook expands one optimized beamformer to all beams") {
  const Codebook book = design_codebook(kSmallUpa, small_cb(), SweepSpec{}, 7);
  REQUIRE(book.entries.size() == 4);
  const Beamformer& first = book.entry(1, 1);
  for (int q = 1; q <= 2; ++q) {
    for (int p = 1; p <= 2; ++p) {
      const Beamformer& e = book.entry(q, p);
      CHECK(std::abs(e.composite.norm() - 1.0) < 1e-12);
      const CMatrix expected =
          phase_shift(first.analog, (q - 1) * book.cb.delta_h(),
                      (p - 1) * book.cb.delta_v(), kSmallUpa);
      CHECK((e.analog - expected).cwiseAbs().maxCoeff() < 1e-14);
      CHECK((e.baseband - first.baseband).norm() == 0.0);
      const double mag = 1.0 / std::sqrt(static_cast<double>(kSmallUpa.antennas()));
      for (Eigen::Index j = 0; j < e.analog.cols(); ++j)
        for (Eigen::Index i = 0; i < e.analog.rows(); ++i)
          CHECK(std::abs(std::abs(e.analog(i, j)) - mag) < 1e-14);
    }
  }
  CHECK(book.stats.candidates_evaluated == 4);  // 2^(2+2-2)
  CHECK(book.stats.best_mse >= 0.0);
}

TEST_CASE("expanded entries keep the first entry's full-period MSE") {
  const Codebook book = design_codebook(kSmallUpa, small_cb(), SweepSpec{}, 7);
  const double mse11 =
      mse_full_period(kSmallUpa, book.cb, book.entry(1, 1).composite, 1, 1, 128);
  for (int q = 1; q <= 2; ++q)
    for (int p = 1; p <= 2; ++p)
      CHECK(std::abs(mse_full_period(kSmallUpa, book.cb,
                                     book.entry(q, p).composite, q, p, 128) -
                     mse11) < 1e-9);
}

TEST_CASE("direct per-beam solves match the expansion (unquantized)") {
  // small config, full sweep: solving the shifted problem for beam (q, p)
  // selects a beamformer with the same anchored full-period MSE as the
  // expanded entry
  const CodebookConfig cfg = small_cb();
  DesignOptions opts;
  opts.quantize = false;
  const Codebook book = design_codebook(kSmallUpa, cfg, SweepSpec{}, 7, opts);
  const CandidateEnumerator enumerate(cfg.l_h, cfg.l_v, cfg.i_phases);
  const auto dh = build_dictionary(Axis::Horizontal, kSmallUpa.m_h, cfg.q_h,
                                   cfg.l_h, kPsiBoundH);
  const auto dv = build_dictionary(Axis::Vertical, kSmallUpa.m_v, cfg.q_v,
                                   cfg.l_v, kPsiBoundV);
  for (int q = 1; q <= cfg.q_h; ++q) {
    for (int p = 1; p <= cfg.q_v; ++p) {
      double best = std::numeric_limits<double>::infinity();
      for (std::uint64_t idx = 0; idx < enumerate.total(); ++idx) {
        const auto [gh, gv] = enumerate.at(idx);
        const CVector target =
            target_beamformer(dh.block(q), dv.block(p), gh, gv);
        const Beamformer bf = omp_design(kSmallUpa, target, false);
        best = std::min(best,
                        mse_full_period(kSmallUpa, cfg, bf.composite, q, p, 128));
      }
      const double expanded = mse_full_period(
          kSmallUpa, cfg, book.entry(q, p).composite, q, p, 128);
      CHECK(std::abs(best - expanded) < 1e-9);
    }
  }
}

TEST_CASE("design selection is deterministic and worker-independent") {
  const CodebookConfig cfg = small_cb();
  DesignOptions one;
  one.workers = 1;
  DesignOptions four;
  four.workers = 4;
  const Codebook a = design_codebook(kSmallUpa, cfg, SweepSpec{}, 7, one);
  const Codebook b = design_codebook(kSmallUpa, cfg, SweepSpec{}, 7, four);
  std::ostringstream sa, sb;
  write_codebook(sa, a);
  write_codebook(sb, b);
  // wall-clock differs; compare everything else
  std::string ta = sa.str(), tb = sb.str();
  const auto strip = [](std::string& s) {
    const std::size_t at = s.find("wall_seconds");
    const std::size_t end = s.find('\n', at);
    s.erase(at, end - at);
  };
  strip(ta);
  strip(tb);
  CHECK(ta == tb);
}

TEST_CASE("sweep specs address the candidate space") {
  SweepSpec strided;
  strided.mode = SweepSpec::Mode::kStrided;
  strided.stride = 729;
  CHECK(strided.count(4782969) == 6561);
  CHECK(strided.candidate(2, 4782969) == 1458);
  SweepSpec ex;
  ex.mode = SweepSpec::Mode::kExplicit;
  ex.indices = {5, 0, 7};
  CHECK(ex.count(100) == 3);
  CHECK(ex.candidate(1, 100) == 0);
  CHECK_THROWS_AS([&] {
    SweepSpec bad;
    bad.mode = SweepSpec::Mode::kExplicit;
    bad.validate(10);
  }(), std::invalid_argument);
  CHECK_THROWS_AS([&] {
    SweepSpec bad;
    bad.mode = SweepSpec::Mode::kExplicit;
    bad.indices = {10};
    bad.validate(10);
  }(), std::invalid_argument);
}

TEST_CASE("design rejects infeasible and under-resolved configurations") {
  CodebookConfig too_many = small_cb();
  too_many.q_h = 4;  // Q = 8 = M
  CHECK_THROWS_AS(design_codebook(kSmallUpa, too_many, SweepSpec{}, 0),
                  InfeasibleConfigError);
  CodebookConfig coarse = small_cb();
  coarse.l_h = 1;
  coarse.l_v = 1;  // L*Q = 4 < M = 8
  CHECK_THROWS_AS(design_codebook(kSmallUpa, coarse, SweepSpec{}, 0),
                  std::invalid_argument);
}

TEST_CASE("resume reproduces the uninterrupted sweep result") {
  const CodebookConfig cfg = small_cb();
  const Codebook full = design_codebook(kSmallUpa, cfg, SweepSpec{}, 7);
  // first half, then resume with the recorded best
  DesignOptions first_half;
  SweepCheckpoint saved;
  first_half.checkpoint_every = 1;
  first_half.on_checkpoint = [&](const SweepCheckpoint& ck) {
    if (ck.completed <= 2) saved = ck;
  };
  (void)design_codebook(kSmallUpa, cfg, SweepSpec{}, 7, first_half);
  DesignOptions resumed;
  resumed.resume_completed = saved.completed;
  resumed.resume_has_best = saved.has_best;
  resumed.resume_best_mse = saved.best_mse;
  resumed.resume_best_candidate = saved.best_candidate;
  const Codebook again = design_codebook(kSmallUpa, cfg, SweepSpec{}, 7, resumed);
  CHECK(again.stats.best_candidate_index == full.stats.best_candidate_index);
  CHECK(again.stats.best_mse == full.stats.best_mse);
}

TEST_CASE("all-ones baseline uses the prescribed decomposition lengths") {
  const UpaConfig upa{12, 6, 4, 6, 0.5};
  const Codebook book = baseline_allones(upa, 8, 8);
  CHECK(book.cb.l_h == 32);  // ceil(256 / 8)
  CHECK(book.cb.l_v == 32);
  CHECK(book.entries.size() == 64);
  CHECK(book.label == "allones");
  CHECK(book.stats.candidates_evaluated == 1);
  for (const Beamformer& e : book.entries)
    CHECK(std::abs(e.composite.norm() - 1.0) < 1e-12);
}

TEST_CASE("kp-dft baseline is the Kronecker grid of DFT beams") {
  const UpaConfig upa{4, 2, 1, 6, 0.5};
  const Codebook book = baseline_kp_dft(upa, 4, 2);
  REQUIRE(book.entries.size() == 8);
  // Q_a = M_a: mutually orthonormal entries
  for (std::size_t i = 0; i < book.entries.size(); ++i) {
    CHECK(std::abs(book.entries[i].composite.norm() - 1.0) < 1e-12);
    for (std::size_t j = i + 1; j < book.entries.size(); ++j)
      CHECK(std::abs(book.entries[i].composite.dot(book.entries[j].composite)) <
            1e-12);
  }
  // matched-direction gain is 1
  for (int q = 1; q <= 4; ++q)
    for (int p = 1; p <= 2; ++p)
      CHECK(reference_gain(upa, book.entry(q, p).composite,
                           make_direction(2.0 * kPi * q / 4.0,
                                          2.0 * kPi * p / 2.0)) ==
            doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pattern_report covers the angle grid with gains in [0, 1]") {
  const UpaConfig upa{4, 2, 1, 6, 0.5};
  const Codebook book = baseline_kp_dft(upa, 4, 2);
  const auto rows = pattern_report(book, 24, 12);
  CHECK(rows.size() == 24u * 12u);
  for (const PatternRow& r : rows) {
    CHECK(r.gain >= 0.0);
    CHECK(r.gain <= 1.0 + 1e-12);
    CHECK(r.psi_h == doctest::Approx(kPi * std::sin(r.theta_h) * std::cos(r.theta_v)));
    CHECK(r.psi_v == doctest::Approx(kPi * std::sin(r.theta_v)));
  }

  // single-entry codebook: constant best index
  const Codebook single = baseline_kp_dft(upa, 1, 1);
  for (const PatternRow& r : pattern_report(single, 8, 4)) {
    CHECK(r.best_q == 1);
    CHECK(r.best_p == 1);
  }
}

TEST_CASE("codebook files round-trip bit-exactly") {
  const Codebook book = design_codebook(kSmallUpa, small_cb(), SweepSpec{}, 99);
  std::ostringstream first;
  write_codebook(first, book);
  std::istringstream in(first.str());
  const Codebook loaded = read_codebook(in);
  std::ostringstream second;
  write_codebook(second, loaded);
  CHECK(first.str() == second.str());
  CHECK(loaded.label == book.label);
  CHECK(loaded.seed == book.seed);
  CHECK(loaded.stats.best_mse == book.stats.best_mse);
  for (std::size_t i = 0; i < book.entries.size(); ++i) {
    CHECK((loaded.entries[i].composite - book.entries[i].composite).norm() == 0.0);
    CHECK((loaded.entries[i].analog - book.entries[i].analog).norm() == 0.0);
  }
}

TEST_CASE("corrupt codebook documents are rejected") {
  CHECK_THROWS_AS([] {
    std::istringstream in("not a codebook\n");
    (void)read_codebook(in);
  }(), CodebookIoError);
  const Codebook book = baseline_kp_dft(UpaConfig{2, 2, 1, 6, 0.5}, 2, 1);
  std::ostringstream os;
  write_codebook(os, book);
  std::string text = os.str();
  text.replace(text.find("q_v = 1"), 7, "q_v = 3");
  CHECK_THROWS_AS([&] {
    std::istringstream in(text);
    (void)read_codebook(in);
  }(), CodebookIoError);
}

TEST_CASE("requantize-shift mode restores grid phases at a measured MSE cost") {
  CodebookConfig cfg = small_cb();
  DesignOptions opts;
  opts.requantize_shift = true;
  const Codebook book = design_codebook(kSmallUpa, cfg, SweepSpec{}, 7, opts);
  for (const Beamformer& e : book.entries) {
    CHECK(e.quantized);
    CHECK(std::abs(e.composite.norm() - 1.0) < 1e-12);
    const CMatrix requant = quantize_phases(e.analog, kSmallUpa.b_phase);
    CHECK((requant - e.analog).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK(book.stats.requant_mse_delta_max >= book.stats.requant_mse_delta_mean);
}
