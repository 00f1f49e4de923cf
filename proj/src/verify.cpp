// SPDX-License-Identifier: Apache-2.0
//
// mmcodebook — hybrid beamforming codebook synthesis and evaluation for
// mmWave uniform planar arrays
// Copyright (C) 2026 mmcodebook contributors

#include "mmcb/verify.hpp"

#include <cmath>
#include <sstream>

#include "mmcb/channel.hpp"
#include "mmcb/io.hpp"

namespace mmcb {

namespace {

CVector random_unit_vector(int m, SubStream& rng) {
  CVector v(m);
  for (int i = 0; i < m; ++i) v(i) = rng.cnormal();
  return v / v.norm();
}

CMatrix random_equal_gain(int m, int n, SubStream& rng) {
  CMatrix f(m, n);
  const double mag = 1.0 / std::sqrt(static_cast<double>(m));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i)
      f(i, j) = std::polar(mag, rng.uniform(0.0, 2.0 * kPi));
  return f;
}

double cosine_similarity(const CVector& a, const CVector& b) {
  return std::abs(a.dot(b)) / (a.norm() * b.norm());
}

VerifyCheck make_check(const std::string& name, double measured,
                       double tolerance, double tol_scale,
                       const std::string& note = "") {
  VerifyCheck c;
  c.name = name;
  c.measured = measured;
  c.tolerance = tolerance * tol_scale;
  c.pass = measured <= c.tolerance;
  c.note = note;
  return c;
}

}  // namespace

std::vector<VerifyCheck> run_verify_suite(const UpaConfig& upa,
                                          const CodebookConfig& cb,
                                          const VerifyOptions& options) {
  upa.validate();
  cb.validate();
  std::vector<VerifyCheck> checks;
  const int m = upa.antennas();

  {  // full-period beam-pattern energy equals (2 pi)^2 / M
    const double expected = 4.0 * kPi * kPi / m;
    double worst = 0.0;
    for (int i = 0; i < options.parseval_beamformers; ++i) {
      SubStream rng(options.seed, static_cast<std::uint64_t>(i), 10);
      const CVector c = random_unit_vector(m, rng);
      const double energy = full_period_energy(upa, c, options.parseval_grid);
      worst = std::max(worst, std::abs(energy - expected) / expected);
    }
    checks.push_back(make_check("parseval_energy", worst, 5e-3,
                                options.tol_scale));
  }

  {  // analog phase shift translates the beam pattern exactly
    double worst = 0.0;
    for (int i = 0; i < options.shift_identity_trials; ++i) {
      SubStream rng(options.seed, static_cast<std::uint64_t>(i), 11);
      const CMatrix f = random_equal_gain(m, upa.n_rf, rng);
      CVector v = random_unit_vector(upa.n_rf, rng);
      v /= (f * v).norm();
      const double shift_h = rng.uniform(-kPi, kPi);
      const double shift_v = rng.uniform(-kPi, kPi);
      const Direction at = make_direction(rng.uniform(-kPi, kPi),
                                          rng.uniform(-kPi, kPi));
      const double g0 = reference_gain(upa, f * v, at);
      const CVector shifted = phase_shift(f, shift_h, shift_v, upa) * v;
      const double g1 = reference_gain(
          upa, shifted,
          make_direction(at.psi_h + shift_h, at.psi_v + shift_v));
      worst = std::max(worst, std::abs(g0 - g1));
    }
    checks.push_back(make_check("pattern_shift_identity", worst, 1e-10,
                                options.tol_scale));
  }

  {  // phase-shift expansion preserves the per-entry full-period MSE
    const CandidateEnumerator enumerator(cb.l_h, cb.l_v, cb.i_phases);
    SweepSpec sweep;
    sweep.mode = SweepSpec::Mode::kStrided;
    sweep.stride = std::max<std::uint64_t>(1, enumerator.total() / 81);
    DesignOptions dopt;
    dopt.workers = options.workers;
    const Codebook book = design_codebook(upa, cb, sweep, options.seed, dopt);
    const double mse11 = mse_full_period(upa, cb, book.entry(1, 1).composite, 1, 1);
    double worst = 0.0;
    for (int q = 1; q <= cb.q_h; ++q)
      for (int p = 1; p <= cb.q_v; ++p)
        worst = std::max(worst,
                         std::abs(mse_full_period(upa, cb,
                                                  book.entry(q, p).composite, q,
                                                  p) -
                                  mse11));
    checks.push_back(make_check("expansion_mse_invariance", worst, 1e-9,
                                options.tol_scale,
                                "sweep " + sweep.describe()));
  }

  {  // closed-form baseband solve vs eigen-iteration route
    double worst = 0.0;
    for (int i = 0; i < options.rayleigh_trials; ++i) {
      SubStream rng(options.seed, static_cast<std::uint64_t>(i), 12);
      const int mm = 2 + static_cast<int>(rng.uniform() * 287.0);
      const int nn = 1 + static_cast<int>(rng.uniform() * 4.0) % 4;
      const CMatrix f = random_equal_gain(mm, std::min(nn, mm), rng);
      CVector w(mm);
      for (int k = 0; k < mm; ++k) w(k) = rng.cnormal();
      const RayleighResult direct = rayleigh_baseband(f, w);
      const RayleighResult iterated = rayleigh_baseband_power_iteration(f, w);
      worst = std::max(worst, 1.0 - cosine_similarity(direct.v, iterated.v));
    }
    checks.push_back(make_check("rayleigh_closed_form_vs_power_iteration",
                                worst, 1e-8, options.tol_scale));
  }

  {  // horizontal grid spans a full period: D D^H = (L Q / M) I exactly
    const DirectionDictionary dict = build_dictionary(
        Axis::Horizontal, upa.m_h, cb.q_h, cb.l_h, kPsiBoundH);
    const double scale =
        static_cast<double>(cb.l_h) * cb.q_h / static_cast<double>(upa.m_h);
    const CMatrix gram = dict.columns * dict.columns.adjoint();
    const double worst =
        (gram - scale * CMatrix::Identity(upa.m_h, upa.m_h)).cwiseAbs().maxCoeff();
    checks.push_back(make_check("dictionary_identity_h", worst, 1e-9,
                                options.tol_scale));
  }

  {  // vertical grid covers less than a period; deviation is reported only
    const DirectionDictionary dict = build_dictionary(
        Axis::Vertical, upa.m_v, cb.q_v, cb.l_v, kPsiBoundV);
    const double scale =
        static_cast<double>(cb.l_v) * cb.q_v / static_cast<double>(upa.m_v);
    const CMatrix gram = dict.columns * dict.columns.adjoint();
    const double dev =
        (gram - scale * CMatrix::Identity(upa.m_v, upa.m_v)).norm() /
        (scale * std::sqrt(static_cast<double>(upa.m_v)));
    VerifyCheck c;
    c.name = "dictionary_identity_v_deviation";
    c.pass = true;
    c.informational = true;
    c.measured = dev;
    c.tolerance = 0.0;
    c.note = "relative Frobenius deviation of D_v D_v^H from (L_v Q_v / M_v) I";
    checks.push_back(c);
  }

  {  // quantizing twice equals quantizing once
    SubStream rng(options.seed, 0, 13);
    const CMatrix f = random_equal_gain(m, upa.n_rf, rng);
    const CMatrix q1 = quantize_phases(f, upa.b_phase);
    const CMatrix q2 = quantize_phases(q1, upa.b_phase);
    const double worst = (q1 - q2).cwiseAbs().maxCoeff();
    checks.push_back(make_check("phase_quantizer_idempotent", worst, 1e-15, 1.0));
  }

  {  // steering vectors are exactly unit norm
    double worst = 0.0;
    SubStream rng(options.seed, 0, 14);
    for (int i = 0; i < 200; ++i) {
      const int ma = 1 + static_cast<int>(rng.uniform() * 64.0);
      worst = std::max(worst, std::abs(steering_vector(
                                  ma, rng.uniform(-kPi, kPi)).norm() - 1.0));
    }
    checks.push_back(make_check("steering_norms", worst, 1e-12,
                                options.tol_scale));
  }

  return checks;
}

bool all_passed(const std::vector<VerifyCheck>& checks) {
  for (const VerifyCheck& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string verify_report_json(const std::vector<VerifyCheck>& checks) {
  std::ostringstream os;
  os << "{\n  \"checks\": [\n";
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const VerifyCheck& c = checks[i];
    os << "    {\"name\": \"" << c.name << "\", \"pass\": "
       << (c.pass ? "true" : "false")
       << ", \"informational\": " << (c.informational ? "true" : "false")
       << ", \"measured\": " << format_double(c.measured)
       << ", \"tolerance\": " << format_double(c.tolerance);
    if (!c.note.empty()) os << ", \"note\": \"" << c.note << "\"";
    os << "}" << (i + 1 < checks.size() ? "," : "") << "\n";
  }
  os << "  ],\n  \"all_pass\": " << (all_passed(checks) ? "true" : "false")
     << "\n}\n";
  return os.str();
}

}  // namespace mmcb
