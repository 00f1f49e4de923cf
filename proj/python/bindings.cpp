// SPDX-License-Identifier: Apache-2.0
//
// mmcodebook — hybrid beamforming codebook synthesis and evaluation for
// mmWave uniform planar arrays
// Copyright (C) 2026 mmcodebook contributors

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "mmcb/io.hpp"
#include "mmcb/simulate.hpp"
#include "mmcb/verify.hpp"

namespace py = pybind11;
using namespace mmcb;

namespace {

SweepSpec make_sweep(const std::string& mode, std::uint64_t stride,
                     const std::vector<std::uint64_t>& indices) {
  SweepSpec s;
  if (mode == "full") {
    s.mode = SweepSpec::Mode::kFull;
  } else if (mode == "strided") {
    s.mode = SweepSpec::Mode::kStrided;
    s.stride = stride;
  } else if (mode == "explicit") {
    s.mode = SweepSpec::Mode::kExplicit;
    s.indices = indices;
  } else {
    throw std::invalid_argument("sweep mode must be full, strided or explicit");
  }
  return s;
}

py::dict stats_dict(const BuildStats& s) {
  py::dict d;
  d["candidates_evaluated"] = s.candidates_evaluated;
  d["best_candidate_index"] = s.best_candidate_index;
  d["best_mse"] = s.best_mse;
  d["wall_seconds"] = s.wall_seconds;
  d["any_regularized"] = s.any_regularized;
  d["mean_gain_theta"] = s.mean_gain_theta;
  d["min_gain_theta"] = s.min_gain_theta;
  d["mean_gain_psi"] = s.mean_gain_psi;
  d["min_gain_psi"] = s.min_gain_psi;
  d["requant_mse_delta_mean"] = s.requant_mse_delta_mean;
  d["requant_mse_delta_max"] = s.requant_mse_delta_max;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "mmWave hybrid-beamforming codebook synthesis and evaluation";

  py::register_exception<InfeasibleConfigError>(m, "InfeasibleConfigError");
  py::register_exception<CodebookIoError>(m, "CodebookIoError");

  py::class_<UpaConfig>(m, "UpaConfig")
      .def(py::init([](int m_h, int m_v, int n_rf, int b_phase,
                       double spacing_over_lambda) {
             UpaConfig cfg{m_h, m_v, n_rf, b_phase, spacing_over_lambda};
             cfg.validate();
             return cfg;
           }),
           py::arg("m_h"), py::arg("m_v"), py::arg("n_rf"),
           py::arg("b_phase") = 6, py::arg("spacing_over_lambda") = 0.5)
      .def_readonly("m_h", &UpaConfig::m_h)
      .def_readonly("m_v", &UpaConfig::m_v)
      .def_readonly("n_rf", &UpaConfig::n_rf)
      .def_readonly("b_phase", &UpaConfig::b_phase)
      .def_readonly("spacing_over_lambda", &UpaConfig::spacing_over_lambda)
      .def_property_readonly("antennas", &UpaConfig::antennas)
      .def("__repr__", [](const UpaConfig& c) {
        std::ostringstream os;
        os << "UpaConfig(m_h=" << c.m_h << ", m_v=" << c.m_v
           << ", n_rf=" << c.n_rf << ", b_phase=" << c.b_phase << ")";
        return os.str();
      });

  py::class_<CodebookConfig>(m, "CodebookConfig")
      .def(py::init([](int q_h, int q_v, double gamma, int l_h, int l_v,
                       int i_phases, int mse_grid_per_beam) {
             CodebookConfig cfg;
             cfg.q_h = q_h;
             cfg.q_v = q_v;
             cfg.gamma = gamma;
             cfg.l_h = l_h;
             cfg.l_v = l_v;
             cfg.i_phases = i_phases;
             cfg.mse_grid_per_beam = mse_grid_per_beam;
             cfg.validate();
             return cfg;
           }),
           py::arg("q_h"), py::arg("q_v"), py::arg("gamma") = 0.0,
           py::arg("l_h") = 8, py::arg("l_v") = 8, py::arg("i_phases") = 3,
           py::arg("mse_grid_per_beam") = 20)
      .def_readonly("q_h", &CodebookConfig::q_h)
      .def_readonly("q_v", &CodebookConfig::q_v)
      .def_readonly("gamma", &CodebookConfig::gamma)
      .def_readonly("l_h", &CodebookConfig::l_h)
      .def_readonly("l_v", &CodebookConfig::l_v)
      .def_readonly("i_phases", &CodebookConfig::i_phases)
      .def_readonly("mse_grid_per_beam", &CodebookConfig::mse_grid_per_beam)
      .def_property_readonly("beams", &CodebookConfig::beams)
      .def_property_readonly("delta_h", &CodebookConfig::delta_h)
      .def_property_readonly("delta_v", &CodebookConfig::delta_v);

  py::class_<ChannelScenario>(m, "ChannelScenario")
      .def(py::init([](double k_factor_db, int n_nlos, bool los_present,
                       bool normalize_to_m) {
             ChannelScenario s{k_factor_db, n_nlos, los_present, normalize_to_m};
             s.validate();
             return s;
           }),
           py::arg("k_factor_db") = 13.5, py::arg("n_nlos") = 3,
           py::arg("los_present") = true, py::arg("normalize_to_m") = true)
      .def_readonly("k_factor_db", &ChannelScenario::k_factor_db)
      .def_readonly("n_nlos", &ChannelScenario::n_nlos)
      .def_readonly("los_present", &ChannelScenario::los_present)
      .def_readonly("normalize_to_m", &ChannelScenario::normalize_to_m)
      .def_property_readonly("k_linear", &ChannelScenario::k_linear);

  py::class_<Beamformer>(m, "Beamformer")
      .def_readonly("analog", &Beamformer::analog)
      .def_readonly("baseband", &Beamformer::baseband)
      .def_readonly("composite", &Beamformer::composite)
      .def_readonly("quantized", &Beamformer::quantized)
      .def_readonly("regularized", &Beamformer::regularized);

  py::class_<Codebook>(m, "Codebook")
      .def_readonly("upa", &Codebook::upa)
      .def_readonly("config", &Codebook::cb)
      .def_readonly("label", &Codebook::label)
      .def_readonly("seed", &Codebook::seed)
      .def_readonly("selected_gh", &Codebook::selected_gh)
      .def_readonly("selected_gv", &Codebook::selected_gv)
      .def_property_readonly("stats",
                             [](const Codebook& cb) { return stats_dict(cb.stats); })
      .def("entry", &Codebook::entry, py::arg("q"), py::arg("p"),
           py::return_value_policy::reference_internal)
      .def("composites", &Codebook::composites)
      .def("save", [](const Codebook& cb, const std::string& path) {
        save_codebook(path, cb);
      })
      .def("__len__", [](const Codebook& cb) { return cb.entries.size(); })
      .def("__repr__", [](const Codebook& cb) {
        std::ostringstream os;
        os << "Codebook(label='" << cb.label << "', beams=" << cb.cb.q_h << "x"
           << cb.cb.q_v << ")";
        return os.str();
      });

  m.def("load_codebook", &load_codebook, py::arg("path"));

  m.def("steering_vector", &steering_vector, py::arg("m_a"), py::arg("psi"));
  m.def(
      "planar_steering",
      [](const UpaConfig& cfg, double psi_h, double psi_v) {
        return planar_steering(cfg, make_direction(psi_h, psi_v));
      },
      py::arg("cfg"), py::arg("psi_h"), py::arg("psi_v"));
  m.def(
      "reference_gain",
      [](const UpaConfig& cfg, const CVector& c, double psi_h, double psi_v) {
        return reference_gain(cfg, c, make_direction(psi_h, psi_v));
      },
      py::arg("cfg"), py::arg("c"), py::arg("psi_h"), py::arg("psi_v"));
  m.def("gain_grid", &gain_grid, py::arg("cfg"), py::arg("c"),
        py::arg("psis_h"), py::arg("psis_v"));
  m.def("full_period_energy", &full_period_energy, py::arg("cfg"),
        py::arg("c"), py::arg("n") = 512);
  m.def("direction_grid", &direction_grid, py::arg("q_count"),
        py::arg("l_count"), py::arg("psi_bound"));
  m.def("quantize_phases", &quantize_phases, py::arg("analog"),
        py::arg("b_phase"));
  m.def("quantize_phase", &quantize_phase, py::arg("phase"), py::arg("b_phase"));
  m.def("wrap_psi", &wrap_psi, py::arg("psi"));
  m.attr("PSI_BOUND_H") = kPsiBoundH;
  m.attr("PSI_BOUND_V") = kPsiBoundV;

  m.def("ideal_level", &ideal_level, py::arg("antennas"), py::arg("cfg"));
  m.def("ideal_vector", &ideal_vector, py::arg("cfg"), py::arg("upa"),
        py::arg("q"), py::arg("p"));
  m.def("rate_upper_bound", &rate_upper_bound, py::arg("rho"),
        py::arg("h_norm_sq"), py::arg("antennas"), py::arg("cfg"));
  m.def(
      "partition_regions",
      [](const CodebookConfig& cfg) {
        std::vector<std::tuple<double, double, double, double>> out;
        for (const BeamRegion& r : partition_regions(cfg))
          out.emplace_back(r.psi_h_lo, r.psi_h_hi, r.psi_v_lo, r.psi_v_hi);
        return out;
      },
      py::arg("cfg"));

  m.def(
      "candidate_total",
      [](int l_h, int l_v, int i_phases) {
        return CandidateEnumerator(l_h, l_v, i_phases).total();
      },
      py::arg("l_h"), py::arg("l_v"), py::arg("i_phases"));
  m.def(
      "omp_design",
      [](const UpaConfig& cfg, const CVector& target, bool quantize) {
        return omp_design(cfg, target, quantize);
      },
      py::arg("cfg"), py::arg("target"), py::arg("quantize") = true);
  m.def(
      "phase_shift",
      [](const CMatrix& analog, double dpsi_h, double dpsi_v,
         const UpaConfig& cfg) {
        return phase_shift(analog, dpsi_h, dpsi_v, cfg);
      },
      py::arg("analog"), py::arg("dpsi_h"), py::arg("dpsi_v"), py::arg("cfg"));

  m.def(
      "design_codebook",
      [](const UpaConfig& upa, const CodebookConfig& cb,
         const std::string& sweep, std::uint64_t stride,
         const std::vector<std::uint64_t>& indices, std::uint64_t seed,
         bool quantize, bool requantize_shift, int workers) {
        DesignOptions opts;
        opts.quantize = quantize;
        opts.requantize_shift = requantize_shift;
        opts.workers = workers;
        return design_codebook(upa, cb, make_sweep(sweep, stride, indices),
                               seed, opts);
      },
      py::arg("upa"), py::arg("cb"), py::arg("sweep") = "full",
      py::arg("stride") = 1,
      py::arg("indices") = std::vector<std::uint64_t>{}, py::arg("seed") = 0,
      py::arg("quantize") = true, py::arg("requantize_shift") = false,
      py::arg("workers") = 1);
  m.def(
      "baseline_allones",
      [](const UpaConfig& upa, int q_h, int q_v, int workers) {
        DesignOptions opts;
        opts.workers = workers;
        return baseline_allones(upa, q_h, q_v, opts);
      },
      py::arg("upa"), py::arg("q_h"), py::arg("q_v"), py::arg("workers") = 1);
  m.def("baseline_kp_dft", &baseline_kp_dft, py::arg("upa"), py::arg("q_h"),
        py::arg("q_v"));

  m.def(
      "pattern_report",
      [](const Codebook& cb, int n_theta_h, int n_theta_v) {
        std::vector<std::tuple<double, double, double, double, int, int, double>>
            out;
        for (const PatternRow& r : pattern_report(cb, n_theta_h, n_theta_v))
          out.emplace_back(r.theta_h, r.theta_v, r.psi_h, r.psi_v, r.best_q,
                           r.best_p, r.gain);
        return out;
      },
      py::arg("cb"), py::arg("n_theta_h") = 180, py::arg("n_theta_v") = 90);
  m.def(
      "pattern_summary",
      [](const Codebook& cb, int n_theta_h, int n_theta_v) {
        const PatternSummary s = pattern_summary(cb, n_theta_h, n_theta_v);
        py::dict d;
        d["mean_gain_theta"] = s.mean_gain_theta;
        d["min_gain_theta"] = s.min_gain_theta;
        d["mean_gain_psi"] = s.mean_gain_psi;
        d["min_gain_psi"] = s.min_gain_psi;
        return d;
      },
      py::arg("cb"), py::arg("n_theta_h") = 180, py::arg("n_theta_v") = 90);
  m.def(
      "mse_to_ideal",
      [](const UpaConfig& upa, const CodebookConfig& cfg, const CVector& c,
         int q, int p) {
        return mse_to_ideal(upa, cfg, c, q, p, MseGrid::build(cfg));
      },
      py::arg("upa"), py::arg("cfg"), py::arg("c"), py::arg("q"), py::arg("p"));
  m.def("mse_full_period", &mse_full_period, py::arg("upa"), py::arg("cfg"),
        py::arg("c"), py::arg("q"), py::arg("p"), py::arg("n") = 256);

  m.def(
      "generate_channel",
      [](const ChannelScenario& scenario, const UpaConfig& cfg,
         std::uint64_t seed, std::uint64_t realization) {
        SubStream rng(seed, realization, 0);
        const ChannelRealization ch = generate_channel(scenario, cfg, rng);
        py::dict d;
        d["h"] = ch.h;
        d["has_los"] = ch.has_los;
        return d;
      },
      py::arg("scenario"), py::arg("cfg"), py::arg("seed"),
      py::arg("realization") = 0);
  m.def("feedback_bits", &feedback_bits, py::arg("q_h"), py::arg("q_v"));

  m.def(
      "evaluate_rate",
      [](const Codebook& cb, const ChannelScenario& scenario,
         const std::vector<double>& snr_db, int n_realizations,
         std::uint64_t seed, double tau_threshold, int workers) {
        SimOptions opts;
        opts.tau_threshold = tau_threshold;
        opts.workers = workers;
        const RateTable t =
            evaluate_rate(cb, scenario, snr_db, n_realizations, seed, opts);
        std::vector<py::dict> rows;
        for (const RatePoint& p : t.points) {
          py::dict d;
          d["snr_db"] = p.snr_db;
          d["codebook"] = t.codebook;
          d["mean_rate"] = p.mean_rate;
          d["stderr"] = p.stderr_mean;
          d["misalign_rate"] = p.misalign_rate;
          d["resound_rate"] = p.resound_rate;
          d["feedback_bits"] = p.feedback_bits_mean;
          rows.push_back(d);
        }
        return rows;
      },
      py::arg("cb"), py::arg("scenario"), py::arg("snr_db"),
      py::arg("n_realizations"), py::arg("seed") = 0,
      py::arg("tau_threshold") = 2.0, py::arg("workers") = 1);
  m.def(
      "paired_compare",
      [](const Codebook& a, const Codebook& b, const ChannelScenario& scenario,
         const std::vector<double>& snr_db, int n_realizations,
         std::uint64_t seed, double tau_threshold, int workers) {
        SimOptions opts;
        opts.tau_threshold = tau_threshold;
        opts.workers = workers;
        std::vector<py::dict> rows;
        for (const PairedPoint& p : paired_compare(a, b, scenario, snr_db,
                                                   n_realizations, seed, opts)) {
          py::dict d;
          d["snr_db"] = p.snr_db;
          d["mean_rate_a"] = p.mean_rate_a;
          d["mean_rate_b"] = p.mean_rate_b;
          d["mean_diff"] = p.mean_diff;
          d["stderr_diff"] = p.stderr_diff;
          rows.push_back(d);
        }
        return rows;
      },
      py::arg("a"), py::arg("b"), py::arg("scenario"), py::arg("snr_db"),
      py::arg("n_realizations"), py::arg("seed") = 0,
      py::arg("tau_threshold") = 2.0, py::arg("workers") = 1);

  m.def(
      "verify",
      [](const UpaConfig& upa, const CodebookConfig& cb, double tol_scale,
         std::uint64_t seed, int workers) {
        VerifyOptions opts;
        opts.tol_scale = tol_scale;
        opts.seed = seed;
        opts.workers = workers;
        std::vector<py::dict> rows;
        for (const VerifyCheck& c : run_verify_suite(upa, cb, opts)) {
          py::dict d;
          d["name"] = c.name;
          d["pass"] = c.pass;
          d["informational"] = c.informational;
          d["measured"] = c.measured;
          d["tolerance"] = c.tolerance;
          d["note"] = c.note;
          rows.push_back(d);
        }
        return rows;
      },
      py::arg("upa"), py::arg("cb"), py::arg("tol_scale") = 1.0,
      py::arg("seed") = 20260101, py::arg("workers") = 1);
}
