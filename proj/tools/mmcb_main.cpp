// SPDX-License-Identifier: Apache-2.0
//
// mmcodebook — hybrid beamforming codebook synthesis and evaluation for
// mmWave uniform planar arrays
// Copyright (C) 2026 mmcodebook contributors

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mmcb/config.hpp"
#include "mmcb/io.hpp"
#include "mmcb/simulate.hpp"
#include "mmcb/verify.hpp"

namespace {

// stable exit codes, documented in the README
constexpr int kExitInvalidConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitCorruptCodebook = 4;
constexpr int kExitUpaMismatch = 5;

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  int workers = 1;
  bool seed_set = false;
  std::uint64_t seed = 0;
};

void add_seed_option(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option_function<std::uint64_t>(
         "--seed",
         [&args](std::uint64_t v) {
           args.seed = v;
           args.seed_set = true;
         },
         "Override the master seed from the config");
}

void write_or_print(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
    return;
  }
  mmcb::write_text_file(out_path, content);
}

int run_design(const CommonArgs& args, bool requantize_shift,
               bool stride_set, std::uint64_t stride_override, bool resume,
               const std::string& baseline) {
  const mmcb::ConfigDoc doc = mmcb::ConfigDoc::parse_file(args.config_path);
  mmcb::RunConfig rc = mmcb::load_run_config(doc, true, baseline != "kp-dft");
  if (args.seed_set) rc.seed = args.seed;
  if (stride_set) {
    rc.sweep.mode = mmcb::SweepSpec::Mode::kStrided;
    rc.sweep.stride = stride_override;
  }
  std::string out_path = args.out_path;
  if (out_path.empty()) out_path = rc.output_dir + "/codebook.cbk";
  const std::string checkpoint_path = out_path + ".ckpt";

  mmcb::Codebook book;
  if (baseline == "kp-dft") {
    book = mmcb::baseline_kp_dft(rc.upa, rc.codebook.q_h, rc.codebook.q_v);
  } else {
    mmcb::DesignOptions opts;
    opts.workers = args.workers;
    opts.requantize_shift = requantize_shift;
    opts.on_checkpoint = [&](const mmcb::SweepCheckpoint& ck) {
      mmcb::write_text_file(checkpoint_path, mmcb::checkpoint_text(ck));
      std::fprintf(stderr, "design: %llu/%llu candidates, best mse %.6g\n",
                   static_cast<unsigned long long>(ck.completed),
                   static_cast<unsigned long long>(ck.total), ck.best_mse);
    };
    if (resume) {
      mmcb::SweepCheckpoint ck;
      if (mmcb::read_checkpoint(checkpoint_path, ck)) {
        opts.resume_completed = ck.completed;
        opts.resume_has_best = ck.has_best;
        opts.resume_best_mse = ck.best_mse;
        opts.resume_best_candidate = ck.best_candidate;
        std::fprintf(stderr, "design: resuming after %llu candidates\n",
                     static_cast<unsigned long long>(ck.completed));
      }
    }
    if (baseline == "allones") {
      book = mmcb::baseline_allones(rc.upa, rc.codebook.q_h, rc.codebook.q_v, opts);
    } else {
      book = mmcb::design_codebook(rc.upa, rc.codebook, rc.sweep, rc.seed, opts);
    }
  }
  mmcb::save_codebook(out_path, book);
  mmcb::write_text_file(out_path + ".stats.json", mmcb::build_stats_json(book));
  std::remove(checkpoint_path.c_str());
  std::fprintf(stderr,
               "design: wrote %s (%llu candidates, best mse %.6g, "
               "mean gain theta %.4f / psi %.4f, %.1f s)\n",
               out_path.c_str(),
               static_cast<unsigned long long>(book.stats.candidates_evaluated),
               book.stats.best_mse, book.stats.mean_gain_theta,
               book.stats.mean_gain_psi, book.stats.wall_seconds);
  return 0;
}

int run_pattern(const std::string& codebook_path, const std::string& out_path,
                int grid_res) {
  const mmcb::Codebook book = mmcb::load_codebook(codebook_path);
  const int n_h = grid_res;
  const int n_v = std::max(1, grid_res / 2);
  const std::vector<mmcb::PatternRow> rows = mmcb::pattern_report(book, n_h, n_v);
  std::ostringstream os;
  mmcb::write_pattern_csv(os, rows);
  write_or_print(out_path, os.str());
  const mmcb::PatternSummary s = mmcb::pattern_summary(book, n_h, n_v);
  std::fprintf(stderr,
               "pattern: %s mean gain theta %.4f (min %.4f), "
               "psi %.4f (min %.4f)\n",
               book.label.c_str(), s.mean_gain_theta, s.min_gain_theta,
               s.mean_gain_psi, s.min_gain_psi);
  return 0;
}

int run_simulate(const CommonArgs& args,
                 const std::vector<std::string>& codebook_paths) {
  const mmcb::ConfigDoc doc = mmcb::ConfigDoc::parse_file(args.config_path);
  mmcb::RunConfig rc = mmcb::load_run_config(doc, false, false);
  if (args.seed_set) rc.seed = args.seed;
  std::vector<mmcb::Codebook> books;
  for (const std::string& path : codebook_paths)
    books.push_back(mmcb::load_codebook(path));
  for (std::size_t i = 1; i < books.size(); ++i)
    if (books[i].upa.m_h != books[0].upa.m_h ||
        books[i].upa.m_v != books[0].upa.m_v) {
      std::fprintf(stderr, "simulate: codebook '%s' has a different array "
                           "geometry than '%s'\n",
                   codebook_paths[i].c_str(), codebook_paths[0].c_str());
      return kExitUpaMismatch;
    }
  mmcb::SimOptions sim;
  sim.tau_threshold = rc.sim.tau_threshold;
  sim.workers = args.workers;
  std::vector<mmcb::RateTable> tables;
  for (const mmcb::Codebook& book : books) {
    tables.push_back(mmcb::evaluate_rate(book, rc.scenario, rc.sim.snr_db,
                                         rc.sim.n_realizations, rc.seed, sim));
    std::fprintf(stderr, "simulate: %s done (%d realizations, %zu SNR points)\n",
                 book.label.c_str(), rc.sim.n_realizations, rc.sim.snr_db.size());
  }
  std::ostringstream os;
  mmcb::write_rate_csv(os, tables);
  write_or_print(args.out_path, os.str());
  return 0;
}

int run_compare(const CommonArgs& args, const std::string& path_a,
                const std::string& path_b) {
  const mmcb::ConfigDoc doc = mmcb::ConfigDoc::parse_file(args.config_path);
  mmcb::RunConfig rc = mmcb::load_run_config(doc, false, false);
  if (args.seed_set) rc.seed = args.seed;
  const mmcb::Codebook a = mmcb::load_codebook(path_a);
  const mmcb::Codebook b = mmcb::load_codebook(path_b);
  if (a.upa.m_h != b.upa.m_h || a.upa.m_v != b.upa.m_v) {
    std::fprintf(stderr, "compare: codebooks use different array geometries\n");
    return kExitUpaMismatch;
  }
  mmcb::SimOptions sim;
  sim.tau_threshold = rc.sim.tau_threshold;
  sim.workers = args.workers;
  const std::vector<mmcb::PairedPoint> points = mmcb::paired_compare(
      a, b, rc.scenario, rc.sim.snr_db, rc.sim.n_realizations, rc.seed, sim);
  std::ostringstream os;
  mmcb::write_compare_csv(os, a.label, b.label, points);
  write_or_print(args.out_path, os.str());
  return 0;
}

int run_verify(const CommonArgs& args, double tol_scale) {
  mmcb::UpaConfig upa{12, 6, 4, 6, 0.5};
  mmcb::CodebookConfig cb;
  cb.q_h = 8;
  cb.q_v = 8;
  cb.l_h = 8;
  cb.l_v = 8;
  cb.i_phases = 3;
  if (!args.config_path.empty()) {
    const mmcb::ConfigDoc doc = mmcb::ConfigDoc::parse_file(args.config_path);
    const mmcb::RunConfig rc = mmcb::load_run_config(doc, true, true);
    upa = rc.upa;
    cb = rc.codebook;
  }
  mmcb::VerifyOptions opts;
  opts.tol_scale = tol_scale;
  opts.workers = args.workers;
  if (args.seed_set) opts.seed = args.seed;
  const std::vector<mmcb::VerifyCheck> checks = mmcb::run_verify_suite(upa, cb, opts);
  for (const mmcb::VerifyCheck& c : checks) {
    if (c.informational)
      std::fprintf(stderr, "INFO %s measured=%.6g %s\n", c.name.c_str(),
                   c.measured, c.note.c_str());
    else
      std::fprintf(stderr, "%s %s measured=%.6g tol=%.6g\n",
                   c.pass ? "PASS" : "FAIL", c.name.c_str(), c.measured,
                   c.tolerance);
  }
  write_or_print(args.out_path, mmcb::verify_report_json(checks));
  return mmcb::all_passed(checks) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mmWave hybrid-beamforming codebook toolkit"};
  app.require_subcommand(1);

  CommonArgs design_args, sim_args, cmp_args, verify_args;
  bool requantize_shift = false, resume = false;
  std::uint64_t stride_override = 1;
  bool stride_set = false;
  std::string baseline;
  std::string pattern_codebook, pattern_out;
  int grid_res = 180;
  std::vector<std::string> sim_codebooks;
  std::string cmp_a, cmp_b;
  double tol_scale = 1.0;

  CLI::App* design = app.add_subcommand(
      "design", "Build a codebook from a run configuration");
  design->add_option("--config", design_args.config_path, "Run configuration file")
      ->required();
  design->add_option("--out", design_args.out_path,
                     "Codebook output path (default <output_dir>/codebook.cbk)");
  design->add_option("--workers", design_args.workers, "Worker thread count");
  add_seed_option(design, design_args);
  design
      ->add_option_function<std::uint64_t>(
          "--stride",
          [&](std::uint64_t v) {
            stride_override = v;
            stride_set = true;
          },
          "Force a strided sweep with this stride")
      ->check(CLI::PositiveNumber);
  design->add_flag("--requantize-shift", requantize_shift,
                   "Re-round shifted analog phases onto the 2^B grid");
  design->add_flag("--resume", resume, "Continue from a design checkpoint");
  design->add_option("--baseline", baseline,
                     "Build a baseline instead: allones or kp-dft")
      ->check(CLI::IsMember({"allones", "kp-dft"}));

  CLI::App* pattern = app.add_subcommand(
      "pattern", "Evaluate best-beam gains over the departure-angle grid");
  pattern->add_option("codebook", pattern_codebook, "Codebook file")->required();
  pattern->add_option("--out", pattern_out, "CSV output path (default stdout)");
  pattern->add_option("--grid-res", grid_res,
                      "Azimuth grid size (elevation uses half)")
      ->check(CLI::PositiveNumber);

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Monte Carlo beam-alignment data-rate evaluation");
  simulate->add_option("--config", sim_args.config_path, "Run configuration file")
      ->required();
  simulate->add_option("--out", sim_args.out_path, "Rate CSV path (default stdout)");
  simulate->add_option("--workers", sim_args.workers, "Worker thread count");
  add_seed_option(simulate, sim_args);
  simulate->add_option("codebooks", sim_codebooks, "Codebook files")
      ->required()
      ->expected(-1);

  CLI::App* compare = app.add_subcommand(
      "compare", "Paired rate difference of two codebooks");
  compare->add_option("--config", cmp_args.config_path, "Run configuration file")
      ->required();
  compare->add_option("--out", cmp_args.out_path, "CSV output path (default stdout)");
  compare->add_option("--workers", cmp_args.workers, "Worker thread count");
  add_seed_option(compare, cmp_args);
  compare->add_option("codebook_a", cmp_a, "First codebook file")->required();
  compare->add_option("codebook_b", cmp_b, "Second codebook file")->required();

  CLI::App* verify = app.add_subcommand(
      "verify", "Run the numeric-identity suite and report residuals");
  verify->add_option("--config", verify_args.config_path,
                     "Optional run configuration file");
  verify->add_option("--out", verify_args.out_path,
                     "JSON report path (default stdout)");
  verify->add_option("--workers", verify_args.workers, "Worker thread count");
  verify->add_option("--tol-scale", tol_scale,
                     "Scale factor applied to every tolerance");
  add_seed_option(verify, verify_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (design->parsed())
      return run_design(design_args, requantize_shift, stride_set,
                        stride_override, resume, baseline);
    if (pattern->parsed())
      return run_pattern(pattern_codebook, pattern_out, grid_res);
    if (simulate->parsed()) return run_simulate(sim_args, sim_codebooks);
    if (compare->parsed()) return run_compare(cmp_args, cmp_a, cmp_b);
    if (verify->parsed()) return run_verify(verify_args, tol_scale);
  } catch (const mmcb::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.anchored().c_str());
    return kExitInvalidConfig;
  } catch (const mmcb::InfeasibleConfigError& e) {
    std::fprintf(stderr, "infeasible configuration: %s\n", e.what());
    return kExitInfeasible;
  } catch (const mmcb::CodebookIoError& e) {
    std::fprintf(stderr, "codebook file error: %s\n", e.what());
    return kExitCorruptCodebook;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid configuration: %s\n", e.what());
    return kExitInvalidConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
