// SPDX-License-Identifier: Apache-2.0
//
// mmcodebook — hybrid beamforming codebook synthesis and evaluation for
// mmWave uniform planar arrays
// Copyright (C) 2026 mmcodebook contributors

#ifndef MMCB_VERIFY_HPP
#define MMCB_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mmcb/codebook.hpp"

namespace mmcb {

struct VerifyCheck {
  std::string name;
  bool pass = false;
  bool informational = false;  // measured and reported, never failing
  double measured = 0.0;
  double tolerance = 0.0;
  std::string note;
};

struct VerifyOptions {
  std::uint64_t seed = 20260101;
  double tol_scale = 1.0;  // scales every tolerance; < 1 tightens
  int workers = 1;
  int parseval_beamformers = 100;
  int parseval_grid = 512;
  int shift_identity_trials = 1000;
  int rayleigh_trials = 10000;
};

/// Runs the numeric-identity suite on the given configuration: full-period
/// beam-pattern energy, pattern translation under analog phase shifts,
/// expansion MSE invariance, closed-form vs power-iteration baseband solves,
/// dictionary Gram identities, and phase-quantizer idempotence.
std::vector<VerifyCheck> run_verify_suite(const UpaConfig& upa,
                                          const CodebookConfig& cb,
                                          const VerifyOptions& options = {});

bool all_passed(const std::vector<VerifyCheck>& checks);
std::string verify_report_json(const std::vector<VerifyCheck>& checks);

}  // namespace mmcb

#endif  // MMCB_VERIFY_HPP
