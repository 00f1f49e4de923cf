// SPDX-License-Identifier: Apache-2.0
//
// mmcodebook — hybrid beamforming codebook synthesis and evaluation for
// mmWave uniform planar arrays
// Copyright (C) 2026 mmcodebook contributors

#include <doctest.h>

#include "mmcb/config.hpp"

using namespace mmcb;

namespace {
const char* kGoodConfig = R"(# test run
[upa]
m_h = 12
m_v = 6
n_rf = 4
b_phase = 6

[codebook]
q_h = 8
q_v = 8
gamma = 0.075
l_h = 8
l_v = 8
i_phases = 3

[scenario]
k_factor_db = 13.5
n_nlos = 3
los_present = true

[sweep]
mode = strided
stride = 729

[sim]
snr_db = 0 10 20
n_realizations = 2000
tau_threshold = 2

[run]
seed = 12345
output_dir = out
)";
}  // namespace

TEST_CASE("run configs parse with defaults applied") {
  const ConfigDoc doc = ConfigDoc::parse_string(kGoodConfig, "test.cfg");
  const RunConfig rc = load_run_config(doc, true, true);
  CHECK(rc.upa.m_h == 12);
  CHECK(rc.upa.spacing_over_lambda == 0.5);
  CHECK(rc.codebook.gamma == 0.075);
  CHECK(rc.codebook.mse_grid_per_beam == 20);  // default
  CHECK(rc.scenario.normalize_to_m);           // default
  CHECK(rc.sweep.mode == SweepSpec::Mode::kStrided);
  CHECK(rc.sweep.stride == 729);
  CHECK(rc.sim.snr_db == std::vector<double>{0.0, 10.0, 20.0});
  CHECK(rc.sim.n_realizations == 2000);
  CHECK(rc.seed == 12345);
  CHECK(rc.output_dir == "out");
}

TEST_CASE("missing required fields name the field") {
  std::string text = kGoodConfig;
  text.replace(text.find("l_h = 8\n"), 8, "");
  const ConfigDoc doc = ConfigDoc::parse_string(text, "test.cfg");
  try {
    (void)load_run_config(doc, true, true);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("codebook.l_h") != std::string::npos);
  }
}

TEST_CASE("malformed lines carry their line number") {
  try {
    (void)ConfigDoc::parse_string("[upa]\nm_h 12\n", "bad.cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
    CHECK(e.anchored().find("bad.cfg:2") != std::string::npos);
  }
  try {
    const ConfigDoc doc = ConfigDoc::parse_string("[upa]\nm_h = twelve\n", "bad.cfg");
    (void)doc.get_int("upa", "m_h");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("snr grids accept ranges and lists") {
  CHECK(parse_snr_grid("-10:5:25") ==
        std::vector<double>{-10, -5, 0, 5, 10, 15, 20, 25});
  CHECK(parse_snr_grid("0, 10, 20") == std::vector<double>{0, 10, 20});
  CHECK_THROWS_AS(parse_snr_grid("10:0:20"), std::invalid_argument);
  CHECK_THROWS_AS(parse_snr_grid(""), std::invalid_argument);
}

TEST_CASE("booleans parse strictly") {
  const ConfigDoc doc =
      ConfigDoc::parse_string("[scenario]\nlos_present = maybe\n", "b.cfg");
  CHECK_THROWS_AS(doc.get_bool("scenario", "los_present", true), ConfigError);
  const ConfigDoc ok =
      ConfigDoc::parse_string("[scenario]\nlos_present = off\n", "b.cfg");
  CHECK_FALSE(ok.get_bool("scenario", "los_present", true));
}

TEST_CASE("invalid block values are anchored config errors") {
  std::string text = kGoodConfig;
  text.replace(text.find("n_rf = 4"), 8, "n_rf = 0");
  const ConfigDoc doc = ConfigDoc::parse_string(text, "test.cfg");
  CHECK_THROWS_AS(load_run_config(doc, true, true), ConfigError);
}
