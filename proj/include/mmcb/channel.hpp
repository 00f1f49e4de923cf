// SPDX-License-Identifier: Apache-2.0
//
// mmcodebook — hybrid beamforming codebook synthesis and evaluation for
// mmWave uniform planar arrays
// Copyright (C) 2026 mmcodebook contributors

#ifndef MMCB_CHANNEL_HPP
#define MMCB_CHANNEL_HPP

#include <cstdint>
#include <vector>

#include "mmcb/upa.hpp"

namespace mmcb {

/// Deterministic counter-based random substream: every (master seed,
/// realization, purpose) triple yields an independent stream whose draws do
/// not depend on scheduling or worker count. Gaussians use Box-Muller, so
/// the sequence is identical across platforms.
class SubStream {
 public:
  SubStream(std::uint64_t master_seed, std::uint64_t realization,
            std::uint64_t purpose);

  double uniform();                  // [0, 1)
  double uniform(double lo, double hi);
  double normal();                   // N(0, 1)
  Complex cnormal();                 // CN(0, 1)

 private:
  std::uint64_t next();
  std::uint64_t state_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

/// Ricean channel scenario: LOS plus n_nlos scattered paths with the given
/// K-factor, departure angles uniform over the sector. With los_present
/// false the LOS term is dropped and the scattered paths carry all the power
/// (K is ignored). normalize_to_m rescales every realization to ||h||^2 = M.
struct ChannelScenario {
  double k_factor_db = 13.5;
  int n_nlos = 3;
  bool los_present = true;
  bool normalize_to_m = true;

  void validate() const;
  double k_linear() const;
};

struct PathComponent {
  Complex gain{0.0, 0.0};
  AngleOfDeparture aod;
  Direction dir;
};

struct ChannelRealization {
  CVector h;
  bool has_los = false;
  PathComponent los;
  std::vector<PathComponent> nlos;
};

ChannelRealization generate_channel(const ChannelScenario& scenario,
                                    const UpaConfig& cfg, SubStream& rng);

}  // namespace mmcb

#endif  // MMCB_CHANNEL_HPP
