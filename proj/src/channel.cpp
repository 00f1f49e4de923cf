// SPDX-License-Identifier: Apache-2.0
//
// mmcodebook — hybrid beamforming codebook synthesis and evaluation for
// mmWave uniform planar arrays
// Copyright (C) 2026 mmcodebook contributors

#include "mmcb/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace mmcb {

namespace {
inline std::uint64_t splitmix_step(std::uint64_t& s) {
  s += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 33)) * 0xFF51AFD7ED558CCDULL;
  z = (z ^ (z >> 33)) * 0xC4CEB9FE1A85EC53ULL;
  return z ^ (z >> 33);
}
}  // namespace

SubStream::SubStream(std::uint64_t master_seed, std::uint64_t realization,
                     std::uint64_t purpose) {
  state_ = mix(master_seed ^ 0x2545F4914F6CDD1DULL);
  state_ = mix(state_ + 0x9E3779B97F4A7C15ULL * (realization + 1));
  state_ = mix(state_ + 0xD6E8FEB86659FD93ULL * (purpose + 1));
}

std::uint64_t SubStream::next() { return splitmix_step(state_); }

double SubStream::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SubStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double SubStream::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
  const double phi = 2.0 * kPi * u2;
  cached_ = r * std::sin(phi);
  has_cached_ = true;
  return r * std::cos(phi);
}

Complex SubStream::cnormal() {
  const double s = 1.0 / kSqrt2;
  const double re = normal();
  const double im = normal();
  return Complex(s * re, s * im);
}

void ChannelScenario::validate() const {
  if (n_nlos < 0)
    throw std::invalid_argument("scenario: n_nlos must be >= 0");
  if (!los_present && n_nlos == 0)
    throw std::invalid_argument("scenario: no propagation paths configured");
}

double ChannelScenario::k_linear() const {
  return std::pow(10.0, k_factor_db / 10.0);
}

ChannelRealization generate_channel(const ChannelScenario& scenario,
                                    const UpaConfig& cfg, SubStream& rng) {
  scenario.validate();
  cfg.validate();
  const int m = cfg.antennas();
  ChannelRealization out;
  out.h = CVector::Zero(m);

  const auto draw_path = [&]() {
    PathComponent p;
    p.aod.theta_h = rng.uniform(-kPi / 2.0, kPi / 2.0);
    p.aod.theta_v = rng.uniform(-kPi / 4.0, kPi / 4.0);
    p.gain = rng.cnormal();
    p.dir = direction_from_aod(p.aod, cfg.spacing_over_lambda);
    return p;
  };

  const double k = scenario.k_linear();
  if (scenario.los_present) {
    out.has_los = true;
    out.los = draw_path();
    const double los_scale = std::sqrt(m * k / (1.0 + k));
    out.h += los_scale * out.los.gain * planar_steering(cfg, out.los.dir);
  }
  if (scenario.n_nlos > 0) {
    const double r = static_cast<double>(scenario.n_nlos);
    // without a LOS path the scattered paths carry the whole power budget
    const double nlos_scale = scenario.los_present
                                  ? std::sqrt(m / (r * (1.0 + k)))
                                  : std::sqrt(m / r);
    out.nlos.reserve(static_cast<std::size_t>(scenario.n_nlos));
    for (int i = 0; i < scenario.n_nlos; ++i) {
      out.nlos.push_back(draw_path());
      out.h += nlos_scale * out.nlos.back().gain *
               planar_steering(cfg, out.nlos.back().dir);
    }
  }
  if (scenario.normalize_to_m) {
    const double norm = out.h.norm();
    if (norm < 1e-150)
      throw std::runtime_error("generate_channel: degenerate zero channel");
    out.h *= std::sqrt(static_cast<double>(m)) / norm;
  }
  return out;
}

}  // namespace mmcb
