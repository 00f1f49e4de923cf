// SPDX-License-Identifier: Apache-2.0
//
// mmcodebook — hybrid beamforming codebook synthesis and evaluation for
// mmWave uniform planar arrays
// Copyright (C) 2026 mmcodebook contributors

#ifndef MMCB_CONFIG_HPP
#define MMCB_CONFIG_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmcb/channel.hpp"
#include "mmcb/codebook.hpp"

namespace mmcb {

/// Configuration problem with a source anchor (line 0 = whole file).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, int line, const std::string& message)
      : std::runtime_error(message), path_(std::move(path)), line_(line) {}
  const std::string& path() const { return path_; }
  int line() const { return line_; }
  std::string anchored() const {
    return path_ + ":" + std::to_string(line_) + ": " + what();
  }

 private:
  std::string path_;
  int line_;
};

/// Flat structured text: `[section]` headers and `key = value` lines,
/// `#` comments. Keys remember their source line for error anchoring.
class ConfigDoc {
 public:
  static ConfigDoc parse_file(const std::string& path);
  static ConfigDoc parse_string(const std::string& text,
                                const std::string& path = "<string>");

  bool has(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  long long get_int(const std::string& section, const std::string& key) const;
  long long get_int(const std::string& section, const std::string& key,
                    long long fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  bool get_bool(const std::string& section, const std::string& key,
                bool fallback) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t fallback) const;
  const std::string& path() const { return path_; }
  int line_of(const std::string& section, const std::string& key) const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::string path_;
  std::map<std::string, std::map<std::string, Entry>> sections_;
  const Entry& require(const std::string& section, const std::string& key) const;
};

struct SimParams {
  std::vector<double> snr_db;
  int n_realizations = 10000;
  double tau_threshold = 2.0;
};

/// Top-level run description: array + codebook + scenario blocks, sweep
/// policy, master seed and output directory.
struct RunConfig {
  UpaConfig upa;
  CodebookConfig codebook;
  ChannelScenario scenario;
  SweepSpec sweep;
  SimParams sim;
  std::uint64_t seed = 0;
  std::string output_dir = ".";
};

/// Assembles and validates a RunConfig. `need_upa`/`need_codebook` mark the
/// blocks whose fields are mandatory for the invoking command; other blocks
/// fall back to defaults.
RunConfig load_run_config(const ConfigDoc& doc, bool need_upa,
                          bool need_codebook);

/// Parses "lo:step:hi" or a whitespace-separated value list.
std::vector<double> parse_snr_grid(const std::string& text);

}  // namespace mmcb

#endif  // MMCB_CONFIG_HPP
