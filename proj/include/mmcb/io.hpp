// SPDX-License-Identifier: Apache-2.0
//
// mmcodebook — hybrid beamforming codebook synthesis and evaluation for
// mmWave uniform planar arrays
// Copyright (C) 2026 mmcodebook contributors

#ifndef MMCB_IO_HPP
#define MMCB_IO_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmcb/codebook.hpp"
#include "mmcb/simulate.hpp"

namespace mmcb {

class CodebookIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// %.17g — shortest text form that round-trips a double bit-exactly.
std::string format_double(double value);

/// Structured-text codebook document: a meta block with every config field,
/// build flags, toolkit version and seed, then one block per entry listing
/// F (M x N, row-major re/im pairs), v, and c. Bit-stable round trip.
void write_codebook(std::ostream& os, const Codebook& cb);
void save_codebook(const std::string& path, const Codebook& cb);
Codebook read_codebook(std::istream& is);
Codebook load_codebook(const std::string& path);

void write_pattern_csv(std::ostream& os, const std::vector<PatternRow>& rows);
void write_rate_csv(std::ostream& os, const std::vector<RateTable>& tables);
void write_compare_csv(std::ostream& os, const std::string& label_a,
                       const std::string& label_b,
                       const std::vector<PairedPoint>& points);

std::string build_stats_json(const Codebook& cb);
std::string checkpoint_text(const SweepCheckpoint& ck);
bool read_checkpoint(const std::string& path, SweepCheckpoint& ck);
/// Writes atomically (temp file + rename).
void write_text_file(const std::string& path, const std::string& content);

}  // namespace mmcb

#endif  // MMCB_IO_HPP
