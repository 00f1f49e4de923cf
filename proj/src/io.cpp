// SPDX-License-Identifier: Apache-2.0
//
// mmcodebook — hybrid beamforming codebook synthesis and evaluation for
// mmWave uniform planar arrays
// Copyright (C) 2026 mmcodebook contributors

#include "mmcb/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace mmcb {

namespace {
constexpr const char* kFileHeader = "mmcb-codebook-v1";

#ifndef MMCB_VERSION
#define MMCB_VERSION "0.0.0"
#endif

std::string trim(const std::string& s) {
  const std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  const char* p = s.c_str();
  char* end = nullptr;
  for (;;) {
    const double v = std::strtod(p, &end);
    if (end == p) break;
    out.push_back(v);
    p = end;
  }
  return out;
}

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  std::istringstream is(s);
  int v;
  while (is >> v) out.push_back(v);
  return out;
}

void write_complex_row(std::ostream& os, const char* key, const CVector& v) {
  os << key << " =";
  for (Eigen::Index i = 0; i < v.size(); ++i)
    os << ' ' << format_double(v(i).real()) << ' ' << format_double(v(i).imag());
  os << '\n';
}

CVector complex_from_doubles(const std::vector<double>& d, const char* what) {
  if (d.size() % 2 != 0)
    throw CodebookIoError(std::string("codebook file: odd value count for ") + what);
  CVector v(static_cast<Eigen::Index>(d.size() / 2));
  for (std::size_t i = 0; i < d.size() / 2; ++i)
    v(static_cast<Eigen::Index>(i)) = Complex(d[2 * i], d[2 * i + 1]);
  return v;
}

class KeyValueBlock {
 public:
  void set(const std::string& key, const std::string& value) { map_[key] = value; }
  bool has(const std::string& key) const { return map_.count(key) != 0; }
  const std::string& get(const std::string& key) const {
    const auto it = map_.find(key);
    if (it == map_.end())
      throw CodebookIoError("codebook file: missing meta key '" + key + "'");
    return it->second;
  }
  double get_double(const std::string& key) const {
    return std::strtod(get(key).c_str(), nullptr);
  }
  long long get_int(const std::string& key) const {
    return std::strtoll(get(key).c_str(), nullptr, 10);
  }
  std::uint64_t get_u64(const std::string& key) const {
    return std::strtoull(get(key).c_str(), nullptr, 10);
  }

 private:
  std::map<std::string, std::string> map_;
};

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_codebook(std::ostream& os, const Codebook& cb) {
  os << kFileHeader << '\n';
  os << "[meta]\n";
  os << "label = " << cb.label << '\n';
  os << "toolkit_version = " << MMCB_VERSION << '\n';
  os << "m_h = " << cb.upa.m_h << '\n';
  os << "m_v = " << cb.upa.m_v << '\n';
  os << "n_rf = " << cb.upa.n_rf << '\n';
  os << "b_phase = " << cb.upa.b_phase << '\n';
  os << "spacing_over_lambda = " << format_double(cb.upa.spacing_over_lambda) << '\n';
  os << "q_h = " << cb.cb.q_h << '\n';
  os << "q_v = " << cb.cb.q_v << '\n';
  os << "gamma = " << format_double(cb.cb.gamma) << '\n';
  os << "l_h = " << cb.cb.l_h << '\n';
  os << "l_v = " << cb.cb.l_v << '\n';
  os << "i_phases = " << cb.cb.i_phases << '\n';
  os << "mse_grid_per_beam = " << cb.cb.mse_grid_per_beam << '\n';
  os << "quantize = " << (cb.quantize ? 1 : 0) << '\n';
  os << "requantize_shift = " << (cb.requantize_shift ? 1 : 0) << '\n';
  os << "seed = " << cb.seed << '\n';
  os << "sweep = ";
  switch (cb.sweep.mode) {
    case SweepSpec::Mode::kFull: os << "full"; break;
    case SweepSpec::Mode::kStrided: os << "strided"; break;
    case SweepSpec::Mode::kExplicit: os << "explicit"; break;
  }
  os << '\n';
  os << "stride = " << cb.sweep.stride << '\n';
  os << "sweep_indices =";
  for (std::uint64_t idx : cb.sweep.indices) os << ' ' << idx;
  os << '\n';
  os << "selected_gh =";
  for (int idx : cb.selected_gh) os << ' ' << idx;
  os << '\n';
  os << "selected_gv =";
  for (int idx : cb.selected_gv) os << ' ' << idx;
  os << '\n';
  os << "candidates_evaluated = " << cb.stats.candidates_evaluated << '\n';
  os << "best_candidate_index = " << cb.stats.best_candidate_index << '\n';
  os << "best_mse = " << format_double(cb.stats.best_mse) << '\n';
  os << "wall_seconds = " << format_double(cb.stats.wall_seconds) << '\n';
  os << "any_regularized = " << (cb.stats.any_regularized ? 1 : 0) << '\n';
  os << "mean_gain_theta = " << format_double(cb.stats.mean_gain_theta) << '\n';
  os << "min_gain_theta = " << format_double(cb.stats.min_gain_theta) << '\n';
  os << "mean_gain_psi = " << format_double(cb.stats.mean_gain_psi) << '\n';
  os << "min_gain_psi = " << format_double(cb.stats.min_gain_psi) << '\n';
  os << "requant_mse_delta_mean = " << format_double(cb.stats.requant_mse_delta_mean) << '\n';
  os << "requant_mse_delta_max = " << format_double(cb.stats.requant_mse_delta_max) << '\n';
  for (int q = 1; q <= cb.cb.q_h; ++q) {
    for (int p = 1; p <= cb.cb.q_v; ++p) {
      const Beamformer& e = cb.entry(q, p);
      os << "[entry " << q << ' ' << p << "]\n";
      os << "quantized = " << (e.quantized ? 1 : 0) << '\n';
      os << "regularized = " << (e.regularized ? 1 : 0) << '\n';
      os << "F =";
      for (Eigen::Index r = 0; r < e.analog.rows(); ++r)
        for (Eigen::Index c = 0; c < e.analog.cols(); ++c)
          os << ' ' << format_double(e.analog(r, c).real()) << ' '
             << format_double(e.analog(r, c).imag());
      os << '\n';
      write_complex_row(os, "v", e.baseband);
      write_complex_row(os, "c", e.composite);
    }
  }
}

void save_codebook(const std::string& path, const Codebook& cb) {
  std::ostringstream os;
  write_codebook(os, cb);
  write_text_file(path, os.str());
}

Codebook read_codebook(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || trim(line) != kFileHeader)
    throw CodebookIoError("codebook file: bad or missing header line");
  if (!std::getline(is, line) || trim(line) != "[meta]")
    throw CodebookIoError("codebook file: expected [meta] block");

  KeyValueBlock meta;
  struct EntryBlock {
    int q = 0, p = 0;
    KeyValueBlock kv;
  };
  std::vector<EntryBlock> entry_blocks;
  KeyValueBlock* current = &meta;
  while (std::getline(is, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      std::istringstream hs(t.substr(1, t.size() - 2));
      std::string kind;
      hs >> kind;
      if (kind != "entry")
        throw CodebookIoError("codebook file: unexpected block '" + t + "'");
      EntryBlock b;
      if (!(hs >> b.q >> b.p))
        throw CodebookIoError("codebook file: malformed entry header '" + t + "'");
      entry_blocks.push_back(std::move(b));
      current = &entry_blocks.back().kv;
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw CodebookIoError("codebook file: malformed line '" + t + "'");
    current->set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }

  Codebook cb;
  cb.label = meta.get("label");
  cb.upa.m_h = static_cast<int>(meta.get_int("m_h"));
  cb.upa.m_v = static_cast<int>(meta.get_int("m_v"));
  cb.upa.n_rf = static_cast<int>(meta.get_int("n_rf"));
  cb.upa.b_phase = static_cast<int>(meta.get_int("b_phase"));
  cb.upa.spacing_over_lambda = meta.get_double("spacing_over_lambda");
  cb.cb.q_h = static_cast<int>(meta.get_int("q_h"));
  cb.cb.q_v = static_cast<int>(meta.get_int("q_v"));
  cb.cb.gamma = meta.get_double("gamma");
  cb.cb.l_h = static_cast<int>(meta.get_int("l_h"));
  cb.cb.l_v = static_cast<int>(meta.get_int("l_v"));
  cb.cb.i_phases = static_cast<int>(meta.get_int("i_phases"));
  cb.cb.mse_grid_per_beam = static_cast<int>(meta.get_int("mse_grid_per_beam"));
  cb.quantize = meta.get_int("quantize") != 0;
  cb.requantize_shift = meta.get_int("requantize_shift") != 0;
  cb.seed = meta.get_u64("seed");
  const std::string sweep = meta.get("sweep");
  if (sweep == "full") cb.sweep.mode = SweepSpec::Mode::kFull;
  else if (sweep == "strided") cb.sweep.mode = SweepSpec::Mode::kStrided;
  else if (sweep == "explicit") cb.sweep.mode = SweepSpec::Mode::kExplicit;
  else throw CodebookIoError("codebook file: unknown sweep mode '" + sweep + "'");
  cb.sweep.stride = meta.get_u64("stride");
  for (double v : parse_doubles(meta.get("sweep_indices")))
    cb.sweep.indices.push_back(static_cast<std::uint64_t>(v));
  cb.selected_gh = parse_ints(meta.get("selected_gh"));
  cb.selected_gv = parse_ints(meta.get("selected_gv"));
  cb.stats.candidates_evaluated = meta.get_u64("candidates_evaluated");
  cb.stats.best_candidate_index = meta.get_u64("best_candidate_index");
  cb.stats.best_mse = meta.get_double("best_mse");
  cb.stats.wall_seconds = meta.get_double("wall_seconds");
  cb.stats.any_regularized = meta.get_int("any_regularized") != 0;
  cb.stats.mean_gain_theta = meta.get_double("mean_gain_theta");
  cb.stats.min_gain_theta = meta.get_double("min_gain_theta");
  cb.stats.mean_gain_psi = meta.get_double("mean_gain_psi");
  cb.stats.min_gain_psi = meta.get_double("min_gain_psi");
  cb.stats.requant_mse_delta_mean = meta.get_double("requant_mse_delta_mean");
  cb.stats.requant_mse_delta_max = meta.get_double("requant_mse_delta_max");

  try {
    cb.upa.validate();
    cb.cb.validate();
  } catch (const std::invalid_argument& e) {
    throw CodebookIoError(std::string("codebook file: invalid meta: ") + e.what());
  }
  const int expected = cb.cb.beams();
  if (static_cast<int>(entry_blocks.size()) != expected)
    throw CodebookIoError("codebook file: expected " + std::to_string(expected) +
                          " entries, found " + std::to_string(entry_blocks.size()));

  const int m = cb.upa.antennas();
  cb.entries.resize(static_cast<std::size_t>(expected));
  std::vector<bool> seen(static_cast<std::size_t>(expected), false);
  for (const auto& block : entry_blocks) {
    if (block.q < 1 || block.q > cb.cb.q_h || block.p < 1 || block.p > cb.cb.q_v)
      throw CodebookIoError("codebook file: entry index out of range");
    const std::size_t slot =
        static_cast<std::size_t>((block.q - 1) * cb.cb.q_v + (block.p - 1));
    if (seen[slot]) throw CodebookIoError("codebook file: duplicate entry block");
    seen[slot] = true;
    Beamformer e;
    e.quantized = block.kv.get_int("quantized") != 0;
    e.regularized = block.kv.get_int("regularized") != 0;
    const std::vector<double> fd = parse_doubles(block.kv.get("F"));
    const CVector vv = complex_from_doubles(parse_doubles(block.kv.get("v")), "v");
    const CVector cc = complex_from_doubles(parse_doubles(block.kv.get("c")), "c");
    const Eigen::Index n_rf = vv.size();
    if (n_rf < 1 || cc.size() != m ||
        fd.size() != 2 * static_cast<std::size_t>(m) * static_cast<std::size_t>(n_rf))
      throw CodebookIoError("codebook file: entry dimension mismatch");
    e.analog.resize(m, n_rf);
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < m; ++r)
      for (Eigen::Index c = 0; c < n_rf; ++c, k += 2)
        e.analog(r, c) = Complex(fd[k], fd[k + 1]);
    e.baseband = vv;
    e.composite = cc;
    cb.entries[slot] = std::move(e);
  }
  return cb;
}

Codebook load_codebook(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw CodebookIoError("cannot open codebook file: " + path);
  return read_codebook(is);
}

void write_pattern_csv(std::ostream& os, const std::vector<PatternRow>& rows) {
  os << "theta_h,theta_v,psi_h,psi_v,best_q,best_p,gain\n";
  for (const PatternRow& r : rows)
    os << format_double(r.theta_h) << ',' << format_double(r.theta_v) << ','
       << format_double(r.psi_h) << ',' << format_double(r.psi_v) << ','
       << r.best_q << ',' << r.best_p << ',' << format_double(r.gain) << '\n';
}

void write_rate_csv(std::ostream& os, const std::vector<RateTable>& tables) {
  os << "snr_db,codebook,mean_rate,stderr,misalign_rate,resound_rate,feedback_bits\n";
  for (const RateTable& t : tables)
    for (const RatePoint& p : t.points)
      os << format_double(p.snr_db) << ',' << t.codebook << ','
         << format_double(p.mean_rate) << ',' << format_double(p.stderr_mean)
         << ',' << format_double(p.misalign_rate) << ','
         << format_double(p.resound_rate) << ','
         << format_double(p.feedback_bits_mean) << '\n';
}

void write_compare_csv(std::ostream& os, const std::string& label_a,
                       const std::string& label_b,
                       const std::vector<PairedPoint>& points) {
  os << "snr_db,codebook_a,codebook_b,mean_rate_a,mean_rate_b,mean_diff,stderr_diff\n";
  for (const PairedPoint& p : points)
    os << format_double(p.snr_db) << ',' << label_a << ',' << label_b << ','
       << format_double(p.mean_rate_a) << ',' << format_double(p.mean_rate_b)
       << ',' << format_double(p.mean_diff) << ','
       << format_double(p.stderr_diff) << '\n';
}

std::string build_stats_json(const Codebook& cb) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"label\": \"" << cb.label << "\",\n";
  os << "  \"sweep\": \"" << cb.sweep.describe() << "\",\n";
  os << "  \"candidates_evaluated\": " << cb.stats.candidates_evaluated << ",\n";
  os << "  \"best_candidate_index\": " << cb.stats.best_candidate_index << ",\n";
  os << "  \"best_mse\": " << format_double(cb.stats.best_mse) << ",\n";
  os << "  \"wall_seconds\": " << format_double(cb.stats.wall_seconds) << ",\n";
  os << "  \"any_regularized\": " << (cb.stats.any_regularized ? "true" : "false") << ",\n";
  os << "  \"mean_gain_theta\": " << format_double(cb.stats.mean_gain_theta) << ",\n";
  os << "  \"min_gain_theta\": " << format_double(cb.stats.min_gain_theta) << ",\n";
  os << "  \"mean_gain_psi\": " << format_double(cb.stats.mean_gain_psi) << ",\n";
  os << "  \"min_gain_psi\": " << format_double(cb.stats.min_gain_psi) << ",\n";
  os << "  \"requant_mse_delta_mean\": " << format_double(cb.stats.requant_mse_delta_mean) << ",\n";
  os << "  \"requant_mse_delta_max\": " << format_double(cb.stats.requant_mse_delta_max) << "\n";
  os << "}\n";
  return os.str();
}

std::string checkpoint_text(const SweepCheckpoint& ck) {
  std::ostringstream os;
  os << "completed = " << ck.completed << '\n';
  os << "total = " << ck.total << '\n';
  os << "has_best = " << (ck.has_best ? 1 : 0) << '\n';
  os << "best_mse = " << format_double(ck.best_mse) << '\n';
  os << "best_candidate = " << ck.best_candidate << '\n';
  return os.str();
}

bool read_checkpoint(const std::string& path, SweepCheckpoint& ck) {
  std::ifstream is(path);
  if (!is) return false;
  KeyValueBlock kv;
  std::string line;
  while (std::getline(is, line)) {
    const std::string t = trim(line);
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) continue;
    kv.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  if (!kv.has("completed") || !kv.has("best_mse")) return false;
  ck.completed = kv.get_u64("completed");
  ck.total = kv.has("total") ? kv.get_u64("total") : 0;
  ck.has_best = kv.has("has_best") && kv.get_int("has_best") != 0;
  ck.best_mse = kv.get_double("best_mse");
  ck.best_candidate = kv.has("best_candidate") ? kv.get_u64("best_candidate") : 0;
  return true;
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write file: " + tmp);
    os << content;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot replace file: " + path);
}

}  // namespace mmcb
