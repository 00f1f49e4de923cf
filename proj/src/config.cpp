// SPDX-License-Identifier: Apache-2.0
//
// mmcodebook — hybrid beamforming codebook synthesis and evaluation for
// mmWave uniform planar arrays
// Copyright (C) 2026 mmcodebook contributors

#include "mmcb/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace mmcb {

namespace {
std::string trim(const std::string& s) {
  const std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}
}  // namespace

ConfigDoc ConfigDoc::parse_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError(path, 0, "cannot open config file");
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_string(buf.str(), path);
}

ConfigDoc ConfigDoc::parse_string(const std::string& text,
                                  const std::string& path) {
  ConfigDoc doc;
  doc.path_ = path;
  std::istringstream is(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError(path, line_no, "malformed section header '" + t + "'");
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty())
        throw ConfigError(path, line_no, "empty section name");
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path, line_no, "expected 'key = value', got '" + t + "'");
    if (section.empty())
      throw ConfigError(path, line_no, "key outside of any [section]");
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw ConfigError(path, line_no, "empty key name");
    doc.sections_[section][key] = Entry{trim(t.substr(eq + 1)), line_no};
  }
  return doc;
}

bool ConfigDoc::has(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) != 0;
}

const ConfigDoc::Entry& ConfigDoc::require(const std::string& section,
                                           const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end() || s->second.count(key) == 0)
    throw ConfigError(path_, 0,
                      "missing required field '" + section + "." + key + "'");
  return s->second.at(key);
}

std::string ConfigDoc::get_string(const std::string& section,
                                  const std::string& key) const {
  return require(section, key).value;
}

std::string ConfigDoc::get_string(const std::string& section,
                                  const std::string& key,
                                  const std::string& fallback) const {
  return has(section, key) ? get_string(section, key) : fallback;
}

long long ConfigDoc::get_int(const std::string& section,
                             const std::string& key) const {
  const Entry& e = require(section, key);
  char* end = nullptr;
  const long long v = std::strtoll(e.value.c_str(), &end, 10);
  if (end == e.value.c_str() || trim(end)[0] != '\0')
    throw ConfigError(path_, e.line,
                      "field '" + section + "." + key + "' is not an integer");
  return v;
}

long long ConfigDoc::get_int(const std::string& section, const std::string& key,
                             long long fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

double ConfigDoc::get_double(const std::string& section,
                             const std::string& key) const {
  const Entry& e = require(section, key);
  char* end = nullptr;
  const double v = std::strtod(e.value.c_str(), &end);
  if (end == e.value.c_str() || trim(end)[0] != '\0')
    throw ConfigError(path_, e.line,
                      "field '" + section + "." + key + "' is not a number");
  return v;
}

double ConfigDoc::get_double(const std::string& section, const std::string& key,
                             double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

bool ConfigDoc::get_bool(const std::string& section, const std::string& key,
                         bool fallback) const {
  if (!has(section, key)) return fallback;
  const Entry& e = require(section, key);
  const std::string v = e.value;
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(path_, e.line,
                    "field '" + section + "." + key + "' is not a boolean");
}

std::uint64_t ConfigDoc::get_u64(const std::string& section,
                                 const std::string& key,
                                 std::uint64_t fallback) const {
  if (!has(section, key)) return fallback;
  const Entry& e = require(section, key);
  char* end = nullptr;
  const std::uint64_t v = std::strtoull(e.value.c_str(), &end, 10);
  if (end == e.value.c_str() || trim(end)[0] != '\0')
    throw ConfigError(path_, e.line,
                      "field '" + section + "." + key + "' is not an unsigned integer");
  return v;
}

int ConfigDoc::line_of(const std::string& section, const std::string& key) const {
  return require(section, key).line;
}

std::vector<double> parse_snr_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    double lo = 0, step = 0, hi = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(text);
    if (!(is >> lo >> c1 >> step >> c2 >> hi) || c1 != ':' || c2 != ':' ||
        step <= 0.0 || hi < lo)
      throw std::invalid_argument("bad SNR range '" + text + "', expected lo:step:hi");
    for (double v = lo; v <= hi + 1e-12; v += step) out.push_back(v);
    return out;
  }
  std::string t = text;
  for (char& ch : t)
    if (ch == ',') ch = ' ';
  std::istringstream is(t);
  double v;
  while (is >> v) out.push_back(v);
  if (out.empty())
    throw std::invalid_argument("empty SNR grid '" + text + "'");
  return out;
}

RunConfig load_run_config(const ConfigDoc& doc, bool need_upa,
                          bool need_codebook) {
  RunConfig rc;
  const auto wrap_invalid = [&](const std::string& section, const auto& fn) {
    try {
      fn();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(doc.path(), 0,
                        "invalid [" + section + "] block: " + e.what());
    }
  };

  if (need_upa || doc.has("upa", "m_h")) {
    rc.upa.m_h = static_cast<int>(doc.get_int("upa", "m_h"));
    rc.upa.m_v = static_cast<int>(doc.get_int("upa", "m_v"));
    rc.upa.n_rf = static_cast<int>(doc.get_int("upa", "n_rf"));
    rc.upa.b_phase = static_cast<int>(doc.get_int("upa", "b_phase"));
    rc.upa.spacing_over_lambda = doc.get_double("upa", "spacing_over_lambda", 0.5);
    wrap_invalid("upa", [&] { rc.upa.validate(); });
  }
  if (need_codebook || doc.has("codebook", "q_h")) {
    rc.codebook.q_h = static_cast<int>(doc.get_int("codebook", "q_h"));
    rc.codebook.q_v = static_cast<int>(doc.get_int("codebook", "q_v"));
    rc.codebook.gamma = doc.get_double("codebook", "gamma", 0.0);
    rc.codebook.l_h = static_cast<int>(doc.get_int("codebook", "l_h"));
    rc.codebook.l_v = static_cast<int>(doc.get_int("codebook", "l_v"));
    rc.codebook.i_phases = static_cast<int>(doc.get_int("codebook", "i_phases"));
    rc.codebook.mse_grid_per_beam =
        static_cast<int>(doc.get_int("codebook", "mse_grid_per_beam", 20));
    wrap_invalid("codebook", [&] { rc.codebook.validate(); });
  }

  rc.scenario.k_factor_db = doc.get_double("scenario", "k_factor_db", 13.5);
  rc.scenario.n_nlos = static_cast<int>(doc.get_int("scenario", "n_nlos", 3));
  rc.scenario.los_present = doc.get_bool("scenario", "los_present", true);
  rc.scenario.normalize_to_m = doc.get_bool("scenario", "normalize_to_m", true);
  wrap_invalid("scenario", [&] { rc.scenario.validate(); });

  const std::string mode = doc.get_string("sweep", "mode", "full");
  if (mode == "full") {
    rc.sweep.mode = SweepSpec::Mode::kFull;
  } else if (mode == "strided") {
    rc.sweep.mode = SweepSpec::Mode::kStrided;
    rc.sweep.stride = doc.get_u64("sweep", "stride", 1);
    if (rc.sweep.stride < 1)
      throw ConfigError(doc.path(), doc.line_of("sweep", "stride"),
                        "field 'sweep.stride' must be >= 1");
  } else if (mode == "explicit") {
    std::istringstream is(doc.get_string("sweep", "indices"));
    std::uint64_t idx;
    while (is >> idx) rc.sweep.indices.push_back(idx);
    rc.sweep.mode = SweepSpec::Mode::kExplicit;
    if (rc.sweep.indices.empty())
      throw ConfigError(doc.path(), doc.line_of("sweep", "indices"),
                        "field 'sweep.indices' is empty");
  } else {
    throw ConfigError(doc.path(), doc.line_of("sweep", "mode"),
                      "field 'sweep.mode' must be full, strided or explicit");
  }

  try {
    rc.sim.snr_db = parse_snr_grid(doc.get_string("sim", "snr_db", "-10:5:25"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(doc.path(), doc.line_of("sim", "snr_db"), e.what());
  }
  rc.sim.n_realizations =
      static_cast<int>(doc.get_int("sim", "n_realizations", 10000));
  if (rc.sim.n_realizations < 1)
    throw ConfigError(doc.path(), doc.line_of("sim", "n_realizations"),
                      "field 'sim.n_realizations' must be >= 1");
  rc.sim.tau_threshold = doc.get_double("sim", "tau_threshold", 2.0);
  if (rc.sim.tau_threshold < 1.0)
    throw ConfigError(doc.path(), doc.line_of("sim", "tau_threshold"),
                      "field 'sim.tau_threshold' must be >= 1");

  rc.seed = doc.get_u64("run", "seed", 0);
  rc.output_dir = doc.get_string("run", "output_dir", ".");
  return rc;
}

}  // namespace mmcb
