#pragma once

#include <chrono>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "integrator.hpp"
#include "rnd.hpp"

namespace hypkz {

inline constexpr const char* version_string = "hypkz 1.0.0";

enum class Verdict { PASS, FAIL, WARN };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::PASS: return "PASS";
    case Verdict::FAIL: return "FAIL";
    case Verdict::WARN: return "WARN";
  }
  return "?";
}

struct Record {
  std::string name;
  std::string anchor;
  double value = 0.0;
  double threshold = 0.0;
  Verdict verdict = Verdict::PASS;
  std::string detail;
};

// PASS iff value < threshold; NaN fails
inline Record below(std::string name, std::string anchor, double value, double threshold, std::string detail = {}) {
  Record r{std::move(name), std::move(anchor), value, threshold, Verdict::FAIL, std::move(detail)};
  if (value < threshold) r.verdict = Verdict::PASS;
  return r;
}

inline Record at_least(std::string name, std::string anchor, double value, double threshold, std::string detail = {}) {
  Record r{std::move(name), std::move(anchor), value, threshold, Verdict::FAIL, std::move(detail)};
  if (value >= threshold) r.verdict = Verdict::PASS;
  return r;
}

inline Record flag(std::string name, std::string anchor, bool ok, std::string detail = {}) {
  return {std::move(name), std::move(anchor), ok ? 1.0 : 0.0, 1.0, ok ? Verdict::PASS : Verdict::FAIL, std::move(detail)};
}

inline Record failed_with(std::string name, std::string anchor, const std::exception& e) {
  return {std::move(name), std::move(anchor), std::nan(""), 0.0, Verdict::FAIL, e.what()};
}

inline std::string quoted(const std::string& s) {
  std::string o = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') o += '\\';
    o += c == '\n' ? ' ' : c;
  }
  return o + "\"";
}

inline std::string fmt_double(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << std::scientific << v;
  return os.str();
}

inline std::string fmt_cplx(cplx v) {
  std::ostringstream os;
  os << std::setprecision(10) << '(' << v.real() << ',' << v.imag() << ')';
  return os.str();
}

struct Report {
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<Record> records;
  double wall_time = 0.0;

  void add(Record r) { records.push_back(std::move(r)); }
  void add(const std::vector<Record>& rs) { records.insert(records.end(), rs.begin(), rs.end()); }
  bool any_fail() const {
    for (auto& r : records)
      if (r.verdict == Verdict::FAIL) return true;
    return false;
  }

  // one record per line, config and metadata as comment-prefixed header lines
  std::string serialize() const {
    std::ostringstream os;
    os << "# version " << version_string << '\n';
    for (auto& [k, v] : config) os << "# config " << k << " = " << v << '\n';
    for (auto& r : records)
      os << "record name=" << r.name << " anchor=" << quoted(r.anchor) << " value=" << fmt_double(r.value)
         << " threshold=" << fmt_double(r.threshold) << " verdict=" << verdict_name(r.verdict)
         << " detail=" << quoted(r.detail) << '\n';
    os << "# wall_time " << std::fixed << std::setprecision(3) << wall_time << '\n';
    return os.str();
  }

  std::string summary_table() const {
    size_t w = 4;
    for (auto& r : records) w = std::max(w, r.name.size());
    std::ostringstream os;
    os << std::left << std::setw(int(w) + 2) << "check" << std::setw(15) << "value" << std::setw(15) << "threshold"
       << "verdict\n";
    for (auto& r : records)
      os << std::left << std::setw(int(w) + 2) << r.name << std::setw(15) << fmt_double(r.value) << std::setw(15)
         << fmt_double(r.threshold) << verdict_name(r.verdict) << '\n';
    int np = 0, nf = 0, nw = 0;
    for (auto& r : records) (r.verdict == Verdict::PASS ? np : r.verdict == Verdict::FAIL ? nf : nw)++;
    os << np << " pass, " << nf << " fail, " << nw << " warn; " << std::fixed << std::setprecision(2) << wall_time
       << " s\n";
    return os.str();
  }
};

// "(re,im)", "re", or a whitespace separated list of those
inline cplx parse_cplx(const std::string& s) {
  std::istringstream is(s);
  cplx v;
  if (!(is >> v)) throw Error(Err::ConfigError, "cannot parse complex number '" + s + "'");
  std::string rest;
  if (is >> rest) throw Error(Err::ConfigError, "trailing characters in '" + s + "'");
  return v;
}

inline CVec parse_cvec(const std::string& s) {
  std::istringstream is(s);
  CVec out;
  cplx v;
  while (is >> v) out.push_back(v);
  if (!is.eof()) throw Error(Err::ConfigError, "cannot parse complex list '" + s + "'");
  return out;
}

struct RunConfig {
  std::string command = "algebra-suite";
  ParamPoint point;
  bool point_given = false;
  int L = 1;
  bool L_given = false;
  QuadratureSpec quad;
  std::uint64_t seed = 20240101;
  std::string out;
  int m = -1;                    // qKZ shift index, 0-based; -1 checks every index
  std::string transform;         // empty: the command's default set
  int k = 1;                     // resonance for the residue command
  std::vector<std::pair<std::string, std::string>> echo() const {
    std::ostringstream z, l;
    for (auto v : point.z) z << fmt_cplx(v) << ' ';
    for (auto v : point.lambda) l << fmt_cplx(v) << ' ';
    return {{"command", command},
            {"z", z.str()},
            {"lambda", l.str()},
            {"p", fmt_cplx(point.p)},
            {"mu", fmt_cplx(point.mu)},
            {"L", std::to_string(L)},
            {"tol", fmt_double(quad.tol)},
            {"T", fmt_double(quad.T)},
            {"nodes", std::to_string(quad.nodes)},
            {"panel", fmt_double(quad.panel)},
            {"delta", fmt_double(quad.delta)},
            {"seed", std::to_string(seed)},
            {"m", m < 0 ? "all" : std::to_string(m + 1)},
            {"transform", transform},
            {"k", std::to_string(k)}};
  }
};

inline ParamTransform parse_transform(const std::string& s) {
  if (s == "id" || s == "idxid") return ParamTransform::identity(2);
  if (s == "12x12") return ParamTransform::swap12(true, true);
  if (s == "idx12") return ParamTransform::swap12(true, false);  // sigma' x sigma
  if (s == "12xid") return ParamTransform::swap12(false, true);
  throw Error(Err::ConfigError, "transform must be one of id, 12x12, idx12, 12xid");
}

inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

inline void apply_key(RunConfig& c, const std::string& key, const std::string& val) {
  auto as_int = [&](const std::string& v) {
    try {
      size_t pos;
      long x = std::stol(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("");
      return x;
    } catch (const std::exception&) {
      throw Error(Err::ConfigError, key + ": expected an integer, got '" + v + "'");
    }
  };
  auto as_double = [&](const std::string& v) {
    try {
      size_t pos;
      double x = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("");
      return x;
    } catch (const std::exception&) {
      throw Error(Err::ConfigError, key + ": expected a number, got '" + v + "'");
    }
  };
  if (key == "command") c.command = val;
  else if (key == "z") c.point.z = parse_cvec(val), c.point_given = true;
  else if (key == "lambda") c.point.lambda = parse_cvec(val), c.point_given = true;
  else if (key == "p") c.point.p = parse_cplx(val);
  else if (key == "mu") c.point.mu = parse_cplx(val);
  else if (key == "L") c.L = static_cast<int>(as_int(val)), c.L_given = true;
  else if (key == "tol") c.quad.tol = as_double(val);
  else if (key == "T") c.quad.T = as_double(val);
  else if (key == "nodes") c.quad.nodes = static_cast<int>(as_int(val));
  else if (key == "panel") c.quad.panel = as_double(val);
  else if (key == "delta") c.quad.delta = as_double(val);
  else if (key == "seed") c.seed = static_cast<std::uint64_t>(as_int(val));
  else if (key == "out") c.out = val;
  else if (key == "m") {
    c.m = static_cast<int>(as_int(val)) - 1;
    if (c.m < 0) throw Error(Err::ConfigError, "m must lie in 1..n");
  }
  else if (key == "transform") c.transform = val;
  else if (key == "k") c.k = static_cast<int>(as_int(val));
  else throw Error(Err::ConfigError, "unknown key '" + key + "'");
}

// key = value lines, '#' starts a comment
inline void read_config_file(RunConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Err::ConfigError, "cannot open config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto h = line.find('#');
    if (h != std::string::npos) line = line.substr(0, h);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(Err::ConfigError, path + ":" + std::to_string(lineno) + ": expected key = value");
    apply_key(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

inline void validate_config(const RunConfig& c) {
  c.point.validate();
  if (c.L < 0 || c.L > 6) throw Error(Err::ConfigError, "L must lie in 0..6");
  if (!(c.quad.tol > 0)) throw Error(Err::ConfigError, "tol must be positive");
  if (c.quad.nodes < 1 || c.quad.nodes > 64) throw Error(Err::ConfigError, "nodes must lie in 1..64");
  if (!(c.quad.panel > 0)) throw Error(Err::ConfigError, "panel must be positive");
  if (c.m != -1 && (c.m < 0 || c.m >= c.point.n())) throw Error(Err::ConfigError, "m must lie in 1..n");
}

}  // namespace hypkz
