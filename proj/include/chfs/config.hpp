#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "initial_conditions.hpp"

namespace chfs {

struct SimConfig {
  int dim = 0;
  int n = 0;
  double length = 2.0 * 3.14159265358979323846;
  double epsilon = 0.0;
  double tau = 0.0;
  double t_final = 0.0;
  bool kappa_fixed = false;  // kappa_mode: fixed | adaptive
  double kappa = 0.0;        // fixed value, or the adaptive floor
  double safety = 1.1;
  InitialCondition ic = spinodal_ic(0.05);
  std::uint64_t seed = 0;
  int diag_every = 1;
  int snapshot_every = 0;
  bool dealias = false;
  bool zero_mean = true;
  std::string out_dir = ".";
};

/// Number of steps from t=0 to t_final (validated to be integral).
inline long step_count(const SimConfig& cfg) {
  return std::lround(cfg.t_final / cfg.tau);
}

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] inline void config_fail(const std::string& name, int line, const std::string& msg) {
  std::ostringstream os;
  os << name << ":" << line << ": " << msg;
  throw config_error(os.str());
}

inline double parse_real(const std::string& name, int line, const std::string& key,
                         const std::string& value) {
  const char* s = value.c_str();
  char* end = nullptr;
  double v = std::strtod(s, &end);
  if (end == s || *end != '\0' || !std::isfinite(v))
    config_fail(name, line, key + " must be a finite real, got '" + value + "'");
  return v;
}

inline long long parse_int(const std::string& name, int line, const std::string& key,
                           const std::string& value) {
  const char* s = value.c_str();
  char* end = nullptr;
  long long v = std::strtoll(s, &end, 10);
  if (end == s || *end != '\0')
    config_fail(name, line, key + " must be an integer, got '" + value + "'");
  return v;
}

inline bool parse_bool(const std::string& name, int line, const std::string& key,
                       const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  config_fail(name, line, key + " must be true or false, got '" + value + "'");
}

inline std::vector<std::string> split_args(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ',') {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

inline InitialCondition parse_ic(const std::string& name, int line, const std::string& value) {
  std::string head = value;
  std::vector<std::string> args;
  std::size_t open = value.find('(');
  if (open != std::string::npos) {
    if (value.back() != ')') config_fail(name, line, "ic: missing ')' in '" + value + "'");
    head = trim(value.substr(0, open));
    args = split_args(value.substr(open + 1, value.size() - open - 2));
    if (args.size() == 1 && args[0].empty()) args.clear();
  }
  if (head == "constant") {
    if (args.size() != 1) config_fail(name, line, "ic: constant takes one argument (c)");
    return constant_ic(parse_real(name, line, "constant c", args[0]));
  }
  if (head == "single_mode") {
    if (args.size() != 2)
      config_fail(name, line, "ic: single_mode takes two arguments (k, amplitude)");
    long long k = parse_int(name, line, "single_mode k", args[0]);
    return single_mode_ic(static_cast<int>(k),
                          parse_real(name, line, "single_mode amplitude", args[1]));
  }
  if (head == "two_mode") {
    if (!args.empty()) config_fail(name, line, "ic: two_mode takes no arguments");
    return two_mode_ic();
  }
  if (head == "spinodal") {
    if (args.empty() || args.size() > 2)
      config_fail(name, line, "ic: spinodal takes (amplitude) or (amplitude, seed)");
    double amp = parse_real(name, line, "spinodal amplitude", args[0]);
    if (!(amp > 0.0 && amp <= 0.2))
      config_fail(name, line, "spinodal amplitude must lie in (0, 0.2]");
    if (args.size() == 2) {
      long long seed = parse_int(name, line, "spinodal seed", args[1]);
      if (seed < 0) config_fail(name, line, "spinodal seed must be nonnegative");
      return spinodal_ic(amp, static_cast<std::uint64_t>(seed));
    }
    return spinodal_ic(amp);
  }
  config_fail(name, line, "ic: unknown form '" + head + "'");
}

}  // namespace detail

/// Parse the line-oriented `key = value` config format. `name` labels error
/// messages (the file path when reading from disk). `#` starts a comment;
/// unknown and duplicate keys are rejected with their line number.
inline SimConfig parse_config_text(const std::string& text, const std::string& name = "<config>") {
  using detail::config_fail;
  SimConfig cfg;
  std::map<std::string, int> seen;
  std::istringstream stream(text);
  std::string raw;
  int line = 0;
  while (std::getline(stream, raw)) {
    ++line;
    std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::string s = detail::trim(raw);
    if (s.empty()) continue;
    std::size_t eq = s.find('=');
    if (eq == std::string::npos) config_fail(name, line, "expected 'key = value', got '" + s + "'");
    std::string key = detail::trim(s.substr(0, eq));
    std::string value = detail::trim(s.substr(eq + 1));
    if (key.empty()) config_fail(name, line, "empty key");
    if (value.empty()) config_fail(name, line, "empty value for key '" + key + "'");
    if (!seen.emplace(key, line).second) config_fail(name, line, "duplicate key '" + key + "'");

    if (key == "dim") {
      long long v = detail::parse_int(name, line, key, value);
      if (v < 1 || v > 3) config_fail(name, line, "dim must be 1, 2 or 3");
      cfg.dim = static_cast<int>(v);
    } else if (key == "N") {
      long long v = detail::parse_int(name, line, key, value);
      if (v % 2 != 0) config_fail(name, line, "N must be even");
      if (v < 4) config_fail(name, line, "N must be >= 4");
      cfg.n = static_cast<int>(v);
    } else if (key == "L") {
      double v = detail::parse_real(name, line, key, value);
      if (!(v > 0.0)) config_fail(name, line, "L must be > 0");
      cfg.length = v;
    } else if (key == "epsilon") {
      double v = detail::parse_real(name, line, key, value);
      if (!(v > 0.0)) config_fail(name, line, "epsilon must be > 0");
      cfg.epsilon = v;
    } else if (key == "tau") {
      double v = detail::parse_real(name, line, key, value);
      if (!(v > 0.0)) config_fail(name, line, "tau must be > 0");
      cfg.tau = v;
    } else if (key == "t_final") {
      double v = detail::parse_real(name, line, key, value);
      if (!(v > 0.0)) config_fail(name, line, "t_final must be > 0");
      cfg.t_final = v;
    } else if (key == "kappa_mode") {
      if (value == "fixed")
        cfg.kappa_fixed = true;
      else if (value == "adaptive")
        cfg.kappa_fixed = false;
      else
        config_fail(name, line, "kappa_mode must be fixed or adaptive");
    } else if (key == "kappa") {
      double v = detail::parse_real(name, line, key, value);
      if (!(v >= 0.0)) config_fail(name, line, "kappa must be >= 0");
      cfg.kappa = v;
    } else if (key == "safety") {
      double v = detail::parse_real(name, line, key, value);
      if (!(v >= 1.0)) config_fail(name, line, "safety must be >= 1");
      cfg.safety = v;
    } else if (key == "ic") {
      cfg.ic = detail::parse_ic(name, line, value);
    } else if (key == "seed") {
      long long v = detail::parse_int(name, line, key, value);
      if (v < 0) config_fail(name, line, "seed must be nonnegative");
      cfg.seed = static_cast<std::uint64_t>(v);
    } else if (key == "diag_every") {
      long long v = detail::parse_int(name, line, key, value);
      if (v < 1) config_fail(name, line, "diag_every must be >= 1");
      cfg.diag_every = static_cast<int>(v);
    } else if (key == "snapshot_every") {
      long long v = detail::parse_int(name, line, key, value);
      if (v < 0) config_fail(name, line, "snapshot_every must be >= 0");
      cfg.snapshot_every = static_cast<int>(v);
    } else if (key == "dealias") {
      cfg.dealias = detail::parse_bool(name, line, key, value);
    } else if (key == "zero_mean") {
      cfg.zero_mean = detail::parse_bool(name, line, key, value);
    } else if (key == "out_dir") {
      cfg.out_dir = value;
    } else {
      config_fail(name, line, "unknown key '" + key + "'");
    }
  }

  const char* required[] = {"dim", "N", "epsilon", "tau", "t_final"};
  for (const char* key : required)
    if (seen.find(key) == seen.end())
      throw config_error(name + ": missing required key '" + std::string(key) + "'");

  double steps = cfg.t_final / cfg.tau;
  double rounded = std::round(steps);
  if (rounded < 0.5 || std::abs(steps - rounded) > 1e-9 * std::max(1.0, steps))
    throw config_error(name + ": t_final must be an integer multiple of tau");
  return cfg;
}

inline SimConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

inline std::string format_initial_condition(const InitialCondition& ic) {
  char buf[128];
  switch (ic.kind) {
    case InitialCondition::Kind::constant:
      std::snprintf(buf, sizeof buf, "constant(%.17g)", ic.value);
      return buf;
    case InitialCondition::Kind::single_mode:
      std::snprintf(buf, sizeof buf, "single_mode(%d, %.17g)", ic.mode, ic.value);
      return buf;
    case InitialCondition::Kind::two_mode:
      return "two_mode";
    case InitialCondition::Kind::spinodal:
      if (ic.seed_explicit) {
        std::snprintf(buf, sizeof buf, "spinodal(%.17g, %llu)", ic.value,
                      static_cast<unsigned long long>(ic.seed));
      } else {
        std::snprintf(buf, sizeof buf, "spinodal(%.17g)", ic.value);
      }
      return buf;
  }
  return "?";
}

/// Canonical one-line rendering, recorded with every trace so runs are
/// attributable to their exact configuration.
inline std::string config_fingerprint(const SimConfig& cfg) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "dim=%d N=%d L=%.17g epsilon=%.17g tau=%.17g t_final=%.17g "
                "kappa_mode=%s kappa=%.17g safety=%.17g ic=%s seed=%llu "
                "diag_every=%d snapshot_every=%d dealias=%s zero_mean=%s",
                cfg.dim, cfg.n, cfg.length, cfg.epsilon, cfg.tau, cfg.t_final,
                cfg.kappa_fixed ? "fixed" : "adaptive", cfg.kappa, cfg.safety,
                format_initial_condition(cfg.ic).c_str(),
                static_cast<unsigned long long>(cfg.seed), cfg.diag_every, cfg.snapshot_every,
                cfg.dealias ? "true" : "false", cfg.zero_mean ? "true" : "false");
  return buf;
}

}  // namespace chfs
