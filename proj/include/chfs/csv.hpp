#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "simulation.hpp"

namespace chfs {

inline const char* diagnostics_csv_header() {
  return "step,t,mass,energy,h1_seminorm,h2_seminorm,linf,kappa,retries";
}

// Reals carry 17 significant digits so the decimal text round-trips to the
// exact binary value.
inline std::string format_diagnostics_csv(const std::vector<DiagnosticsRecord>& records) {
  std::string out = diagnostics_csv_header();
  out += '\n';
  char buf[256];
  for (const DiagnosticsRecord& r : records) {
    std::snprintf(buf, sizeof buf, "%ld,%.16e,%.16e,%.16e,%.16e,%.16e,%.16e,%.16e,%d\n", r.step,
                  r.t, r.mass, r.energy, r.h1_seminorm, r.h2_seminorm, r.linf, r.kappa, r.retries);
    out += buf;
  }
  return out;
}

inline void write_diagnostics_csv(const std::vector<DiagnosticsRecord>& records,
                                  const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_diagnostics_csv: cannot open '" + path + "'");
  out << format_diagnostics_csv(records);
  if (!out) throw std::runtime_error("write_diagnostics_csv: write failed for '" + path + "'");
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      out.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

inline double csv_real(const std::string& field, std::size_t line_no) {
  const char* s = field.c_str();
  char* end = nullptr;
  double v = std::strtod(s, &end);
  if (end == s || *end != '\0')
    throw std::runtime_error("read_diagnostics_csv: bad numeric field '" + field + "' on line " +
                             std::to_string(line_no));
  return v;
}

}  // namespace detail

inline std::vector<DiagnosticsRecord> parse_diagnostics_csv(const std::string& text,
                                                            const std::string& name = "<csv>") {
  std::istringstream stream(text);
  std::string line;
  if (!std::getline(stream, line) || line != diagnostics_csv_header())
    throw std::runtime_error("read_diagnostics_csv: bad header in " + name);
  std::vector<DiagnosticsRecord> records;
  std::size_t line_no = 1;
  while (std::getline(stream, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f = detail::split_csv_line(line);
    if (f.size() != 9)
      throw std::runtime_error("read_diagnostics_csv: expected 9 fields on line " +
                               std::to_string(line_no) + " of " + name);
    DiagnosticsRecord r;
    r.step = static_cast<long>(detail::csv_real(f[0], line_no));
    r.t = detail::csv_real(f[1], line_no);
    r.mass = detail::csv_real(f[2], line_no);
    r.energy = detail::csv_real(f[3], line_no);
    r.h1_seminorm = detail::csv_real(f[4], line_no);
    r.h2_seminorm = detail::csv_real(f[5], line_no);
    r.linf = detail::csv_real(f[6], line_no);
    r.kappa = detail::csv_real(f[7], line_no);
    r.retries = static_cast<int>(detail::csv_real(f[8], line_no));
    records.push_back(r);
  }
  return records;
}

inline std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_diagnostics_csv: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_diagnostics_csv(buf.str(), path);
}

}  // namespace chfs
