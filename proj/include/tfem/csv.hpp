#pragma once

// Study CSV emission with full-precision decimals and a fixed column schema.

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfem/harness.hpp"

namespace tfem {

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline constexpr const char* kCsvHeader = "study,dim,order,h,hbar,C,k,Jmin,l2,h1_out,jump,ndof,seconds";

inline std::string csv_line(const StudyRow& r) {
  std::string s;
  s += r.study;
  s += ',' + std::to_string(r.dim);
  s += ',' + std::to_string(r.order);
  s += ',' + format_g17(r.h);
  s += ',' + format_g17(r.hbar);
  s += ',' + format_g17(r.C);
  s += ',' + format_g17(r.k);
  s += ',' + format_g17(r.Jmin);
  s += ',' + format_g17(r.l2);
  s += ',' + format_g17(r.h1_out);
  s += ',' + format_g17(r.jump);
  s += ',' + std::to_string(r.ndof);
  s += ',' + format_g17(r.seconds);
  return s;
}

inline void write_csv(const std::vector<StudyRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  out << kCsvHeader << '\n';
  for (const auto& r : rows) out << csv_line(r) << '\n';
  if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

}  // namespace tfem
