#pragma once

// Strict flat key = value config files with one nesting level for the policy
// and solver blocks:
//
//   study = convergence
//   dim = 2
//   h_list = 1/10 1/14 1/20
//   temper = { kind = power, C = 1, k = 3 }
//   solver = { method = direct-cholesky, rel_tol = 1e-12 }
//
// Unknown keys are rejected.

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfem/solve.hpp"
#include "tfem/tempering.hpp"

namespace tfem {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Config {
 public:
  static Config parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str(), path);
  }

  static Config parse_string(const std::string& text, const std::string& origin = "<string>") {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    long ln = 0;
    while (std::getline(in, line)) {
      ++ln;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const std::string t = trim(line);
      if (t.empty()) continue;
      const auto eq = t.find('=');
      if (eq == std::string::npos)
        throw ConfigError(origin + ":" + std::to_string(ln) + ": expected key = value");
      const std::string key = trim(t.substr(0, eq));
      const std::string val = trim(t.substr(eq + 1));
      if (key.empty()) throw ConfigError(origin + ":" + std::to_string(ln) + ": empty key");
      if (!val.empty() && val.front() == '{') {
        if (val.back() != '}')
          throw ConfigError(origin + ":" + std::to_string(ln) + ": unterminated block");
        const std::string body = val.substr(1, val.size() - 2);
        std::istringstream bs(body);
        std::string item;
        while (std::getline(bs, item, ',')) {
          const auto beq = item.find('=');
          if (beq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(ln) + ": expected key = value in block");
          cfg.values_[key + "." + trim(item.substr(0, beq))] = trim(item.substr(beq + 1));
        }
      } else {
        cfg.values_[key] = val;
      }
    }
    return cfg;
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get_string(const std::string& key) const {
    mark(key);
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing config key: " + key);
    return it->second;
  }
  std::string get_string(const std::string& key, const std::string& dflt) const {
    mark(key);
    const auto it = values_.find(key);
    return it == values_.end() ? dflt : it->second;
  }
  double get_double(const std::string& key) const { return to_double(key, get_string(key)); }
  double get_double(const std::string& key, double dflt) const {
    mark(key);
    const auto it = values_.find(key);
    return it == values_.end() ? dflt : to_double(key, it->second);
  }
  int get_int(const std::string& key, int dflt) const {
    return int(std::lround(get_double(key, double(dflt))));
  }
  bool get_bool(const std::string& key, bool dflt) const {
    mark(key);
    const auto it = values_.find(key);
    if (it == values_.end()) return dflt;
    if (it->second == "on" || it->second == "true" || it->second == "1") return true;
    if (it->second == "off" || it->second == "false" || it->second == "0") return false;
    throw ConfigError("bad boolean for " + key + ": " + it->second);
  }

  // Values like "1/20 0.05 1e-3", fractions allowed.
  std::vector<double> get_list(const std::string& key) const {
    std::istringstream is(get_string(key));
    std::vector<double> out;
    std::string tok;
    while (is >> tok) out.push_back(to_double(key, tok));
    if (out.empty()) throw ConfigError("empty list for key: " + key);
    return out;
  }
  std::vector<double> get_list(const std::string& key, const std::vector<double>& dflt) const {
    mark(key);
    return has(key) ? get_list(key) : dflt;
  }

  TemperPolicy get_policy(int dim) const {
    for (const char* k : {"temper.kind", "temper.C", "temper.k", "temper.Jmin", "temper.order",
                          "temper.w1", "temper.w2"})
      mark(k);
    const auto it = values_.find("temper.kind");
    if (it == values_.end()) return default_policy(dim);
    const std::string kind = it->second;
    if (kind == "power")
      return PowerLawPolicy{get_double("temper.C", 1.0), get_double("temper.k", double(dim + 1))};
    if (kind == "fixed") return FixedPolicy{get_double("temper.Jmin")};
    if (kind == "theoretical-opt")
      return TheoreticalOptPolicy{get_double("temper.w1", 1.0), get_double("temper.w2", 1.0)};
    if (kind == "high-order")
      return HighOrderPolicy{get_double("temper.C", 1.0), get_int("temper.order", 1)};
    throw ConfigError("unknown temper.kind: " + kind);
  }

  SolverConfig get_solver() const {
    SolverConfig sc;
    for (const char* k : {"solver.method", "solver.rel_tol", "solver.max_iter"}) mark(k);
    if (has("solver.method")) sc.method = solver_method_from_string(values_.at("solver.method"));
    sc.rel_tol = get_double("solver.rel_tol", sc.rel_tol);
    sc.max_iter = get_int("solver.max_iter", sc.max_iter);
    return sc;
  }

  // Strictness: every key must have been consumed by one of the getters.
  void reject_unknown_keys() const {
    for (const auto& [k, v] : values_)
      if (!consumed_.count(k)) throw ConfigError("unknown config key: " + k);
  }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }
  static double to_double(const std::string& key, const std::string& s) {
    const auto slash = s.find('/');
    try {
      if (slash != std::string::npos) {
        const double num = std::stod(s.substr(0, slash));
        const double den = std::stod(s.substr(slash + 1));
        if (den == 0.0) throw ConfigError("division by zero in " + key);
        return num / den;
      }
      std::size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const ConfigError&) {
      throw;
    } catch (...) {
      throw ConfigError("bad numeric value for " + key + ": '" + s + "'");
    }
  }
  void mark(const std::string& key) const { consumed_.insert(key); }

  std::map<std::string, std::string> values_;
  mutable std::set<std::string> consumed_;
};

}  // namespace tfem
