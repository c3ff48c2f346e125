#ifndef AFBM_REPORT_HPP
#define AFBM_REPORT_HPP

#include <array>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

// Experiment plumbing: flat key=value configs, machine-readable reports,
// and a deterministic replica-parallel loop.  Reports deliberately contain
// no timing or host information, so (config, seed) -> byte-identical JSON.
namespace afbm {

inline constexpr const char* kLibraryVersion = "0.1.0";

struct ExperimentConfig {
  std::map<std::string, std::string> kv;

  static ExperimentConfig from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const auto strip = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
      };
      if (strip(line).empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw std::runtime_error("config " + path + ": line " +
                                 std::to_string(lineno) + " is not key=value");
      }
      const std::string key = strip(line.substr(0, eq));
      if (key.empty()) {
        throw std::runtime_error("config " + path + ": empty key at line " +
                                 std::to_string(lineno));
      }
      cfg.kv[key] = strip(line.substr(eq + 1));
    }
    return cfg;
  }

  bool has(const std::string& key) const { return kv.count(key) > 0; }
  void set(const std::string& key, const std::string& value) {
    kv[key] = value;
  }

  std::string get_string(const std::string& key,
                         const std::string& fallback) const {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
  }
  double get_double(const std::string& key, double fallback) const {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) {
      throw std::runtime_error("config value " + key + "=" + it->second +
                               " is not a number");
    }
    return v;
  }
  long get_int(const std::string& key, long fallback) const {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    std::size_t used = 0;
    const long v = std::stol(it->second, &used);
    if (used != it->second.size()) {
      throw std::runtime_error("config value " + key + "=" + it->second +
                               " is not an integer");
    }
    return v;
  }
  std::vector<double> get_doubles(const std::string& key,
                                  const std::vector<double>& fallback) const {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    std::vector<double> out;
    std::stringstream ss(it->second);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
  }
};

struct CheckResult {
  std::string name;
  double estimate = 0.0;
  double std_error = 0.0;  // or residual, depending on the check
  double threshold = 0.0;
  bool pass = false;
};

// A sweep is a named list of (x, y, stderr) rows.
using SweepRows = std::vector<std::array<double, 3>>;

struct ExperimentReport {
  std::string command;
  ExperimentConfig config;
  std::vector<CheckResult> checks;
  std::map<std::string, SweepRows> sweeps;

  bool all_pass() const {
    for (const CheckResult& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }

  CheckResult& add_check(const std::string& name, double estimate,
                         double std_error, double threshold, bool pass) {
    checks.push_back({name, estimate, std_error, threshold, pass});
    return checks.back();
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["library_version"] = kLibraryVersion;
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto& [k, v] : config.kv) cfg[k] = v;
    j["config"] = cfg;
    j["checks"] = nlohmann::ordered_json::array();
    for (const CheckResult& c : checks) {
      j["checks"].push_back({{"name", c.name},
                             {"estimate", c.estimate},
                             {"std_error", c.std_error},
                             {"threshold", c.threshold},
                             {"pass", c.pass}});
    }
    nlohmann::ordered_json sw = nlohmann::ordered_json::object();
    for (const auto& [name, rows] : sweeps) {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const auto& row : rows) arr.push_back({row[0], row[1], row[2]});
      sw[name] = arr;
    }
    j["sweeps"] = sw;
    j["all_pass"] = all_pass();
    return j;
  }

  std::string dump() const { return to_json().dump(2) + "\n"; }

  void write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << dump();
  }

  static ExperimentReport read(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open report " + path);
    nlohmann::ordered_json j;
    in >> j;
    ExperimentReport rep;
    rep.command = j.at("command").get<std::string>();
    for (const auto& [k, v] : j.at("config").items()) {
      rep.config.kv[k] = v.get<std::string>();
    }
    for (const auto& c : j.at("checks")) {
      rep.checks.push_back({c.at("name").get<std::string>(),
                            c.at("estimate").get<double>(),
                            c.at("std_error").get<double>(),
                            c.at("threshold").get<double>(),
                            c.at("pass").get<bool>()});
    }
    for (const auto& [name, rows] : j.at("sweeps").items()) {
      SweepRows out_rows;
      for (const auto& row : rows) {
        out_rows.push_back({row.at(0).get<double>(), row.at(1).get<double>(),
                            row.at(2).get<double>()});
      }
      rep.sweeps[name] = std::move(out_rows);
    }
    return rep;
  }
};

// Tidy CSV for a sweep: columns x, y, stderr.
inline void write_sweep_csv(const SweepRows& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "x,y,stderr\n";
  char buf[128];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", row[0], row[1],
                  row[2]);
    out << buf;
  }
}

inline SweepRows read_sweep_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "x,y,stderr") {
    throw std::runtime_error("bad sweep CSV header in " + path);
  }
  SweepRows rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<double, 3> row{};
    std::stringstream ss(line);
    std::string tok;
    for (int c = 0; c < 3; ++c) {
      if (!std::getline(ss, tok, ',')) {
        throw std::runtime_error("short row in " + path);
      }
      row[c] = std::stod(tok);
    }
    rows.push_back(row);
  }
  return rows;
}

// Runs fn(r) for r in [0, replicas) across `workers` threads.  Results must
// be written into per-replica slots by the callback, so the merge order is
// deterministic regardless of scheduling.
template <typename Fn>
void parallel_for_replicas(long replicas, int workers, Fn&& fn) {
  if (workers <= 1) {
    for (long r = 0; r < replicas; ++r) fn(r);
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (long r = w; r < replicas; r += workers) fn(r);
    });
  }
  for (std::thread& th : pool) th.join();
}

}  // namespace afbm

#endif  // AFBM_REPORT_HPP
