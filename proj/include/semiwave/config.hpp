#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "semiwave/inflation.hpp"

namespace semiwave {

/// Carries every violation found in one pass, not just the first.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations)
      : std::runtime_error(join(violations)), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "invalid configuration:";
    for (auto& m : v) s += "\n  - " + m;
    return s;
  }
  std::vector<std::string> violations_;
};

struct RunConfig {
  Equation equation = Equation::kdv;
  std::vector<int> carriers{8, 16, 32};
  int oversample = 16;
  Bump profile{0.0, 1.2, 1.0};
  Bump profile_y{0.0, 1.2, 1.0};
  int k1 = 1, k2 = 1, lambda = 1;
  double dt_factor = 0.1;
  double final_time = 0.0;  // 0: tau derived from the profile
  double beta = 2.0;
  double s1 = -1.5;
  double s2 = 0.0;
  std::vector<double> sigma_list{-1.5, -2.0, -3.0};
  double cap_K = 3.0;
  double delta = 0.5;
  std::string out_dir = "out";
  std::vector<std::string> formats{"csv", "json"};
  int snapshot_stride = 0;  // 0: no snapshots
};

namespace detail {

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

inline const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{
      "equation.type",
      "grid.carriers", "grid.oversample",
      "profile.center", "profile.half_width", "profile.amplitude",
      "profile_y.center", "profile_y.half_width", "profile_y.amplitude",
      "phase.k1", "phase.k2", "phase.lambda",
      "solver.dt_factor", "solver.final_time",
      "experiment.beta", "experiment.s1", "experiment.s2", "experiment.sigma_list",
      "experiment.K", "experiment.delta",
      "output.directory", "output.formats", "output.snapshot_stride",
  };
  return keys;
}

inline std::string suggest_key(const std::string& key) {
  std::size_t best = std::string::npos;
  std::string hit;
  for (auto& k : known_keys()) {
    const std::size_t d = edit_distance(key, k);
    if (d < best) {
      best = d;
      hit = k;
    }
  }
  return (best <= std::max<std::size_t>(3, key.size() / 3)) ? hit : std::string();
}

template <typename T>
inline bool parse_number(const std::string& s, T& out) {
  std::stringstream ss(s);
  ss >> out;
  return bool(ss) && ss.eof();
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::vector<std::string> errors;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;

  // profile bounds are validated here, not through Bump's constructor, so
  // every violation is reported in one pass
  double px[3] = {0.0, 1.2, 1.0}, py[3] = {0.0, 1.2, 1.0};

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back("line " + std::to_string(lineno) + ": unterminated section header");
        continue;
      }
      section = detail::trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    const std::string key = section + "." + detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    auto bad_value = [&] {
      errors.push_back("line " + std::to_string(lineno) + ": cannot parse value for " + key +
                       ": '" + value + "'");
    };

    if (key == "equation.type") {
      if (value == "kdv")
        cfg.equation = Equation::kdv;
      else if (value == "kp")
        cfg.equation = Equation::kp;
      else
        errors.push_back("line " + std::to_string(lineno) + ": equation.type must be kdv or kp");
    } else if (key == "grid.carriers") {
      cfg.carriers.clear();
      for (auto& item : detail::split_list(value)) {
        int n = 0;
        if (detail::parse_number(item, n))
          cfg.carriers.push_back(n);
        else
          bad_value();
      }
    } else if (key == "grid.oversample") {
      if (!detail::parse_number(value, cfg.oversample)) bad_value();
    } else if (key == "profile.center") {
      if (!detail::parse_number(value, px[0])) bad_value();
    } else if (key == "profile.half_width") {
      if (!detail::parse_number(value, px[1])) bad_value();
    } else if (key == "profile.amplitude") {
      if (!detail::parse_number(value, px[2])) bad_value();
    } else if (key == "profile_y.center") {
      if (!detail::parse_number(value, py[0])) bad_value();
    } else if (key == "profile_y.half_width") {
      if (!detail::parse_number(value, py[1])) bad_value();
    } else if (key == "profile_y.amplitude") {
      if (!detail::parse_number(value, py[2])) bad_value();
    } else if (key == "phase.k1") {
      if (!detail::parse_number(value, cfg.k1)) bad_value();
    } else if (key == "phase.k2") {
      if (!detail::parse_number(value, cfg.k2)) bad_value();
    } else if (key == "phase.lambda") {
      if (!detail::parse_number(value, cfg.lambda)) bad_value();
    } else if (key == "solver.dt_factor") {
      if (!detail::parse_number(value, cfg.dt_factor)) bad_value();
    } else if (key == "solver.final_time") {
      if (!detail::parse_number(value, cfg.final_time)) bad_value();
    } else if (key == "experiment.beta") {
      if (!detail::parse_number(value, cfg.beta)) bad_value();
    } else if (key == "experiment.s1") {
      if (!detail::parse_number(value, cfg.s1)) bad_value();
    } else if (key == "experiment.s2") {
      if (!detail::parse_number(value, cfg.s2)) bad_value();
    } else if (key == "experiment.sigma_list") {
      cfg.sigma_list.clear();
      for (auto& item : detail::split_list(value)) {
        double s = 0.0;
        if (detail::parse_number(item, s))
          cfg.sigma_list.push_back(s);
        else
          bad_value();
      }
    } else if (key == "experiment.K") {
      if (!detail::parse_number(value, cfg.cap_K)) bad_value();
    } else if (key == "experiment.delta") {
      if (!detail::parse_number(value, cfg.delta)) bad_value();
    } else if (key == "output.directory") {
      cfg.out_dir = value;
    } else if (key == "output.formats") {
      cfg.formats = detail::split_list(value);
    } else if (key == "output.snapshot_stride") {
      if (!detail::parse_number(value, cfg.snapshot_stride)) bad_value();
    } else {
      std::string msg = "line " + std::to_string(lineno) + ": unknown key '" + key + "'";
      const std::string hint = detail::suggest_key(key);
      if (!hint.empty()) msg += "; did you mean '" + hint + "'?";
      errors.push_back(msg);
    }
  }

  // cross-field constraints
  auto check_bump = [&](const char* name, const double* p) {
    if (!(p[1] > 0.0 && p[1] < kPeriod / 4.0))
      errors.push_back(std::string(name) + ".half_width must lie in (0, pi/2)");
    if (!(p[2] > 0.0)) errors.push_back(std::string(name) + ".amplitude must be positive");
  };
  check_bump("profile", px);
  if (cfg.equation == Equation::kp) check_bump("profile_y", py);
  for (int n : cfg.carriers)
    if (n < 2) errors.push_back("grid.carriers entries must be >= 2");
  if (cfg.carriers.empty()) errors.push_back("grid.carriers must be non-empty");
  if (cfg.oversample < 8) errors.push_back("grid.oversample must be >= 8");
  if (!(cfg.dt_factor > 0.0)) errors.push_back("solver.dt_factor must be positive");
  if (!(cfg.beta > 0.0 && cfg.beta <= 2.0)) errors.push_back("experiment.beta must lie in (0, 2]");
  if (cfg.equation == Equation::kdv) {
    if (!(cfg.s1 < -1.0))
      errors.push_back("experiment.s1: s1 < -1 required (subcritical data index)");
  } else {
    if (!(cfg.s1 + 2.0 * cfg.s2 < -1.0))
      errors.push_back("experiment.s1/s2: s1 + 2*s2 < -1 required (subcritical data index)");
    if (cfg.lambda != 1 && cfg.lambda != -1) errors.push_back("phase.lambda must be +1 or -1");
    if (cfg.k1 == 0) errors.push_back("phase.k1 must be nonzero");
  }
  if (cfg.sigma_list.empty()) errors.push_back("experiment.sigma_list must be non-empty");
  if (!(cfg.delta > 0.0)) errors.push_back("experiment.delta must be positive");
  for (auto& f : cfg.formats)
    if (f != "csv" && f != "json")
      errors.push_back("output.formats entries must be csv or json, got '" + f + "'");

  if (!errors.empty()) throw ConfigError(std::move(errors));
  cfg.profile = Bump(px[0], px[1], px[2]);
  cfg.profile_y = Bump(py[0], py[1], py[2]);
  return cfg;
}

/// Normalized text form: fixed section order, every key present.
inline std::string serialize(const RunConfig& cfg) {
  std::ostringstream o;
  o.precision(17);
  auto list_d = [&](const std::vector<double>& v) {
    std::ostringstream s;
    s.precision(17);
    for (std::size_t i = 0; i < v.size(); ++i) s << (i ? ", " : "") << v[i];
    return s.str();
  };
  o << "[equation]\ntype = " << (cfg.equation == Equation::kdv ? "kdv" : "kp") << "\n\n";
  o << "[grid]\ncarriers = ";
  for (std::size_t i = 0; i < cfg.carriers.size(); ++i) o << (i ? ", " : "") << cfg.carriers[i];
  o << "\noversample = " << cfg.oversample << "\n\n";
  o << "[profile]\ncenter = " << cfg.profile.center << "\nhalf_width = " << cfg.profile.half_width
    << "\namplitude = " << cfg.profile.amplitude << "\n\n";
  if (cfg.equation == Equation::kp) {
    o << "[profile_y]\ncenter = " << cfg.profile_y.center
      << "\nhalf_width = " << cfg.profile_y.half_width
      << "\namplitude = " << cfg.profile_y.amplitude << "\n\n";
    o << "[phase]\nk1 = " << cfg.k1 << "\nk2 = " << cfg.k2 << "\nlambda = " << cfg.lambda
      << "\n\n";
  }
  o << "[solver]\ndt_factor = " << cfg.dt_factor << "\nfinal_time = " << cfg.final_time << "\n\n";
  o << "[experiment]\nbeta = " << cfg.beta << "\ns1 = " << cfg.s1 << "\ns2 = " << cfg.s2
    << "\nsigma_list = " << list_d(cfg.sigma_list) << "\nK = " << cfg.cap_K
    << "\ndelta = " << cfg.delta << "\n\n";
  o << "[output]\ndirectory = " << cfg.out_dir << "\nformats = ";
  for (std::size_t i = 0; i < cfg.formats.size(); ++i) o << (i ? ", " : "") << cfg.formats[i];
  o << "\nsnapshot_stride = " << cfg.snapshot_stride << "\n";
  return o.str();
}

/// FNV-1a over the normalized form: reports from different configs get
/// different hashes no matter how the input text was formatted. The output
/// directory is excluded so relocated runs still hash alike.
inline std::uint64_t config_hash(const RunConfig& cfg) {
  RunConfig c = cfg;
  c.out_dir = "out";
  const std::string s = serialize(c);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace semiwave
