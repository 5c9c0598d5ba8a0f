#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace semiwave {

/// One measured quantity at one eps. `sigma` is meaningful only for
/// Sobolev-indexed quantities; 0 otherwise.
struct ReportRow {
  double eps = 0.0;
  std::string quantity;
  double value = 0.0;
  std::string norm_kind;  // l2 | sobolev | aniso | semiclassical | none
  double sigma = 0.0;
  std::string status;     // ok | fail
};

struct Report {
  std::uint64_t config_hash = 0;
  std::vector<ReportRow> rows;
};

namespace detail {

// fixed 17-significant-digit form so identical runs emit identical bytes
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace detail

inline void write_csv(const Report& rep, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  out << "eps,quantity,value,norm_kind,sigma,status,config_hash\n";
  for (const auto& r : rep.rows)
    out << detail::fmt17(r.eps) << ',' << r.quantity << ',' << detail::fmt17(r.value) << ','
        << r.norm_kind << ',' << detail::fmt17(r.sigma) << ',' << r.status << ','
        << rep.config_hash << '\n';
}

inline void write_json(const Report& rep, const std::string& path) {
  nlohmann::json j;
  j["config_hash"] = rep.config_hash;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rep.rows)
    j["rows"].push_back({{"eps", detail::fmt17(r.eps)},
                         {"quantity", r.quantity},
                         {"value", detail::fmt17(r.value)},
                         {"norm_kind", r.norm_kind},
                         {"sigma", detail::fmt17(r.sigma)},
                         {"status", r.status}});
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_json: cannot open " + path);
  out << j.dump(2) << '\n';
}

inline Report read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_csv: cannot open " + path);
  Report rep;
  std::string line;
  if (!std::getline(in, line) ||
      line != "eps,quantity,value,norm_kind,sigma,status,config_hash")
    throw std::runtime_error("read_csv: bad header in " + path);
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ReportRow r;
    std::uint64_t hash = 0;
    std::size_t pos = 0;
    auto next = [&]() {
      const auto comma = line.find(',', pos);
      const std::string f = line.substr(pos, comma - pos);
      pos = (comma == std::string::npos) ? line.size() : comma + 1;
      return f;
    };
    r.eps = std::stod(next());
    r.quantity = next();
    r.value = std::stod(next());
    r.norm_kind = next();
    r.sigma = std::stod(next());
    r.status = next();
    hash = std::stoull(next());
    if (first) {
      rep.config_hash = hash;
      first = false;
    } else if (hash != rep.config_hash) {
      throw std::runtime_error("read_csv: mixed config hashes in " + path);
    }
    rep.rows.push_back(std::move(r));
  }
  return rep;
}

}  // namespace semiwave
