#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "riscov/errors.hpp"
#include "riscov/geometry.hpp"

namespace riscov {

inline constexpr const char* kToolVersion = "riscov 0.1.0";

/// Deterministic decimal formatting shared by every CSV emitter, so that
/// identical results are identical bytes.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out += ',';
      out += header[i];
    }
    out += '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        out += format_number(row[i]);
      }
      out += '\n';
    }
    return out;
  }

  static CsvTable from_string(const std::string& text) {
    CsvTable t;
    std::size_t pos = 0;
    bool first = true;
    while (pos < text.size()) {
      auto nl = text.find('\n', pos);
      if (nl == std::string::npos) nl = text.size();
      const std::string line = text.substr(pos, nl - pos);
      pos = nl + 1;
      if (line.empty()) continue;
      std::vector<std::string> cells;
      std::size_t c = 0;
      while (true) {
        auto comma = line.find(',', c);
        if (comma == std::string::npos) {
          cells.push_back(line.substr(c));
          break;
        }
        cells.push_back(line.substr(c, comma - c));
        c = comma + 1;
      }
      if (first) {
        t.header = cells;
        first = false;
      } else {
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& cell : cells) row.push_back(std::stod(cell));
        t.rows.push_back(std::move(row));
      }
    }
    return t;
  }
};

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open '" + path + "' for writing");
  out << content;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "' for reading");
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  return content;
}

/// Versioned scenario snapshot for replaying one spatial realization.
inline nlohmann::json deployment_to_json(const Deployment& dep) {
  nlohmann::json j;
  j["version"] = 1;
  j["cell_radius_m"] = dep.cell_radius;
  j["bs"] = {dep.bs.x, dep.bs.y};
  auto points = nlohmann::json::array();
  for (const auto& p : dep.ris_points) points.push_back({p.x, p.y});
  j["ris_points"] = points;
  auto users = nlohmann::json::array();
  for (const auto& p : dep.user_points) users.push_back({p.x, p.y});
  j["user_points"] = users;
  j["los_marks"] = dep.los_marks;
  return j;
}

inline Deployment deployment_from_json(const nlohmann::json& j) {
  if (!j.contains("version") || j["version"].get<int>() != 1)
    throw InvalidInput("deployment document: unsupported version");
  Deployment dep;
  dep.cell_radius = j.at("cell_radius_m").get<double>();
  dep.bs = {j.at("bs")[0].get<double>(), j.at("bs")[1].get<double>()};
  for (const auto& p : j.at("ris_points")) dep.ris_points.push_back({p[0], p[1]});
  for (const auto& p : j.at("user_points")) dep.user_points.push_back({p[0], p[1]});
  dep.los_marks = j.at("los_marks").get<std::vector<bool>>();
  if (dep.los_marks.size() != dep.ris_points.size())
    throw InvalidInput("deployment document: los_marks length mismatch");
  return dep;
}

}  // namespace riscov
