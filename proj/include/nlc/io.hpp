#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nlc/boxes.hpp"
#include "nlc/errors.hpp"
#include "nlc/game.hpp"

#include <json.hpp>

namespace nlc {

/// Reads a game matrix from CSV: one row per line of comma-separated
/// reals; an optional non-numeric header line is skipped; '#' lines are
/// comments. Dimensions must be powers of two (at least 2).
inline GameMatrix load_game_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open game file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool header_allowed = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
        if (used != cell.size()) numeric = false;
      } catch (...) {
        numeric = false;
      }
      if (!numeric) break;
    }
    if (!numeric) {
      if (header_allowed) {
        header_allowed = false;
        continue;
      }
      throw parse_error(path + ":" + std::to_string(lineno) + ": non-numeric cell");
    }
    header_allowed = false;
    if (!rows.empty() && row.size() != rows.front().size())
      throw parse_error(path + ":" + std::to_string(lineno) + ": inconsistent column count");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw parse_error(path + ": no matrix rows");
  try {
    return GameMatrix::from_rows(rows);
  } catch (const std::invalid_argument& e) {
    throw parse_error(path + ": " + e.what());
  }
}

inline void save_game_csv(const GameMatrix& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot write game file: " + path);
  out.precision(17);
  for (std::size_t x = 0; x < g.rows(); ++x) {
    for (std::size_t y = 0; y < g.cols(); ++y) out << (y ? "," : "") << g(x, y);
    out << "\n";
  }
}

/// Box JSON: {"nx": .., "ny": .., "table": [[[[P(a,b|x,y)]]]]} indexed
/// x, y, a, b.
inline nlohmann::ordered_json box_to_json(const CorrelationBox& box) {
  nlohmann::ordered_json j;
  j["nx"] = box.nx();
  j["ny"] = box.ny();
  auto table = nlohmann::ordered_json::array();
  for (std::uint32_t x = 0; x < box.x_count(); ++x) {
    auto per_y = nlohmann::ordered_json::array();
    for (std::uint32_t y = 0; y < box.y_count(); ++y) {
      per_y.push_back({{box.prob(x, y, 0, 0), box.prob(x, y, 0, 1)},
                       {box.prob(x, y, 1, 0), box.prob(x, y, 1, 1)}});
    }
    table.push_back(std::move(per_y));
  }
  j["table"] = std::move(table);
  return j;
}

inline CorrelationBox box_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("nx") || !j.contains("ny") || !j.contains("table"))
    throw parse_error("box JSON needs nx, ny and table fields");
  const unsigned nx = j.at("nx").get<unsigned>();
  const unsigned ny = j.at("ny").get<unsigned>();
  CorrelationBox box(nx, ny);
  const auto& table = j.at("table");
  if (!table.is_array() || table.size() != box.x_count())
    throw parse_error("box JSON table must have 2^nx entries");
  for (std::uint32_t x = 0; x < box.x_count(); ++x) {
    const auto& per_y = table.at(x);
    if (!per_y.is_array() || per_y.size() != box.y_count())
      throw parse_error("box JSON table rows must have 2^ny entries");
    for (std::uint32_t y = 0; y < box.y_count(); ++y) {
      const auto& cell = per_y.at(y);
      if (!cell.is_array() || cell.size() != 2 || cell.at(0).size() != 2 ||
          cell.at(1).size() != 2)
        throw parse_error("box JSON cells must be 2x2 outcome tables");
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) box.prob(x, y, a, b) = cell.at(a).at(b).get<double>();
    }
  }
  try {
    box.validate();
  } catch (const std::invalid_argument& e) {
    throw parse_error(e.what());
  }
  return box;
}

inline CorrelationBox load_box_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open box file: " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw parse_error("invalid JSON in box file: " + path);
  return box_from_json(j);
}

inline void save_box_json(const CorrelationBox& box, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot write box file: " + path);
  out << box_to_json(box).dump(2) << "\n";
}

/// Protocol JSON: widths, per-party base tables, and a list of boxes with
/// their per-party wire tables.
inline nlohmann::ordered_json protocol_to_json(const BoxProtocol& p) {
  nlohmann::ordered_json j;
  j["description"] = p.description;
  j["nx"] = p.nx;
  j["ny"] = p.ny;
  j["alice_base"] = p.alice_base;
  j["bob_base"] = p.bob_base;
  auto boxes = nlohmann::ordered_json::array();
  for (const auto& w : p.boxes) {
    nlohmann::ordered_json e;
    e["box"] = box_to_json(w.box);
    e["alice_wire"] = w.alice_wire;
    e["bob_wire"] = w.bob_wire;
    boxes.push_back(std::move(e));
  }
  j["boxes"] = std::move(boxes);
  return j;
}

inline BoxProtocol load_protocol_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open protocol file: " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw parse_error("invalid JSON in protocol file: " + path);
  BoxProtocol p;
  try {
    p.description = j.value("description", std::string{});
    p.nx = j.at("nx").get<unsigned>();
    p.ny = j.at("ny").get<unsigned>();
    p.alice_base = j.at("alice_base").get<std::vector<std::uint8_t>>();
    p.bob_base = j.at("bob_base").get<std::vector<std::uint8_t>>();
    for (const auto& e : j.at("boxes")) {
      BoxWiring w{box_from_json(e.at("box")),
                  e.at("alice_wire").get<std::vector<std::uint32_t>>(),
                  e.at("bob_wire").get<std::vector<std::uint32_t>>()};
      p.boxes.push_back(std::move(w));
    }
    p.validate();
  } catch (const parse_error&) {
    throw;
  } catch (const std::exception& e) {
    throw parse_error("protocol file " + path + ": " + e.what());
  }
  return p;
}

inline void save_protocol_json(const BoxProtocol& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot write protocol file: " + path);
  out << protocol_to_json(p).dump(2) << "\n";
}

/// Bell inequality JSON: {"n": .., "C": [[..]], "K": ..}.
inline nlohmann::ordered_json bell_to_json(const BellInequality& bell) {
  nlohmann::ordered_json j;
  j["n"] = bell.n;
  auto rows = nlohmann::ordered_json::array();
  const std::size_t size = std::size_t{1} << bell.n;
  for (std::size_t x = 0; x < size; ++x) {
    auto row = nlohmann::ordered_json::array();
    for (std::size_t y = 0; y < size; ++y) row.push_back(bell.C[x * size + y]);
    rows.push_back(std::move(row));
  }
  j["C"] = std::move(rows);
  j["K"] = bell.K;
  return j;
}

inline BellInequality load_bell_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open Bell file: " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw parse_error("invalid JSON in Bell file: " + path);
  BellInequality bell;
  bell.n = j.at("n").get<unsigned>();
  const std::size_t size = std::size_t{1} << bell.n;
  bell.C.assign(size * size, 0.0);
  const auto& rows = j.at("C");
  if (!rows.is_array() || rows.size() != size)
    throw parse_error("Bell JSON C must have 2^n rows");
  for (std::size_t x = 0; x < size; ++x) {
    if (rows.at(x).size() != size) throw parse_error("Bell JSON C must be square");
    for (std::size_t y = 0; y < size; ++y) bell.C[x * size + y] = rows.at(x).at(y).get<double>();
  }
  bell.K = j.at("K").get<double>();
  return bell;
}

inline void save_bell_json(const BellInequality& bell, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot write Bell file: " + path);
  out << bell_to_json(bell).dump(2) << "\n";
}

}  // namespace nlc
