#ifndef BEXP_TOOLS_IO_HPP_
#define BEXP_TOOLS_IO_HPP_

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bexp/bexp.hpp"

namespace bexp::io {

namespace details {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(trim(cell));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

inline bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  try {
    std::size_t used = 0;
    out = std::stod(s, &used);
    return used == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

// "where: row r, column c: message"
inline ValidationError cell_error(const std::string& where, std::size_t row, std::size_t col,
                                  const std::string& msg) {
  return ValidationError(where + ": row " + std::to_string(row) + ", column " +
                         std::to_string(col) + ": " + msg);
}

struct Lines {
  std::vector<std::pair<std::size_t, std::string>> rows;  // 1-based line number, content
};

inline Lines nonblank_lines(const std::string& text) {
  Lines out;
  std::istringstream ss(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(ss, line)) {
    ++n;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    out.rows.emplace_back(n, t);
  }
  return out;
}

inline BinaryExperiment experiment_from_vectors(std::vector<double> p, std::vector<double> q,
                                                const std::string& where) {
  try {
    return BinaryExperiment(std::move(p), std::move(q));
  } catch (const ValidationError& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

inline std::vector<double> json_masses(const nlohmann::json& doc, const char* key,
                                       const std::string& where) {
  if (!doc.contains(key)) throw ValidationError(where + ": missing key '" + key + "'");
  const auto& arr = doc.at(key);
  if (!arr.is_array()) throw ValidationError(where + ": '" + key + "' must be an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) {
      throw ValidationError(where + ": " + key + "[" + std::to_string(i) + "] is not a number");
    }
    out.push_back(arr[i].get<double>());
  }
  return out;
}

}  // namespace details

/*
 * Experiment text: JSON {"p": [...], "q": [...]} or CSV with header "p,q".
 */
inline BinaryExperiment parse_experiment(const std::string& text,
                                         const std::string& where = "experiment") {
  const std::string t = details::trim(text);
  if (!t.empty() && t[0] == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(t);
    } catch (const nlohmann::json::parse_error& e) {
      // locate the byte offset as line and column
      std::size_t line = 1, col = 1;
      for (std::size_t i = 0; i + 1 < e.byte && i < t.size(); ++i) {
        if (t[i] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
      throw details::cell_error(where, line, col, "malformed JSON");
    }
    if (!doc.is_object()) throw ValidationError(where + ": expected a JSON object");
    return details::experiment_from_vectors(details::json_masses(doc, "p", where),
                                            details::json_masses(doc, "q", where), where);
  }
  const auto lines = details::nonblank_lines(text);
  if (lines.rows.empty()) throw ValidationError(where + ": empty experiment");
  const auto header = details::split(lines.rows[0].second);
  if (header.size() != 2 || header[0] != "p" || header[1] != "q") {
    throw details::cell_error(where, lines.rows[0].first, 1, "expected header 'p,q'");
  }
  std::vector<double> p, q;
  for (std::size_t k = 1; k < lines.rows.size(); ++k) {
    const auto& [row, content] = lines.rows[k];
    const auto cells = details::split(content);
    if (cells.size() != 2) {
      throw details::cell_error(where, row, std::min<std::size_t>(cells.size() + 1, 3),
                                "expected 2 columns, found " + std::to_string(cells.size()));
    }
    double a = 0.0, b = 0.0;
    if (!details::parse_number(cells[0], a)) {
      throw details::cell_error(where, row, 1, "not a number '" + cells[0] + "'");
    }
    if (!details::parse_number(cells[1], b)) {
      throw details::cell_error(where, row, 2, "not a number '" + cells[1] + "'");
    }
    p.push_back(a);
    q.push_back(b);
  }
  return details::experiment_from_vectors(std::move(p), std::move(q), where);
}

inline BinaryExperiment load_experiment(const std::string& path) {
  return parse_experiment(details::read_file(path), path);
}

/*
 * Loss weight text: rows "c,w" interpolated linearly (held constant beyond
 * the end nodes) and rows "atom,loc,mass". A header "c,w" is optional.
 */
inline WeightFunction parse_weight(const std::string& text, const std::string& where = "weight") {
  const auto lines = details::nonblank_lines(text);
  std::vector<std::pair<double, double>> nodes;
  std::vector<Atom> atoms;
  for (std::size_t k = 0; k < lines.rows.size(); ++k) {
    const auto& [row, content] = lines.rows[k];
    const auto cells = details::split(content);
    if (k == 0 && cells.size() == 2 && cells[0] == "c" && cells[1] == "w") continue;
    if (!cells.empty() && cells[0] == "atom") {
      if (cells.size() != 3) throw details::cell_error(where, row, 1, "atom rows need loc and mass");
      double loc = 0.0, mass = 0.0;
      if (!details::parse_number(cells[1], loc)) {
        throw details::cell_error(where, row, 2, "not a number '" + cells[1] + "'");
      }
      if (!details::parse_number(cells[2], mass)) {
        throw details::cell_error(where, row, 3, "not a number '" + cells[2] + "'");
      }
      if (!(loc > 0.0 && loc < 1.0)) throw details::cell_error(where, row, 2, "atom outside (0,1)");
      if (!(mass >= 0.0)) throw details::cell_error(where, row, 3, "negative atom mass");
      atoms.push_back({loc, mass});
      continue;
    }
    if (cells.size() != 2) throw details::cell_error(where, row, 1, "expected 'c,w'");
    double c = 0.0, w = 0.0;
    if (!details::parse_number(cells[0], c)) {
      throw details::cell_error(where, row, 1, "not a number '" + cells[0] + "'");
    }
    if (!details::parse_number(cells[1], w)) {
      throw details::cell_error(where, row, 2, "not a number '" + cells[1] + "'");
    }
    if (!(c >= 0.0 && c <= 1.0)) throw details::cell_error(where, row, 1, "c outside [0,1]");
    if (!(w >= 0.0)) throw details::cell_error(where, row, 2, "negative weight");
    if (!nodes.empty() && !(c > nodes.back().first)) {
      throw details::cell_error(where, row, 1, "c values must be strictly increasing");
    }
    nodes.emplace_back(c, w);
  }
  if (nodes.empty() && atoms.empty()) throw ValidationError(where + ": no weight data");
  if (nodes.empty()) return WeightFunction::atoms_only(std::move(atoms));
  auto table = std::make_shared<std::vector<std::pair<double, double>>>(std::move(nodes));
  auto smooth = [table](double c) {
    const auto& t = *table;
    if (c <= t.front().first) return t.front().second;
    if (c >= t.back().first) return t.back().second;
    const auto it = std::upper_bound(t.begin(), t.end(), c,
                                     [](double x, const auto& n) { return x < n.first; });
    const auto& [c1, w1] = *it;
    const auto& [c0, w0] = *(it - 1);
    return w0 + (w1 - w0) * (c - c0) / (c1 - c0);
  };
  std::vector<double> cuts;
  for (const auto& n : *table) {
    if (n.first > 0.0 && n.first < 1.0) cuts.push_back(n.first);
  }
  return WeightFunction(smooth, std::move(atoms), std::move(cuts));
}

inline WeightFunction load_weight(const std::string& path) {
  return parse_weight(details::read_file(path), path);
}

struct LabelledFeatures {
  std::vector<int> labels;
  Eigen::MatrixXd features;
};

/*
 * Sample text: rows "label,x1,...,xD" with label -1 or +1. A first row
 * whose label cell is not numeric is taken as a header.
 */
inline LabelledFeatures parse_sample(const std::string& text, const std::string& where = "sample") {
  const auto lines = details::nonblank_lines(text);
  std::vector<int> labels;
  std::vector<std::vector<double>> rows;
  std::size_t dim = 0;
  for (std::size_t k = 0; k < lines.rows.size(); ++k) {
    const auto& [row, content] = lines.rows[k];
    const auto cells = details::split(content);
    double label = 0.0;
    if (!details::parse_number(cells[0], label)) {
      if (k == 0) continue;
      throw details::cell_error(where, row, 1, "not a number '" + cells[0] + "'");
    }
    if (label != 1.0 && label != -1.0) throw details::cell_error(where, row, 1, "label must be -1 or +1");
    if (cells.size() < 2) throw details::cell_error(where, row, 2, "missing features");
    if (dim == 0) dim = cells.size() - 1;
    if (cells.size() - 1 != dim) {
      throw details::cell_error(where, row, std::min(cells.size(), dim + 1) + 1,
                                "expected " + std::to_string(dim) + " features");
    }
    std::vector<double> x(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      if (!details::parse_number(cells[j + 1], x[j])) {
        throw details::cell_error(where, row, j + 2, "not a number '" + cells[j + 1] + "'");
      }
    }
    labels.push_back(static_cast<int>(label));
    rows.push_back(std::move(x));
  }
  if (rows.empty()) throw ValidationError(where + ": empty sample");
  Eigen::MatrixXd feats(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      feats(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return {std::move(labels), std::move(feats)};
}

inline LabelledFeatures load_sample(const std::string& path) {
  return parse_sample(details::read_file(path), path);
}

}  // namespace bexp::io

#endif  // BEXP_TOOLS_IO_HPP_
