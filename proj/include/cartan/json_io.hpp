#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cartan/classify.hpp"
#include "cartan/graphs.hpp"
#include "cartan/matrices.hpp"
#include "cartan/nat_matrix.hpp"
#include "cartan/permutations.hpp"

namespace cartan {

using json = nlohmann::ordered_json;

inline json matrix_to_json(const NatMatrix& a) {
  json rows = json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline NatMatrix matrix_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("matrix json: expected an array of rows");
  std::vector<std::vector<Entry>> rows;
  for (const auto& r : j) {
    if (!r.is_array()) throw ParseError("matrix json: expected an array of rows");
    std::vector<Entry> row;
    for (const auto& v : r) {
      if (!v.is_number_unsigned()) throw ParseError("matrix json: entries must be non-negative integers");
      row.push_back(v.get<Entry>());
    }
    rows.push_back(std::move(row));
  }
  try {
    return NatMatrix::from_rows(rows);
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  }
}

inline json spec_to_json(const MarginSpec& s) {
  return json{{"a", s.a()}, {"b", s.b()}, {"c", s.c()}, {"d", s.d()}};
}

/// {"canonical": [[...]], "spec": {"a":..,"b":..,"c":..,"d":..}}
inline json class_to_json(const CongruenceKey& key, const MarginSpec& spec) {
  return json{{"canonical", matrix_to_json(key.canonical)}, {"spec", spec_to_json(spec)}};
}

/// {"rows": R, "cols": C, "mult": [[...]]}
inline json graph_to_json(const BipartiteMultigraph& g) {
  return json{{"rows", g.row_count()}, {"cols", g.col_count()}, {"mult", matrix_to_json(g.multiplicity())}};
}

inline BipartiteMultigraph graph_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("mult"))
    throw ParseError("graph json: expected {\"rows\", \"cols\", \"mult\"}");
  auto m = matrix_from_json(j.at("mult"));
  if (m.rows() != j.at("rows").get<std::size_t>() || m.cols() != j.at("cols").get<std::size_t>())
    throw ParseError("graph json: \"mult\" shape disagrees with rows/cols");
  return BipartiteMultigraph(std::move(m));
}

inline json multigraph_to_json(const Multigraph& g) {
  json edges = json::array();
  for (auto [u, v] : g.edges()) edges.push_back(json::array({u, v}));
  return json{{"vertices", g.vertex_count()}, {"edges", std::move(edges)}};
}

inline json homeo_to_json(const HomeoType& h) {
  return json{{"circles", h.circle_count}, {"core", multigraph_to_json(h.core)}};
}

inline json params_to_json(const Params& p) { return json{{"m", p.m}, {"n", p.n}, {"o", p.o}}; }

inline json report_to_json(const ClassificationReport& r) {
  json classes = json::array();
  for (const auto& c : r.classes) {
    json blocks = nullptr;
    if (c.blocks) blocks = c.blocks->sizes;
    classes.push_back(json{{"canonical", matrix_to_json(c.key.canonical)}, {"homeo", homeo_to_json(c.homeo)}, {"blocks", blocks}});
  }
  json formula = nullptr;
  if (r.formula) formula = json{{"name", r.formula->name}, {"expected", r.formula->expected}};
  json oracle = nullptr;
  if (r.oracle_count) oracle = *r.oracle_count;
  return json{{"params", params_to_json(r.params)},
              {"class_count", r.class_count},
              {"oracle_count", oracle},
              {"formula", formula},
              {"classes", std::move(classes)}};
}

/// Checks a document against the report schema; returns an error message or
/// nullopt when it conforms.
inline std::optional<std::string> validate_report_json(const json& j) {
  auto is_uint = [](const json& v) { return v.is_number_unsigned(); };
  if (!j.is_object()) return "report: not an object";
  for (const char* key : {"params", "class_count", "oracle_count", "formula", "classes"})
    if (!j.contains(key)) return std::string("report: missing \"") + key + "\"";
  const auto& p = j.at("params");
  if (!p.is_object() || p.size() != 3) return "report: params must be {m,n,o}";
  for (const char* key : {"m", "n", "o"})
    if (!p.contains(key) || !is_uint(p.at(key))) return std::string("report: params.") + key + " must be an integer";
  if (!is_uint(j.at("class_count"))) return "report: class_count must be an integer";
  if (!j.at("oracle_count").is_null() && !is_uint(j.at("oracle_count"))) return "report: oracle_count must be integer or null";
  const auto& f = j.at("formula");
  if (!f.is_null() && !(f.is_object() && f.contains("name") && f.at("name").is_string() && f.contains("expected") &&
                        is_uint(f.at("expected"))))
    return "report: formula must be {name, expected} or null";
  const auto& cls = j.at("classes");
  if (!cls.is_array()) return "report: classes must be an array";
  if (cls.size() != j.at("class_count").get<std::size_t>()) return "report: classes length != class_count";
  for (const auto& c : cls) {
    if (!c.is_object() || !c.contains("canonical") || !c.contains("homeo") || !c.contains("blocks"))
      return "report: class entries need canonical, homeo, blocks";
    try {
      matrix_from_json(c.at("canonical"));
    } catch (const ParseError& e) {
      return std::string("report: ") + e.what();
    }
    const auto& h = c.at("homeo");
    if (!h.is_object() || !h.contains("circles") || !is_uint(h.at("circles")) || !h.contains("core"))
      return "report: homeo must be {circles, core}";
    const auto& b = c.at("blocks");
    if (!b.is_null()) {
      if (!b.is_array()) return "report: blocks must be an array or null";
      for (const auto& v : b)
        if (!is_uint(v)) return "report: block sizes must be integers";
    }
  }
  return std::nullopt;
}

}  // namespace cartan
