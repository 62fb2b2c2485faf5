#pragma once

// Graph files and machine-readable reports.
//
// Graph file (UTF-8 JSON, schema_version 1):
//   {"schema_version": 1,
//    "vertices": [{"id": 1, "h_plus": 0.1, "h_minus": -0.1}, ...],
//    "edges": [{"u": 1, "v": 2, "beta": {"pp": .., "pm": .., "mp": .., "mm": ..}}, ...]}
// Ids must be 1..n in file order. An edge listed as (u, v) with u > v is read
// in that orientation and stored transposed. With the Ising shorthand
//   {"schema_version": 1, "model": "ising", "J": 0.3, "B": 0.1,
//    "vertices": [{"id": 1}, ...], "edges": [{"u": 1, "v": 2}, ...]}
// every edge gets pp = mm = J, pm = mp = -J and every vertex h_plus = B,
// h_minus = -B; per-entry "beta" / "h_*" keys are then rejected.

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "twospin/error.hpp"
#include "twospin/oracle.hpp"
#include "twospin/partition.hpp"
#include "twospin/spin_core.hpp"

namespace twospin {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

namespace detail {

inline void check_keys(const json& obj, const std::string& where,
                       std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw parse_error(where, "unexpected key '" + key + "'");
  }
}

inline const json& member(const json& obj, const std::string& where, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw parse_error(where, std::string("missing key '") + key + "'");
  return *it;
}

inline double number(const json& obj, const std::string& where, const char* key) {
  const json& v = member(obj, where, key);
  if (!v.is_number()) throw parse_error(where + "." + key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw parse_error(where + "." + key, "expected a finite number");
  return x;
}

inline std::int64_t integer(const json& obj, const std::string& where, const char* key) {
  const json& v = member(obj, where, key);
  if (!v.is_number_integer()) throw parse_error(where + "." + key, "expected an integer");
  return v.get<std::int64_t>();
}

// Line and column of a byte offset, for syntax errors.
inline std::string locate(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_json(std::ostream& os, const json& j, int indent, int level) {
  const std::string pad(static_cast<std::size_t>(indent * (level + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * level), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) os << ",\n";
        first = false;
        os << pad << json(key).dump() << ": ";
        write_json(os, value, indent, level + 1);
      }
      os << '\n' << close_pad << '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) os << ",\n";
        os << pad;
        write_json(os, j[k], indent, level + 1);
      }
      os << '\n' << close_pad << ']';
      return;
    }
    case json::value_t::number_float: {
      const double x = j.get<double>();
      if (std::isfinite(x)) {
        os << format_double(x);
      } else {
        os << (std::isnan(x) ? "\"nan\"" : x > 0 ? "\"+inf\"" : "\"-inf\"");
      }
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace detail

inline SpinSystem parse_system(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw parse_error(detail::locate(text, e.byte == 0 ? 0 : e.byte - 1), "malformed JSON");
  }
  if (!doc.is_object()) throw parse_error("$", "expected a JSON object");
  detail::check_keys(doc, "$", {"schema_version", "model", "J", "B", "vertices", "edges"});
  if (detail::integer(doc, "$", "schema_version") != kSchemaVersion) {
    throw parse_error("$.schema_version", "unsupported schema version");
  }

  const bool shorthand = doc.contains("model");
  double coupling = 0.0, field = 0.0;
  if (shorthand) {
    const json& model = doc["model"];
    if (!model.is_string() || model.get<std::string>() != "ising") {
      throw parse_error("$.model", "only the \"ising\" shorthand is supported");
    }
    coupling = detail::number(doc, "$", "J");
    field = detail::number(doc, "$", "B");
  } else if (doc.contains("J") || doc.contains("B")) {
    throw parse_error("$", "\"J\" and \"B\" are only valid with \"model\": \"ising\"");
  }

  const json& vertices = detail::member(doc, "$", "vertices");
  if (!vertices.is_array()) throw parse_error("$.vertices", "expected an array");
  std::vector<VertexField> fields;
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    const std::string where = "$.vertices[" + std::to_string(k) + "]";
    const json& v = vertices[k];
    if (!v.is_object()) throw parse_error(where, "expected an object");
    const auto id = detail::integer(v, where, "id");
    if (id != static_cast<std::int64_t>(k + 1)) {
      throw parse_error(where + ".id", "expected id " + std::to_string(k + 1) +
                                           " (ids must be 1..n in file order), got " +
                                           std::to_string(id));
    }
    if (shorthand) {
      detail::check_keys(v, where, {"id"});
      fields.push_back(VertexField::ising(field));
    } else {
      detail::check_keys(v, where, {"id", "h_plus", "h_minus"});
      fields.push_back({detail::number(v, where, "h_plus"), detail::number(v, where, "h_minus")});
    }
  }

  const std::size_t n = fields.size();
  const json& edges = detail::member(doc, "$", "edges");
  if (!edges.is_array()) throw parse_error("$.edges", "expected an array");
  std::vector<Edge> edge_list;
  std::vector<EdgePotential> listed;
  std::set<Edge> seen;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const std::string where = "$.edges[" + std::to_string(k) + "]";
    const json& e = edges[k];
    if (!e.is_object()) throw parse_error(where, "expected an object");
    const auto u = detail::integer(e, where, "u");
    const auto v = detail::integer(e, where, "v");
    if (u == v) throw parse_error(where, "self-loop at vertex " + std::to_string(u));
    for (auto [x, key] : {std::pair{u, "u"}, std::pair{v, "v"}}) {
      if (x < 1 || x > static_cast<std::int64_t>(n)) {
        throw parse_error(where + "." + key, "vertex " + std::to_string(x) + " not in 1.." +
                                                 std::to_string(n));
      }
    }
    EdgePotential p;
    if (shorthand) {
      detail::check_keys(e, where, {"u", "v"});
      p = EdgePotential::ising(coupling);
    } else {
      detail::check_keys(e, where, {"u", "v", "beta"});
      const json& beta = detail::member(e, where, "beta");
      const std::string bw = where + ".beta";
      if (!beta.is_object()) throw parse_error(bw, "expected an object");
      detail::check_keys(beta, bw, {"pp", "pm", "mp", "mm"});
      p = {detail::number(beta, bw, "pp"), detail::number(beta, bw, "pm"),
           detail::number(beta, bw, "mp"), detail::number(beta, bw, "mm")};
    }
    Edge edge{static_cast<Vertex>(u), static_cast<Vertex>(v)};
    if (edge.u > edge.v) {
      std::swap(edge.u, edge.v);
      p = p.transposed();
    }
    if (!seen.insert(edge).second) {
      throw parse_error(where, "duplicate edge (" + std::to_string(edge.u) + "," +
                                   std::to_string(edge.v) + ")");
    }
    edge_list.push_back(edge);
    listed.push_back(p);
  }

  Graph g(n, edge_list);
  std::vector<EdgePotential> potentials(listed.size());
  for (std::size_t k = 0; k < edge_list.size(); ++k) {
    potentials[*g.find_edge(edge_list[k].u, edge_list[k].v)] = listed[k];
  }
  return SpinSystem(std::move(g), std::move(potentials), std::move(fields));
}

// Full (non-shorthand) form; doubles use the shortest round-tripping decimal.
inline json system_to_json(const SpinSystem& sys) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  json vertices = json::array();
  for (Vertex v = 1; v <= sys.vertex_count(); ++v) {
    const auto& f = sys.field(v);
    vertices.push_back({{"id", v}, {"h_plus", f.h_plus}, {"h_minus", f.h_minus}});
  }
  json edges = json::array();
  for (std::uint32_t k = 0; k < sys.graph().edge_count(); ++k) {
    const auto& e = sys.graph().edges()[k];
    const auto& p = sys.potential(k);
    edges.push_back({{"u", e.u},
                     {"v", e.v},
                     {"beta", {{"pp", p.pp}, {"pm", p.pm}, {"mp", p.mp}, {"mm", p.mm}}}});
  }
  doc["vertices"] = std::move(vertices);
  doc["edges"] = std::move(edges);
  return doc;
}

inline std::string serialize_system(const SpinSystem& sys) {
  return system_to_json(sys).dump(2) + "\n";
}

// Report output: floats with 17 significant digits, infinities as "+inf"/"-inf".
inline std::string format_report(const json& j) {
  std::ostringstream os;
  detail::write_json(os, j, 2, 0);
  os << '\n';
  return os.str();
}

inline json frontier_to_json(LogRatio frontier) {
  if (frontier == LogRatio::fixed_minus()) return "minus";
  if (frontier == LogRatio::fixed_plus()) return "plus";
  return frontier.value();
}

inline json to_json(const EstimateReport& r, bool include_timing = false) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "estimate";
  j["log_z_hat"] = r.log_z_hat;
  j["eps"] = r.eps;
  j["degree_bound"] = r.degree_bound;
  j["J"] = r.coupling;
  j["contraction"] = r.contraction;
  j["depth"] = r.depth;
  j["frontier"] = frontier_to_json(r.frontier);
  j["log_weight_all_plus"] = r.log_weight_all_plus;
  j["total_nodes"] = r.total_nodes;
  json vertices = json::array();
  for (const auto& v : r.vertices) {
    vertices.push_back({{"vertex", v.vertex},
                        {"depth", v.depth},
                        {"node_count", v.node_count},
                        {"p_hat", v.p_hat},
                        {"log_p_hat", v.log_p_hat}});
  }
  j["vertices"] = std::move(vertices);
  if (include_timing) j["wall_seconds"] = r.wall_seconds;
  return j;
}

inline json to_json(const CheckReport& r) {
  return {{"name", r.name},
          {"trials", r.trials},
          {"max_statistic", r.max_statistic},
          {"max_violation", r.max_violation},
          {"tolerance", r.tolerance},
          {"passed", r.passed},
          {"worst", r.worst}};
}

}  // namespace twospin
