#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rel2pg/errors.hpp"
#include "rel2pg/graph.hpp"
#include "rel2pg/relational.hpp"

namespace rel2pg {

inline constexpr const char* kFormatVersion = "rel2pg/1";

namespace io_detail {

using json = nlohmann::ordered_json;

inline void check_version(const json& j, const std::string& where) {
  if (!j.contains("version") || !j["version"].is_string())
    throw FormatError(where + ": missing version tag");
  std::string v = j["version"].get<std::string>();
  std::string major = v.substr(0, v.find('.'));
  if (major != kFormatVersion)
    throw FormatError(where + ": unsupported format version '" + v + "'");
}

inline json value_to_json(const Value& v) {
  if (v.is_null()) return nullptr;
  switch (*v.type()) {
    case AttrType::String: return v.as_str();
    case AttrType::Integer: return v.as_int();
    case AttrType::Float: return v.as_flt();
    case AttrType::Boolean: return v.as_bool();
    case AttrType::Date: return v.as_date().iso();
    case AttrType::Object: return v.as_object().text;
  }
  return nullptr;
}

inline Value value_from_json(const json& j, AttrType declared, const std::string& where) {
  if (j.is_null()) return Value::null();
  switch (declared) {
    case AttrType::String:
      if (j.is_string()) return Value::str(j.get<std::string>());
      break;
    case AttrType::Object:
      if (j.is_string()) return Value::object(j.get<std::string>());
      break;
    case AttrType::Date:
      if (j.is_string()) {
        if (auto d = parse_date(j.get<std::string>())) return Value::date(*d);
        throw FormatError(where + ": '" + j.get<std::string>() + "' is not a valid date");
      }
      break;
    case AttrType::Integer:
      if (j.is_number_integer()) return Value::integer(j.get<std::int64_t>());
      break;
    case AttrType::Float:
      if (j.is_number()) return Value::flt(j.get<double>());
      break;
    case AttrType::Boolean:
      if (j.is_boolean()) return Value::boolean(j.get<bool>());
      break;
  }
  throw FormatError(where + ": value " + j.dump() + " does not match declared type " +
                    to_string(declared));
}

inline json attrs_to_json(const std::vector<std::pair<std::string, AttrType>>& attrs) {
  json arr = json::array();
  for (const auto& [name, type] : attrs)
    arr.push_back({{"name", name}, {"type", to_string(type)}});
  return arr;
}

inline std::vector<std::pair<std::string, AttrType>> attrs_from_json(const json& arr,
                                                                     const std::string& where) {
  if (!arr.is_array()) throw FormatError(where + ": attributes must be an array");
  std::vector<std::pair<std::string, AttrType>> out;
  for (const auto& a : arr) {
    if (!a.contains("name") || !a.contains("type"))
      throw FormatError(where + ": attribute entries need name and type");
    auto t = attr_type_from_string(a["type"].get<std::string>());
    if (!t)
      throw FormatError(where + ": unknown attribute type '" +
                        a["type"].get<std::string>() + "'");
    out.emplace_back(a["name"].get<std::string>(), *t);
  }
  return out;
}

inline std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

inline json parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
  return j;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw FormatError("write failed: " + path);
}

}  // namespace io_detail

inline io_detail::json rdb_to_json(const RelationalDatabase& db) {
  using io_detail::json;
  json j;
  j["version"] = kFormatVersion;
  json rels = json::array();
  for (const auto& r : db.schema.relations) {
    json jr;
    jr["name"] = r.name;
    jr["attributes"] = io_detail::attrs_to_json(r.attributes);
    if (!r.primary_key.empty()) jr["primary_key"] = r.primary_key;
    json fks = json::array();
    for (const auto& fk : r.foreign_keys)
      fks.push_back({{"attributes", fk.source_attrs},
                     {"references",
                      {{"relation", fk.target_relation}, {"attributes", fk.target_attrs}}}});
    jr["foreign_keys"] = std::move(fks);
    rels.push_back(std::move(jr));
  }
  j["schema"] = {{"relations", std::move(rels)}};
  json inst = json::object();
  for (std::size_t ri = 0; ri < db.schema.relations.size(); ++ri) {
    const Relation& r = db.schema.relations[ri];
    json rows = json::array();
    for (const Tuple& t : db.instance.tuples[ri]) {
      json row;
      row["tid"] = t.tid;
      for (std::size_t k = 0; k < r.attributes.size(); ++k)
        row[r.attributes[k].first] = io_detail::value_to_json(t.values[k]);
      rows.push_back(std::move(row));
    }
    inst[r.name] = std::move(rows);
  }
  j["instance"] = std::move(inst);
  return j;
}

inline RelationalDatabase rdb_from_json(const io_detail::json& j) {
  io_detail::check_version(j, "relational database");
  if (!j.contains("schema") || !j["schema"].contains("relations"))
    throw FormatError("schema.relations: missing");
  RelationalSchema schema;
  for (const auto& jr : j["schema"]["relations"]) {
    Relation r;
    if (!jr.contains("name")) throw FormatError("schema.relations[]: missing name");
    r.name = jr["name"].get<std::string>();
    std::string where = "schema.relations." + r.name;
    r.attributes = io_detail::attrs_from_json(jr.value("attributes", io_detail::json::array()), where);
    if (jr.contains("primary_key") && !jr["primary_key"].is_null())
      r.primary_key = jr["primary_key"].get<std::vector<std::string>>();
    for (const auto& jfk : jr.value("foreign_keys", io_detail::json::array())) {
      if (!jfk.contains("attributes") || !jfk.contains("references"))
        throw FormatError(where + ".foreign_keys[]: need attributes and references");
      ForeignKey fk;
      fk.source_relation = r.name;
      fk.source_attrs = jfk["attributes"].get<std::vector<std::string>>();
      fk.target_relation = jfk["references"]["relation"].get<std::string>();
      fk.target_attrs = jfk["references"]["attributes"].get<std::vector<std::string>>();
      r.foreign_keys.push_back(std::move(fk));
    }
    schema.relations.push_back(std::move(r));
  }
  validate_schema(schema);
  RelationalInstance inst;
  inst.tuples.resize(schema.relations.size());
  const auto& jinst = j.value("instance", io_detail::json::object());
  for (auto it = jinst.begin(); it != jinst.end(); ++it) {
    const Relation* r = schema.find(it.key());
    if (!r) throw FormatError("instance." + it.key() + ": unknown relation");
    std::size_t ri = 0;
    while (schema.relations[ri].name != it.key()) ++ri;
    for (const auto& row : it.value()) {
      Tuple t;
      if (!row.contains("tid") || !row["tid"].is_number_integer())
        throw FormatError("instance." + it.key() + "[]: missing integer tid");
      t.tid = row["tid"].get<std::int64_t>();
      std::string where = "instance." + it.key() + ".tid=" + std::to_string(t.tid);
      for (const auto& [name, type] : r->attributes) {
        if (!row.contains(name)) throw FormatError(where + ": missing attribute " + name);
        t.values.push_back(io_detail::value_from_json(row[name], type, where + "." + name));
      }
      for (auto field = row.begin(); field != row.end(); ++field)
        if (field.key() != "tid" && !r->attr_index(field.key()))
          throw FormatError(where + ": undeclared attribute " + field.key());
      inst.tuples[ri].push_back(std::move(t));
    }
  }
  return make_database(std::move(schema), std::move(inst));
}

inline io_detail::json gdb_to_json(const GraphDatabase& gd) {
  using io_detail::json;
  json j;
  j["version"] = kFormatVersion;
  json svs = json::array();
  for (const auto& v : gd.schema.vertices) {
    json jv;
    jv["label"] = v.label;
    jv["attributes"] = io_detail::attrs_to_json(v.attrs);
    if (!v.pk.empty()) jv["pk"] = v.pk;
    svs.push_back(std::move(jv));
  }
  json ses = json::array();
  for (const auto& e : gd.schema.edges)
    ses.push_back({{"label", e.label},
                   {"source_label", e.source_label},
                   {"target_label", e.target_label},
                   {"fk_source", e.fk_source},
                   {"fk_target", e.fk_target}});
  j["schema_graph"] = {{"vertices", std::move(svs)}, {"edges", std::move(ses)}};
  json ivs = json::array();
  for (const auto& v : gd.instance.vertices) {
    json props = json::object();
    for (const auto& [name, value] : v.props) props[name] = io_detail::value_to_json(value);
    ivs.push_back({{"id", v.id}, {"label", v.label}, {"properties", std::move(props)}});
  }
  json ies = json::array();
  for (const auto& e : gd.instance.edges)
    ies.push_back(
        {{"label", e.label}, {"source_id", e.source_id}, {"target_id", e.target_id}});
  j["instance_graph"] = {{"vertices", std::move(ivs)}, {"edges", std::move(ies)}};
  return j;
}

inline GraphDatabase gdb_from_json(const io_detail::json& j) {
  io_detail::check_version(j, "graph database");
  if (!j.contains("schema_graph") || !j.contains("instance_graph"))
    throw FormatError("expected schema_graph and instance_graph sections");
  GraphDatabase gd;
  for (const auto& jv : j["schema_graph"].value("vertices", io_detail::json::array())) {
    SVertex v;
    v.label = jv["label"].get<std::string>();
    v.attrs = io_detail::attrs_from_json(jv.value("attributes", io_detail::json::array()),
                                         "schema_graph." + v.label);
    if (jv.contains("pk") && !jv["pk"].is_null())
      v.pk = jv["pk"].get<std::vector<std::string>>();
    gd.schema.vertices.push_back(std::move(v));
  }
  for (const auto& je : j["schema_graph"].value("edges", io_detail::json::array())) {
    SEdge e;
    e.label = je["label"].get<std::string>();
    e.source_label = je["source_label"].get<std::string>();
    e.target_label = je["target_label"].get<std::string>();
    e.fk_source = je["fk_source"].get<std::vector<std::string>>();
    e.fk_target = je["fk_target"].get<std::vector<std::string>>();
    gd.schema.edges.push_back(std::move(e));
  }
  for (const auto& jv : j["instance_graph"].value("vertices", io_detail::json::array())) {
    IVertex v;
    v.id = jv["id"].get<std::int64_t>();
    v.label = jv["label"].get<std::string>();
    const SVertex* vs = gd.schema.find_vertex(v.label);
    if (!vs) throw FormatError("instance_graph: vertex label " + v.label + " not in schema");
    std::string where = "instance_graph." + v.label + ".id=" + std::to_string(v.id);
    const auto& props = jv.value("properties", io_detail::json::object());
    for (auto it = props.begin(); it != props.end(); ++it) {
      auto declared = vs->attr_type(it.key());
      if (!declared) throw FormatError(where + ": undeclared property " + it.key());
      v.props.emplace_back(it.key(),
                           io_detail::value_from_json(it.value(), *declared, where + "." + it.key()));
    }
    gd.instance.vertices.push_back(std::move(v));
  }
  for (const auto& je : j["instance_graph"].value("edges", io_detail::json::array())) {
    IEdge e;
    e.label = je["label"].get<std::string>();
    e.source_id = je["source_id"].get<std::int64_t>();
    e.target_id = je["target_id"].get<std::int64_t>();
    gd.instance.edges.push_back(std::move(e));
  }
  validate_graph_structure(gd.instance);
  return gd;
}

/// Canonical serialization: stable key order, declared attribute order,
/// two-space indent, LF endings. Byte equality certifies model equality.
inline std::string rdb_to_string(const RelationalDatabase& db) {
  return io_detail::canonical_dump(rdb_to_json(db));
}
inline std::string gdb_to_string(const GraphDatabase& gd) {
  return io_detail::canonical_dump(gdb_to_json(gd));
}

inline void save_rdb(const RelationalDatabase& db, const std::string& path) {
  io_detail::write_file(path, rdb_to_string(db));
}
inline RelationalDatabase load_rdb(const std::string& path) {
  return rdb_from_json(io_detail::parse_file(path));
}
inline void save_gdb(const GraphDatabase& gd, const std::string& path) {
  io_detail::write_file(path, gdb_to_string(gd));
}
inline GraphDatabase load_gdb(const std::string& path) {
  return gdb_from_json(io_detail::parse_file(path));
}

/// True if the file holds a relational database, false for a graph
/// database; throws on anything else.
inline bool is_relational_file(const std::string& path) {
  auto j = io_detail::parse_file(path);
  io_detail::check_version(j, path);
  if (j.contains("schema") && j.contains("instance")) return true;
  if (j.contains("schema_graph") && j.contains("instance_graph")) return false;
  throw FormatError(path + ": neither a relational nor a graph database file");
}

namespace io_detail {

inline std::string cypher_literal(const Value& v, const std::string& where) {
  if (v.is_null()) return "null";
  switch (*v.type()) {
    case AttrType::String: {
      std::string out = "\"";
      for (char c : v.as_str()) {
        if (static_cast<unsigned char>(c) < 0x20)
          throw FormatError(where + ": control character not representable");
        if (c == '"' || c == '\\') out += '\\';
        out += c;
      }
      return out + "\"";
    }
    case AttrType::Object: return cypher_literal(Value::str(v.as_object().text), where);
    case AttrType::Integer: return std::to_string(v.as_int());
    case AttrType::Float: {
      double f = v.as_flt();
      if (!std::isfinite(f)) throw FormatError(where + ": non-finite float not representable");
      std::ostringstream os;
      os.precision(17);
      os << f;
      std::string s = os.str();
      if (s.find('.') == std::string::npos && s.find('e') == std::string::npos) s += ".0";
      return s;
    }
    case AttrType::Boolean: return v.as_bool() ? "true" : "false";
    case AttrType::Date: return "date(\"" + v.as_date().iso() + "\")";
  }
  return "null";
}

inline std::string backtick(const std::string& label) {
  for (char c : label)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
      return "`" + label + "`";
  return label;
}

}  // namespace io_detail

/// Emits a Neo4j-loadable script: CREATE per vertex, then MATCH-by-vid +
/// CREATE per edge. Null properties are omitted (Cypher has no stored null).
inline std::string cypher_script(const GraphDatabase& gd) {
  using io_detail::backtick;
  std::string out = "// property-graph load script (" + std::string(kFormatVersion) + ")\n";
  out += "// vertices: " + std::to_string(gd.instance.vertices.size()) +
         ", edges: " + std::to_string(gd.instance.edges.size()) + "\n";
  for (const auto& v : gd.instance.vertices) {
    std::string where = "vertex " + std::to_string(v.id);
    out += "CREATE (:" + backtick(v.label) + " {";
    bool first = true;
    for (const auto& [name, value] : v.props) {
      if (value.is_null()) continue;
      if (!first) out += ", ";
      first = false;
      out += backtick(name) + ": " + io_detail::cypher_literal(value, where);
    }
    out += "});\n";
  }
  auto vid_of = [&](std::int64_t id) -> std::string {
    const IVertex* v = gd.instance.find_vertex(id);
    if (!v) throw FormatError("edge endpoint " + std::to_string(id) + " missing");
    return io_detail::cypher_literal(*v->find_prop("vid"), "vid");
  };
  for (const auto& e : gd.instance.edges) {
    const IVertex* s = gd.instance.find_vertex(e.source_id);
    const IVertex* t = gd.instance.find_vertex(e.target_id);
    out += "MATCH (a:" + backtick(s->label) + " {vid: " + vid_of(e.source_id) + "}), (b:" +
           backtick(t->label) + " {vid: " + vid_of(e.target_id) + "}) CREATE (a)-[:" +
           backtick(e.label) + "]->(b);\n";
  }
  return out;
}

inline void emit_cypher_script(const GraphDatabase& gd, const std::string& path) {
  io_detail::write_file(path, cypher_script(gd));
}

}  // namespace rel2pg
