#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rel2pg/graph.hpp"
#include "rel2pg/relational.hpp"

namespace rel2pg {

struct MappingReport {
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::vector<std::pair<std::string, std::size_t>> vertices_per_relation;
  std::vector<std::string> warnings;
};

/// Label of the schema-graph edge produced for `fk`. Labels follow the
/// referencing-referenced convention "<r>-<s>"; when several FKs link the
/// same relation pair, a "#<source attrs>" suffix keeps labels distinct.
inline std::string fk_edge_label(const RelationalSchema& schema, const ForeignKey& fk) {
  std::size_t pair_count = 0;
  for (const auto& r : schema.relations)
    for (const auto& other : r.foreign_keys)
      if (other.source_relation == fk.source_relation &&
          other.target_relation == fk.target_relation)
        ++pair_count;
  std::string label = fk.source_relation + "-" + fk.target_relation;
  if (pair_count > 1) {
    label += "#";
    for (std::size_t i = 0; i < fk.source_attrs.size(); ++i) {
      if (i) label += "_";
      label += fk.source_attrs[i];
    }
  }
  return label;
}

/// SM: one labeled vertex per relation (typed attrs + reserved vid pair,
/// Pk from the declared primary key), one edge per foreign key.
inline SchemaGraph schema_map(const RelationalSchema& schema) {
  validate_schema(schema);
  SchemaGraph sg;
  for (const auto& r : schema.relations) {
    SVertex v;
    v.label = r.name;
    v.attrs = r.attributes;
    v.attrs.emplace_back("vid", AttrType::Integer);
    v.pk = r.primary_key;
    sg.vertices.push_back(std::move(v));
  }
  for (const auto& r : schema.relations) {
    for (const auto& fk : r.foreign_keys) {
      SEdge e;
      e.label = fk_edge_label(schema, fk);
      e.source_label = fk.source_relation;
      e.target_label = fk.target_relation;
      e.fk_source = fk.source_attrs;
      e.fk_target = fk.target_attrs;
      sg.edges.push_back(std::move(e));
    }
  }
  return sg;
}

struct InstanceMapOptions {
  /// Fault hook for mutation testing: silently drop Null-valued properties
  /// instead of materializing them.
  bool omit_null_props = false;
};

/// IM: one vertex per tuple (tid preserved as vid, every attribute value
/// materialized, Nulls included), one edge per FK-matched tuple pair.
inline InstanceGraph instance_map(const RelationalDatabase& db,
                                  const InstanceMapOptions& opts = {}) {
  InstanceGraph ig;
  // (relation index, tid) -> internal vertex id
  std::map<std::pair<std::size_t, std::int64_t>, std::int64_t> vertex_of;
  std::int64_t next_id = 1;
  for (std::size_t ri = 0; ri < db.schema.relations.size(); ++ri) {
    const Relation& r = db.schema.relations[ri];
    for (const Tuple& t : db.instance.tuples[ri]) {
      IVertex v;
      v.id = next_id++;
      v.label = r.name;
      v.props.emplace_back("vid", Value::integer(t.tid));
      for (std::size_t k = 0; k < r.attributes.size(); ++k) {
        if (opts.omit_null_props && t.values[k].is_null()) continue;
        v.props.emplace_back(r.attributes[k].first, t.values[k]);
      }
      vertex_of[{ri, t.tid}] = v.id;
      ig.vertices.push_back(std::move(v));
    }
  }
  for (std::size_t ri = 0; ri < db.schema.relations.size(); ++ri) {
    const Relation& r = db.schema.relations[ri];
    for (const ForeignKey& fk : r.foreign_keys) {
      std::string label = fk_edge_label(db.schema, fk);
      std::size_t ti = 0;
      while (db.schema.relations[ti].name != fk.target_relation) ++ti;
      const Relation& tgt = db.schema.relations[ti];
      std::vector<std::size_t> si, di;
      for (const auto& a : fk.source_attrs) si.push_back(*r.attr_index(a));
      for (const auto& b : fk.target_attrs) di.push_back(*tgt.attr_index(b));
      for (const Tuple& t : db.instance.tuples[ri]) {
        for (const Tuple& u : db.instance.tuples[ti]) {
          bool match = true;
          for (std::size_t k = 0; k < si.size(); ++k) {
            const Value& a = t.values[si[k]];
            const Value& b = u.values[di[k]];
            if (a.is_null() || b.is_null() || !(a == b)) {
              match = false;
              break;
            }
          }
          if (!match) continue;
          IEdge e;
          e.label = label;
          e.source_id = vertex_of.at({ri, t.tid});
          e.target_id = vertex_of.at({ti, u.tid});
          ig.edges.push_back(std::move(e));
        }
      }
    }
  }
  return ig;
}

/// CM = (SM, IM).
inline std::pair<GraphDatabase, MappingReport> complete_map(const RelationalDatabase& db,
                                                            const InstanceMapOptions& opts = {}) {
  GraphDatabase gd;
  gd.schema = schema_map(db.schema);
  gd.instance = instance_map(db, opts);
  MappingReport report;
  report.vertices = gd.instance.vertices.size();
  report.edges = gd.instance.edges.size();
  for (std::size_t ri = 0; ri < db.schema.relations.size(); ++ri)
    report.vertices_per_relation.emplace_back(db.schema.relations[ri].name,
                                              db.instance.tuples[ri].size());
  return {std::move(gd), std::move(report)};
}

/// SM^-1: one relation per vertex, attributes in serialized order with the
/// reserved vid pair removed, PK from Pk, one FK per edge (label suffix
/// ignored; the FK lists carry the information).
inline RelationalSchema schema_unmap(const SchemaGraph& sg) {
  RelationalSchema schema;
  for (const auto& v : sg.vertices) {
    bool has_vid = false;
    Relation r;
    r.name = v.label;
    for (const auto& [a, t] : v.attrs) {
      if (a == "vid" && t == AttrType::Integer) {
        has_vid = true;
        continue;
      }
      r.attributes.emplace_back(a, t);
    }
    if (!has_vid)
      throw FormatError("vertex " + v.label +
                        " lacks the vid:Integer pair; not a mapped schema graph");
    r.primary_key = v.pk;
    schema.relations.push_back(std::move(r));
  }
  for (const auto& e : sg.edges) {
    Relation* src = nullptr;
    for (auto& r : schema.relations)
      if (r.name == e.source_label) src = &r;
    if (!src) throw FormatError("edge " + e.label + ": unknown source vertex");
    src->foreign_keys.push_back(
        ForeignKey{e.source_label, e.fk_source, e.target_label, e.fk_target});
  }
  validate_schema(schema);
  return schema;
}

/// IM^-1: one tuple per vertex, tid from vid, values from the remaining
/// properties. Edges carry no extra information and are dropped.
inline RelationalInstance instance_unmap(const InstanceGraph& ig, const SchemaGraph& sg) {
  validate_graph_structure(ig);
  auto structural = validate_instance_graph(ig, sg);
  if (!structural.empty())
    throw FormatError("not an instance of the given schema graph: " + structural.front().detail);
  RelationalInstance inst;
  inst.tuples.resize(sg.vertices.size());
  std::map<std::string, std::size_t> rel_index;
  for (std::size_t i = 0; i < sg.vertices.size(); ++i) rel_index[sg.vertices[i].label] = i;
  for (const auto& v : ig.vertices) {
    std::size_t ri = rel_index.at(v.label);
    const SVertex& vs = sg.vertices[ri];
    Tuple t;
    t.tid = v.find_prop("vid")->as_int();
    for (const auto& [a, ty] : vs.attrs) {
      (void)ty;
      if (a == "vid") continue;
      const Value* c = v.find_prop(a);
      // IM materializes every attribute, Nulls included; a gap means the
      // graph was not produced by the instance mapping.
      if (!c)
        throw FormatError("vertex " + std::to_string(v.id) + " (label " + v.label +
                          ") lacks property " + a + "; not a mapped instance graph");
      t.values.push_back(*c);
    }
    inst.tuples[ri].push_back(std::move(t));
  }
  return inst;
}

/// CM^-1.
inline RelationalDatabase complete_unmap(const GraphDatabase& gd) {
  RelationalSchema schema = schema_unmap(gd.schema);
  RelationalInstance inst = instance_unmap(gd.instance, gd.schema);
  return make_database(std::move(schema), std::move(inst));
}

}  // namespace rel2pg
