#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rel2pg/errors.hpp"
#include "rel2pg/relational.hpp"
#include "rel2pg/value.hpp"

namespace rel2pg {

struct SVertex {
  std::string label;
  std::vector<std::pair<std::string, AttrType>> attrs;  // includes the reserved vid pair
  std::vector<std::string> pk;                          // empty = no Pk annotation

  friend bool operator==(const SVertex&, const SVertex&) = default;

  std::optional<AttrType> attr_type(const std::string& name) const {
    for (const auto& [a, t] : attrs)
      if (a == name) return t;
    return std::nullopt;
  }
};

struct SEdge {
  std::string label;
  std::string source_label;
  std::string target_label;
  std::vector<std::string> fk_source;  // attrs on the source vertex
  std::vector<std::string> fk_target;  // attrs on the target vertex

  friend bool operator==(const SEdge&, const SEdge&) = default;
};

struct SchemaGraph {
  std::vector<SVertex> vertices;
  std::vector<SEdge> edges;

  friend bool operator==(const SchemaGraph&, const SchemaGraph&) = default;

  const SVertex* find_vertex(const std::string& label) const {
    for (const auto& v : vertices)
      if (v.label == label) return &v;
    return nullptr;
  }
};

struct IVertex {
  std::int64_t id = 0;  // internal, unique across the graph
  std::string label;
  std::vector<std::pair<std::string, Value>> props;  // holds "vid" among others

  friend bool operator==(const IVertex&, const IVertex&) = default;

  const Value* find_prop(const std::string& name) const {
    for (const auto& [k, v] : props)
      if (k == name) return &v;
    return nullptr;
  }
};

struct IEdge {
  std::string label;
  std::int64_t source_id = 0;
  std::int64_t target_id = 0;
  std::vector<std::pair<std::string, Value>> props;

  friend bool operator==(const IEdge&, const IEdge&) = default;
};

struct InstanceGraph {
  std::vector<IVertex> vertices;
  std::vector<IEdge> edges;

  friend bool operator==(const InstanceGraph&, const InstanceGraph&) = default;

  const IVertex* find_vertex(std::int64_t id) const {
    for (const auto& v : vertices)
      if (v.id == id) return &v;
    return nullptr;
  }
};

struct GraphDatabase {
  SchemaGraph schema;
  InstanceGraph instance;

  friend bool operator==(const GraphDatabase&, const GraphDatabase&) = default;
};

/// Basic integrity that does not need a schema graph: unique internal ids,
/// resolvable edge endpoints, non-null integer vid unique per label.
inline void validate_graph_structure(const InstanceGraph& ig) {
  std::set<std::int64_t> ids;
  std::map<std::string, std::set<std::int64_t>> vids_by_label;
  for (const auto& v : ig.vertices) {
    if (!ids.insert(v.id).second)
      throw FormatError("duplicate internal vertex id " + std::to_string(v.id));
    const Value* vid = v.find_prop("vid");
    if (!vid || vid->is_null() || vid->type() != AttrType::Integer)
      throw FormatError("vertex " + std::to_string(v.id) +
                        ": property vid must be a non-null integer");
    if (!vids_by_label[v.label].insert(vid->as_int()).second)
      throw FormatError("label " + v.label + ": duplicate vid " +
                        std::to_string(vid->as_int()));
  }
  for (const auto& e : ig.edges) {
    if (!ids.count(e.source_id) || !ids.count(e.target_id))
      throw FormatError("edge " + e.label + ": endpoint does not exist");
  }
}

/// Label equality plus attribute-wise type conformance (Null fits any type).
inline bool vertex_corresponds(const IVertex& vi, const SVertex& vs) {
  if (vi.label != vs.label) return false;
  for (const auto& [name, value] : vi.props) {
    auto declared = vs.attr_type(name);
    if (!declared || !value.matches(*declared)) return false;
  }
  return true;
}

inline bool edge_corresponds(const IEdge& ei, const SEdge& es, const InstanceGraph& ig,
                             const SchemaGraph& sg) {
  if (ei.label != es.label) return false;
  // Schema edges carry no typed attribute signature, so any instance-edge
  // property breaks correspondence.
  if (!ei.props.empty()) return false;
  const IVertex* src = ig.find_vertex(ei.source_id);
  const IVertex* dst = ig.find_vertex(ei.target_id);
  const SVertex* ssrc = sg.find_vertex(es.source_label);
  const SVertex* sdst = sg.find_vertex(es.target_label);
  if (!src || !dst || !ssrc || !sdst) return false;
  return vertex_corresponds(*src, *ssrc) && vertex_corresponds(*dst, *sdst);
}

/// Empty iff every vertex and edge corresponds to some schema element.
inline ViolationList validate_instance_graph(const InstanceGraph& ig, const SchemaGraph& sg) {
  ViolationList out;
  for (const auto& v : ig.vertices) {
    const SVertex* vs = sg.find_vertex(v.label);
    if (!vs) {
      out.push_back({"unknown-label", v.label,
                     "vertex " + std::to_string(v.id) + " has no schema vertex"});
    } else if (!vertex_corresponds(v, *vs)) {
      out.push_back({"vertex-mismatch", v.label,
                     "vertex " + std::to_string(v.id) +
                         " does not correspond to its schema vertex"});
    }
  }
  for (const auto& e : ig.edges) {
    bool ok = false;
    for (const auto& es : sg.edges)
      if (edge_corresponds(e, es, ig, sg)) {
        ok = true;
        break;
      }
    if (!ok)
      out.push_back({"edge-mismatch", e.label,
                     "edge " + std::to_string(e.source_id) + " -> " +
                         std::to_string(e.target_id) + " corresponds to no schema edge"});
  }
  return out;
}

struct GraphConsistencyOptions {
  /// Rule (c): a vertex carrying non-Null reference attributes for a schema
  /// edge must have at least one outgoing edge with that label. Disabling
  /// this reduces the check to edge-local key equality.
  bool require_fk_edges = true;
};

struct GraphConsistencyReport {
  bool consistent = true;
  ViolationList violations;
  ViolationList structural;  // correspondence failures, reported separately
};

/// Graph-side counterpart of relational consistency:
///  (a) per-vertex key attributes non-Null and pairwise distinct per label,
///  (b) per-edge equality of source reference attrs and target key attrs,
///  (c) vertices with a live (not all-Null) reference must have the edge.
inline GraphConsistencyReport check_graph_consistency(
    const InstanceGraph& ig, const SchemaGraph& sg,
    const GraphConsistencyOptions& opts = {}) {
  GraphConsistencyReport report;
  report.structural = validate_instance_graph(ig, sg);

  // (a) primary keys per schema vertex
  for (const auto& vs : sg.vertices) {
    if (vs.pk.empty()) continue;
    std::vector<const IVertex*> members;
    for (const auto& v : ig.vertices)
      if (vertex_corresponds(v, vs)) members.push_back(&v);
    for (const IVertex* v : members) {
      for (const auto& a : vs.pk) {
        const Value* c = v->find_prop(a);
        if (!c || c->is_null()) {
          report.violations.push_back({"pk-null", vs.label,
                                       "vertex " + std::to_string(v->id) +
                                           " has NULL key attribute " + a});
          break;
        }
      }
    }
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        bool agree = true;
        for (const auto& a : vs.pk) {
          const Value* ci = members[i]->find_prop(a);
          const Value* cj = members[j]->find_prop(a);
          if (!ci || !cj || ci->is_null() || cj->is_null() || !(*ci == *cj)) {
            agree = false;
            break;
          }
        }
        if (agree) {
          report.violations.push_back(
              {"pk-duplicate", vs.label,
               "vertices " + std::to_string(members[i]->id) + " and " +
                   std::to_string(members[j]->id) + " share the same key"});
        }
      }
    }
  }

  // (b) reference equality along existing edges
  for (const auto& es : sg.edges) {
    for (const auto& e : ig.edges) {
      if (!edge_corresponds(e, es, ig, sg)) continue;
      const IVertex* src = ig.find_vertex(e.source_id);
      const IVertex* dst = ig.find_vertex(e.target_id);
      for (std::size_t k = 0; k < es.fk_source.size(); ++k) {
        const Value* a = src->find_prop(es.fk_source[k]);
        const Value* b = dst->find_prop(es.fk_target[k]);
        if (!a || !b || a->is_null() || b->is_null() || !(*a == *b)) {
          report.violations.push_back(
              {"fk-edge-mismatch", es.label,
               "edge " + std::to_string(e.source_id) + " -> " + std::to_string(e.target_id) +
                   " disagrees on " + es.fk_source[k] + " / " + es.fk_target[k]});
          break;
        }
      }
    }
  }

  // (c) required outgoing edges for live references
  if (opts.require_fk_edges) {
    for (const auto& es : sg.edges) {
      for (const auto& v : ig.vertices) {
        if (v.label != es.source_label) continue;
        bool all_null = true;
        for (const auto& a : es.fk_source) {
          const Value* c = v.find_prop(a);
          if (c && !c->is_null()) all_null = false;
        }
        if (all_null) continue;
        bool has_edge = false;
        for (const auto& e : ig.edges)
          if (e.label == es.label && e.source_id == v.id) {
            has_edge = true;
            break;
          }
        if (!has_edge)
          report.violations.push_back(
              {"fk-missing-edge", es.label,
               "vertex " + std::to_string(v.id) +
                   " holds a reference but has no outgoing " + es.label + " edge"});
      }
    }
  }

  report.consistent = report.violations.empty() && report.structural.empty();
  return report;
}

}  // namespace rel2pg
