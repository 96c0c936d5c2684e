#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rel2pg/errors.hpp"
#include "rel2pg/value.hpp"

namespace rel2pg {

struct ForeignKey {
  std::string source_relation;
  std::vector<std::string> source_attrs;
  std::string target_relation;
  std::vector<std::string> target_attrs;

  friend bool operator==(const ForeignKey&, const ForeignKey&) = default;
};

struct Relation {
  std::string name;
  std::vector<std::pair<std::string, AttrType>> attributes;  // declared order
  std::vector<std::string> primary_key;                      // empty = no PK
  std::vector<ForeignKey> foreign_keys;

  friend bool operator==(const Relation&, const Relation&) = default;

  std::optional<std::size_t> attr_index(const std::string& attr) const {
    for (std::size_t i = 0; i < attributes.size(); ++i)
      if (attributes[i].first == attr) return i;
    return std::nullopt;
  }

  std::optional<AttrType> attr_type(const std::string& attr) const {
    auto i = attr_index(attr);
    if (!i) return std::nullopt;
    return attributes[*i].second;
  }
};

struct RelationalSchema {
  std::vector<Relation> relations;

  friend bool operator==(const RelationalSchema&, const RelationalSchema&) = default;

  const Relation* find(const std::string& name) const {
    for (const auto& r : relations)
      if (r.name == name) return &r;
    return nullptr;
  }

  const Relation& get(const std::string& name) const {
    if (const Relation* r = find(name)) return *r;
    throw SchemaError("unknown relation: " + name);
  }
};

/// Structural well-formedness of a schema: unique names, declared PK/FK
/// attributes, FK targets matching declared PKs.
inline void validate_schema(const RelationalSchema& s) {
  std::set<std::string> rel_names;
  for (const auto& r : s.relations) {
    if (!rel_names.insert(r.name).second)
      throw SchemaError("duplicate relation name: " + r.name);
    std::set<std::string> attr_names;
    for (const auto& [a, t] : r.attributes) {
      (void)t;
      if (a == "tid")
        throw SchemaError("relation " + r.name + ": attribute name 'tid' is reserved");
      if (!attr_names.insert(a).second)
        throw SchemaError("relation " + r.name + ": duplicate attribute " + a);
    }
    for (const auto& a : r.primary_key)
      if (!attr_names.count(a))
        throw SchemaError("relation " + r.name + ": PK attribute " + a + " not declared");
  }
  for (const auto& r : s.relations) {
    for (const auto& fk : r.foreign_keys) {
      if (fk.source_relation != r.name)
        throw SchemaError("FK on " + r.name + " names source " + fk.source_relation);
      if (fk.source_attrs.empty() || fk.source_attrs.size() != fk.target_attrs.size())
        throw SchemaError("FK " + r.name + " -> " + fk.target_relation +
                          ": attribute lists must be nonempty and equal-length");
      for (const auto& a : fk.source_attrs)
        if (!r.attr_index(a))
          throw SchemaError("FK source attribute " + r.name + "." + a + " not declared");
      const Relation* tgt = s.find(fk.target_relation);
      if (!tgt) throw SchemaError("FK target relation " + fk.target_relation + " unknown");
      if (tgt->primary_key != fk.target_attrs)
        throw SchemaError("FK " + r.name + " -> " + fk.target_relation +
                          ": target attributes must equal the target's primary key");
    }
  }
}

/// One tuple. Values are positional, aligned with Relation::attributes.
struct Tuple {
  std::int64_t tid = 0;
  std::vector<Value> values;

  friend bool operator==(const Tuple&, const Tuple&) = default;
};

/// Per-relation tuple lists, aligned with RelationalSchema::relations.
struct RelationalInstance {
  std::vector<std::vector<Tuple>> tuples;

  friend bool operator==(const RelationalInstance&, const RelationalInstance&) = default;
};

struct RelationalDatabase {
  RelationalSchema schema;
  RelationalInstance instance;

  friend bool operator==(const RelationalDatabase&, const RelationalDatabase&) = default;

  const std::vector<Tuple>& tuples_of(const std::string& relation) const {
    for (std::size_t i = 0; i < schema.relations.size(); ++i)
      if (schema.relations[i].name == relation) return instance.tuples[i];
    throw SchemaError("unknown relation: " + relation);
  }
};

/// Checks tid distinctness, arity and value typing; throws on violation.
/// Constraint (PK/FK) satisfaction is deliberately not required here.
inline RelationalDatabase make_database(RelationalSchema schema, RelationalInstance instance) {
  validate_schema(schema);
  if (instance.tuples.size() != schema.relations.size())
    throw SchemaError("instance covers " + std::to_string(instance.tuples.size()) +
                      " relations, schema declares " +
                      std::to_string(schema.relations.size()));
  for (std::size_t i = 0; i < schema.relations.size(); ++i) {
    const Relation& r = schema.relations[i];
    std::set<std::int64_t> tids;
    for (const Tuple& t : instance.tuples[i]) {
      if (t.tid <= 0)
        throw SchemaError("relation " + r.name + ": tid must be a positive integer");
      if (!tids.insert(t.tid).second)
        throw SchemaError("relation " + r.name + ": duplicate tid " + std::to_string(t.tid));
      if (t.values.size() != r.attributes.size())
        throw SchemaError("relation " + r.name + ", tid " + std::to_string(t.tid) +
                          ": tuple arity mismatch");
      for (std::size_t k = 0; k < t.values.size(); ++k)
        if (!t.values[k].matches(r.attributes[k].second))
          throw SchemaError("relation " + r.name + ", tid " + std::to_string(t.tid) +
                            ", attribute " + r.attributes[k].first + ": value " +
                            t.values[k].repr() + " is not of type " +
                            to_string(r.attributes[k].second));
    }
  }
  return RelationalDatabase{std::move(schema), std::move(instance)};
}

struct Violation {
  std::string kind;     // e.g. "pk-null", "pk-duplicate", "fk-dangling"
  std::string subject;  // relation or edge label concerned
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

using ViolationList = std::vector<Violation>;

struct ConsistencyReport {
  bool consistent = true;
  ViolationList violations;
};

/// Primary-key satisfaction: no Null component, no two tuples agreeing on
/// every component. One violation per offending tuple / unordered pair.
inline ViolationList check_primary_key(const RelationalDatabase& db,
                                       const std::string& relation,
                                       const std::vector<std::string>& pk) {
  const Relation& r = db.schema.get(relation);
  std::vector<std::size_t> idx;
  for (const auto& a : pk) {
    auto i = r.attr_index(a);
    if (!i) throw SchemaError("unknown attribute " + relation + "." + a);
    idx.push_back(*i);
  }
  const auto& tuples = db.tuples_of(relation);
  ViolationList out;
  for (const Tuple& t : tuples) {
    for (std::size_t i : idx) {
      if (t.values[i].is_null()) {
        out.push_back({"pk-null", relation,
                       "tid " + std::to_string(t.tid) + " has NULL in key attribute " +
                           r.attributes[i].first});
        break;
      }
    }
  }
  for (std::size_t a = 0; a < tuples.size(); ++a) {
    for (std::size_t b = a + 1; b < tuples.size(); ++b) {
      bool agree = true;
      for (std::size_t i : idx) {
        const Value& va = tuples[a].values[i];
        const Value& vb = tuples[b].values[i];
        if (va.is_null() || vb.is_null() || !(va == vb)) {
          agree = false;
          break;
        }
      }
      if (agree && !idx.empty()) {
        out.push_back({"pk-duplicate", relation,
                       "tids " + std::to_string(tuples[a].tid) + " and " +
                           std::to_string(tuples[b].tid) + " share the same key"});
      }
    }
  }
  return out;
}

/// Foreign-key satisfaction. An all-Null source is satisfied; a partially
/// Null composite source is a violation; otherwise some target tuple must
/// match componentwise (Null never matches).
inline ViolationList check_foreign_key(const RelationalDatabase& db, const ForeignKey& fk) {
  const Relation& src = db.schema.get(fk.source_relation);
  const Relation& tgt = db.schema.get(fk.target_relation);
  std::vector<std::size_t> si, ti;
  for (const auto& a : fk.source_attrs) {
    auto i = src.attr_index(a);
    if (!i) throw SchemaError("unknown attribute " + src.name + "." + a);
    si.push_back(*i);
  }
  for (const auto& b : fk.target_attrs) {
    auto i = tgt.attr_index(b);
    if (!i) throw SchemaError("unknown attribute " + tgt.name + "." + b);
    ti.push_back(*i);
  }
  const auto& src_tuples = db.tuples_of(fk.source_relation);
  const auto& tgt_tuples = db.tuples_of(fk.target_relation);
  std::string edge = fk.source_relation + " -> " + fk.target_relation;
  ViolationList out;
  for (const Tuple& t : src_tuples) {
    bool all_null = true, any_null = false;
    for (std::size_t i : si) {
      if (t.values[i].is_null())
        any_null = true;
      else
        all_null = false;
    }
    if (all_null) continue;
    if (any_null) {
      out.push_back({"fk-partial-null", edge,
                     "tid " + std::to_string(t.tid) + " has a partially NULL reference"});
      continue;
    }
    bool matched = false;
    for (const Tuple& u : tgt_tuples) {
      bool eq = true;
      for (std::size_t k = 0; k < si.size(); ++k) {
        const Value& a = t.values[si[k]];
        const Value& b = u.values[ti[k]];
        if (b.is_null() || !(a == b)) {
          eq = false;
          break;
        }
      }
      if (eq) {
        matched = true;
        break;
      }
    }
    if (!matched)
      out.push_back({"fk-dangling", edge,
                     "tid " + std::to_string(t.tid) + " references no existing tuple"});
  }
  return out;
}

/// I |= Sigma: every declared PK and FK holds.
inline ConsistencyReport check_relational_consistency(const RelationalDatabase& db) {
  ConsistencyReport report;
  for (const Relation& r : db.schema.relations) {
    if (!r.primary_key.empty()) {
      auto v = check_primary_key(db, r.name, r.primary_key);
      report.violations.insert(report.violations.end(), v.begin(), v.end());
    }
    for (const ForeignKey& fk : r.foreign_keys) {
      auto v = check_foreign_key(db, fk);
      report.violations.insert(report.violations.end(), v.begin(), v.end());
    }
  }
  report.consistent = report.violations.empty();
  return report;
}

}  // namespace rel2pg
