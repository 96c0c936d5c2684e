#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rel2pg/cypher.hpp"
#include "rel2pg/errors.hpp"
#include "rel2pg/graph.hpp"
#include "rel2pg/relational.hpp"
#include "rel2pg/sql.hpp"

namespace rel2pg {

/// Positional result table; rows are a multiset.
struct ResultTable {
  std::vector<std::string> column_names;
  std::vector<std::vector<Value>> rows;

  friend bool operator==(const ResultTable&, const ResultTable&) = default;
};

/// Cartesian product over the FROM relations, conjunctive filter (anything
/// involving Null is false), positional projection.
inline ResultTable eval_sql(const SqlQuery& q, const RelationalDatabase& db) {
  ResultTable out;
  struct Entry {
    const Relation* rel;
    const std::vector<Tuple>* tuples;
  };
  std::vector<Entry> entries;
  std::map<std::string, std::size_t> alias_pos;
  for (const auto& [rel, alias] : q.from) {
    alias_pos[alias] = entries.size();
    entries.push_back({&db.schema.get(rel), &db.tuples_of(rel)});
  }
  auto value_of = [&](const std::vector<const Tuple*>& row, const std::string& alias,
                      const std::string& attr) -> const Value& {
    std::size_t p = alias_pos.at(alias);
    return row[p]->values[*entries[p].rel->attr_index(attr)];
  };
  for (const auto& item : q.items) out.column_names.push_back(item.alias + "." + item.attr);

  std::vector<const Tuple*> row(entries.size());
  // Each condition is checked as soon as every alias it mentions is bound,
  // pruning the product early.
  std::vector<std::vector<const SqlCondition*>> checks(entries.size());
  for (const auto& cond : q.where) {
    std::size_t depth = alias_pos.at(cond.left.alias);
    if (!cond.right.is_literal) depth = std::max(depth, alias_pos.at(cond.right.alias));
    checks[depth].push_back(&cond);
  }
  std::function<void(std::size_t)> descend = [&](std::size_t d) {
    if (d == entries.size()) {
      std::vector<Value> projected;
      projected.reserve(q.items.size());
      for (const auto& item : q.items)
        projected.push_back(value_of(row, item.alias, item.attr));
      out.rows.push_back(std::move(projected));
      return;
    }
    for (const Tuple& t : *entries[d].tuples) {
      row[d] = &t;
      bool ok = true;
      for (const SqlCondition* cond : checks[d]) {
        const Value& l = value_of(row, cond->left.alias, cond->left.attr);
        const Value& r = cond->right.is_literal
                             ? cond->right.literal
                             : value_of(row, cond->right.alias, cond->right.attr);
        if (!compare_values(cond->op, l, r)) {
          ok = false;
          break;
        }
      }
      if (ok) descend(d + 1);
    }
  };
  descend(0);
  if (q.distinct) {
    std::set<std::string> seen;
    std::vector<std::vector<Value>> kept;
    for (auto& r : out.rows) {
      std::string key;
      for (const auto& v : r) key += v.repr() + "\x1f";
      if (seen.insert(key).second) kept.push_back(std::move(r));
    }
    out.rows = std::move(kept);
  }
  return out;
}

struct CypherEvalOptions {
  /// Fault hook for mutation testing: match relationship arrows against the
  /// opposite edge direction.
  bool reverse_edges = false;
};

namespace eval_detail {

struct PatternStep {
  // One relationship to bind: from a node var already bound to a new (or
  // repeated) node var.
  std::string from_var, to_var;
  std::string from_label, to_label;
  RelDir dir = RelDir::Out;
  std::string edge_label;
};

}  // namespace eval_detail

/// Enumerate all bindings of node variables to vertices and relationship
/// positions to edges such that labels, directions and adjacency match.
/// Match semantics is edge-isomorphism: a graph edge binds at most one
/// relationship position per match; node variables may repeat.
inline ResultTable eval_cypher(const CypherQuery& q, const InstanceGraph& ig,
                               const CypherEvalOptions& opts = {}) {
  ResultTable out;
  for (const auto& item : q.return_items)
    out.column_names.push_back(item.var + "." + item.prop);

  // Collect node variables with labels; conflicting labels for one variable
  // make the pattern unsatisfiable.
  std::map<std::string, std::string> var_label;
  auto note_var = [&](const CyNode& n) -> bool {
    auto [it, inserted] = var_label.emplace(n.var, n.label);
    return inserted || it->second == n.label;
  };
  for (const auto& p : q.match_patterns) {
    if (!note_var(p.head)) return out;
    for (const auto& [rel, node] : p.hops) {
      (void)rel;
      if (!note_var(node)) return out;
    }
  }
  for (const auto& item : q.return_items)
    if (!var_label.count(item.var))
      throw Error("RETURN references unbound variable " + item.var);
  for (const auto& c : q.where) {
    if (!c.left.is_literal && !var_label.count(c.left.var))
      throw Error("WHERE references unbound variable " + c.left.var);
    if (!c.right.is_literal && !var_label.count(c.right.var))
      throw Error("WHERE references unbound variable " + c.right.var);
  }

  // Flatten patterns into an ordered plan: bind the head var of each path,
  // then walk its hops.
  struct HeadStep {
    std::string var, label;
  };
  std::vector<std::pair<std::optional<HeadStep>, std::optional<eval_detail::PatternStep>>> plan;
  for (const auto& p : q.match_patterns) {
    plan.push_back({HeadStep{p.head.var, p.head.label}, std::nullopt});
    std::string prev = p.head.var;
    std::string prev_label = p.head.label;
    for (const auto& [rel, node] : p.hops) {
      eval_detail::PatternStep s;
      s.from_var = prev;
      s.from_label = prev_label;
      s.to_var = node.var;
      s.to_label = node.label;
      s.dir = rel.dir;
      s.edge_label = rel.label;
      plan.push_back({std::nullopt, s});
      prev = node.var;
      prev_label = node.label;
    }
  }

  std::map<std::string, const IVertex*> binding;
  std::vector<bool> edge_used(ig.edges.size(), false);

  auto prop_of = [&](const std::string& var, const std::string& prop) -> Value {
    const IVertex* v = binding.at(var);
    const Value* p = v->find_prop(prop);
    return p ? *p : Value::null();
  };

  // Bucket each condition at the earliest plan step after which all of its
  // variables are bound, so failing assignments are pruned early.
  std::map<std::string, std::size_t> first_bound;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const auto& [head, hop] = plan[i];
    const std::string& var = head ? head->var : hop->to_var;
    first_bound.emplace(var, i);
  }
  std::vector<std::vector<const CyCondition*>> checks(plan.size());
  for (const auto& c : q.where) {
    std::size_t step = 0;
    if (!c.left.is_literal) step = std::max(step, first_bound.at(c.left.var));
    if (!c.right.is_literal) step = std::max(step, first_bound.at(c.right.var));
    checks[step].push_back(&c);
  }
  auto checks_ok = [&](std::size_t step) {
    for (const CyCondition* c : checks[step]) {
      Value l = c->left.is_literal ? c->left.literal : prop_of(c->left.var, c->left.prop);
      Value r = c->right.is_literal ? c->right.literal : prop_of(c->right.var, c->right.prop);
      if (!compare_values(c->op, l, r)) return false;
    }
    return true;
  };

  std::function<void(std::size_t)> search = [&](std::size_t step) {
    if (step == plan.size()) {
      std::vector<Value> row;
      row.reserve(q.return_items.size());
      for (const auto& item : q.return_items) row.push_back(prop_of(item.var, item.prop));
      out.rows.push_back(std::move(row));
      return;
    }
    const auto& [head, hop] = plan[step];
    if (head) {
      if (auto it = binding.find(head->var); it != binding.end()) {
        if (checks_ok(step)) search(step + 1);  // already bound by an earlier pattern
        return;
      }
      for (const auto& v : ig.vertices) {
        if (v.label != head->label) continue;
        binding[head->var] = &v;
        if (checks_ok(step)) search(step + 1);
        binding.erase(head->var);
      }
      return;
    }
    const eval_detail::PatternStep& s = *hop;
    const IVertex* from = binding.at(s.from_var);
    bool to_bound = binding.count(s.to_var) != 0;
    const IVertex* to_fixed = to_bound ? binding.at(s.to_var) : nullptr;
    for (std::size_t ei = 0; ei < ig.edges.size(); ++ei) {
      if (edge_used[ei]) continue;
      const IEdge& e = ig.edges[ei];
      if (e.label != s.edge_label) continue;
      bool outward = (s.dir == RelDir::Out) != opts.reverse_edges;
      std::int64_t expect_here = outward ? e.source_id : e.target_id;
      std::int64_t other_id = outward ? e.target_id : e.source_id;
      if (expect_here != from->id) continue;
      const IVertex* other = ig.find_vertex(other_id);
      if (!other || other->label != s.to_label) continue;
      if (to_bound && other != to_fixed) continue;
      edge_used[ei] = true;
      if (!to_bound) binding[s.to_var] = other;
      if (checks_ok(step)) search(step + 1);
      if (!to_bound) binding.erase(s.to_var);
      edge_used[ei] = false;
    }
  };
  search(0);

  if (q.distinct) {
    std::set<std::string> seen;
    std::vector<std::vector<Value>> kept;
    for (auto& r : out.rows) {
      std::string key;
      for (const auto& v : r) key += v.repr() + "\x1f";
      if (seen.insert(key).second) kept.push_back(std::move(r));
    }
    out.rows = std::move(kept);
  }
  return out;
}

/// First-occurrence-preserving duplicate removal under exact value equality
/// (Null equals Null for row identity).
inline ResultTable dedup(const ResultTable& t) {
  ResultTable out;
  out.column_names = t.column_names;
  std::set<std::string> seen;
  for (const auto& r : t.rows) {
    std::string key;
    for (const auto& v : r) key += v.repr() + "\x1f";
    if (seen.insert(key).second) out.rows.push_back(r);
  }
  return out;
}

struct MatchReport {
  bool verdict = false;
  std::vector<std::vector<Value>> only_in_a;
  std::vector<std::vector<Value>> only_in_b;
};

namespace eval_detail {

/// Unifies value forms before row comparison: integer-valued floats become
/// integers; dates are already canonical.
inline Value normalize(const Value& v) {
  if (!v.is_null() && v.type() == AttrType::Float) {
    double f = v.as_flt();
    if (f == static_cast<double>(static_cast<std::int64_t>(f)))
      return Value::integer(static_cast<std::int64_t>(f));
  }
  return v;
}

inline std::string row_key(const std::vector<Value>& row) {
  std::string key;
  for (const auto& v : row) key += normalize(v).repr() + "\x1f";
  return key;
}

}  // namespace eval_detail

/// Set comparison of the deduplicated, normalized tables.
inline MatchReport compare_results(const ResultTable& a, const ResultTable& b) {
  if (a.column_names.size() != b.column_names.size())
    throw Error("result tables have different column counts");
  MatchReport report;
  std::map<std::string, const std::vector<Value>*> ka, kb;
  for (const auto& r : a.rows) ka.emplace(eval_detail::row_key(r), &r);
  for (const auto& r : b.rows) kb.emplace(eval_detail::row_key(r), &r);
  for (const auto& [k, r] : ka)
    if (!kb.count(k)) report.only_in_a.push_back(*r);
  for (const auto& [k, r] : kb)
    if (!ka.count(k)) report.only_in_b.push_back(*r);
  report.verdict = report.only_in_a.empty() && report.only_in_b.empty();
  return report;
}

}  // namespace rel2pg
