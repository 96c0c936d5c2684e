#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rel2pg/cypher.hpp"
#include "rel2pg/mapper.hpp"
#include "rel2pg/relational.hpp"
#include "rel2pg/sql.hpp"

namespace rel2pg {

/// A detected FK join: the WHERE clause of the query equates every
/// component of `fk` between the two aliases.
struct FkJoin {
  ForeignKey fk;
  std::string source_alias;  // alias over the FK-holding relation
  std::string target_alias;  // alias over the referenced relation
  std::string edge_label;

  friend bool operator==(const FkJoin&, const FkJoin&) = default;
};

/// Scans the (validated) query for alias pairs whose equality conditions
/// cover all components of some schema foreign key. Partially covered
/// composite keys are not joins; their conditions stay plain filters.
inline std::vector<FkJoin> detect_fk_joins(const SqlQuery& q, const RelationalSchema& schema) {
  std::vector<FkJoin> joins;
  auto covered = [&](const std::string& sa, const std::string& src_attr,
                     const std::string& ta, const std::string& tgt_attr) {
    for (const auto& c : q.where) {
      if (c.op != CmpOp::Eq || c.right.is_literal) continue;
      if (c.left.alias == sa && c.left.attr == src_attr && c.right.alias == ta &&
          c.right.attr == tgt_attr)
        return true;
      if (c.left.alias == ta && c.left.attr == tgt_attr && c.right.alias == sa &&
          c.right.attr == src_attr)
        return true;
    }
    return false;
  };
  for (const auto& r : schema.relations) {
    for (const auto& fk : r.foreign_keys) {
      for (const auto& [srel, sa] : q.from) {
        if (srel != fk.source_relation) continue;
        for (const auto& [trel, ta] : q.from) {
          if (trel != fk.target_relation || ta == sa) continue;
          bool all = true;
          for (std::size_t k = 0; k < fk.source_attrs.size(); ++k)
            if (!covered(sa, fk.source_attrs[k], ta, fk.target_attrs[k])) {
              all = false;
              break;
            }
          if (all) joins.push_back({fk, sa, ta, fk_edge_label(schema, fk)});
        }
      }
    }
  }
  return joins;
}

namespace s2c_detail {

/// Folds joins into linear paths where aliases chain; a join whose both
/// endpoints are already mid-path becomes its own single-hop pattern
/// (repeated variables keep the bindings consistent).
inline std::vector<CyPath> build_patterns(const SqlQuery& q, const RelationalSchema& schema,
                                          const std::vector<FkJoin>& joins) {
  auto label_of = [&](const std::string& alias) -> std::string {
    for (const auto& [rel, a] : q.from)
      if (a == alias) return rel;
    return "";
  };
  std::vector<CyPath> paths;
  for (const auto& j : joins) {
    CyNode src{j.source_alias, label_of(j.source_alias)};
    CyNode dst{j.target_alias, label_of(j.target_alias)};
    bool placed = false;
    for (CyPath& p : paths) {
      const std::string& first = p.head.var;
      const std::string& last = p.hops.empty() ? p.head.var : p.hops.back().second.var;
      if (last == src.var) {
        p.hops.emplace_back(CyRel{RelDir::Out, j.edge_label}, dst);
        placed = true;
      } else if (last == dst.var) {
        p.hops.emplace_back(CyRel{RelDir::In, j.edge_label}, src);
        placed = true;
      } else if (first == src.var) {
        // prepend: (dst)<-[:L]-(old head)...
        CyPath np;
        np.head = dst;
        np.hops.emplace_back(CyRel{RelDir::In, j.edge_label}, p.head);
        np.hops.insert(np.hops.end(), p.hops.begin(), p.hops.end());
        p = std::move(np);
        placed = true;
      } else if (first == dst.var) {
        CyPath np;
        np.head = src;
        np.hops.emplace_back(CyRel{RelDir::Out, j.edge_label}, p.head);
        np.hops.insert(np.hops.end(), p.hops.begin(), p.hops.end());
        p = std::move(np);
        placed = true;
      }
      if (placed) break;
    }
    if (!placed) {
      CyPath p;
      p.head = src;
      p.hops.emplace_back(CyRel{RelDir::Out, j.edge_label}, dst);
      paths.push_back(std::move(p));
    }
  }
  // Aliases untouched by any join become standalone node patterns.
  auto mentioned = [&](const std::string& alias) {
    for (const CyPath& p : paths) {
      if (p.head.var == alias) return true;
      for (const auto& [rel, node] : p.hops) {
        (void)rel;
        if (node.var == alias) return true;
      }
    }
    return false;
  };
  for (const auto& [rel, alias] : q.from)
    if (!mentioned(alias)) paths.push_back(CyPath{CyNode{alias, rel}, {}});
  (void)schema;
  return paths;
}

}  // namespace s2c_detail

/// S2C: FROM aliases become labeled node patterns, detected FK joins become
/// directed edges (FK holder -> referenced vertex), every WHERE condition is
/// carried over verbatim (join equalities included), RETURN mirrors SELECT.
inline CypherQuery translate(const SqlQuery& q, const RelationalSchema& schema) {
  CypherQuery c;
  std::vector<FkJoin> joins = detect_fk_joins(q, schema);
  // Match semantics is edge-isomorphic: one graph edge cannot serve two
  // relationship positions. If a query mentions the same edge label twice
  // (relation joined via the same key from two aliases), drawing both as
  // pattern edges would lose the assignments where the aliases coincide.
  // Those joins stay plain node patterns; the retained WHERE equalities
  // still enforce them.
  std::map<std::string, int> label_uses;
  for (const auto& j : joins) ++label_uses[j.edge_label];
  std::erase_if(joins, [&](const FkJoin& j) { return label_uses[j.edge_label] > 1; });
  c.match_patterns = s2c_detail::build_patterns(q, schema, joins);
  for (const auto& cond : q.where) {
    CyCondition cc;
    cc.left = CyOperand::property(cond.left.alias, cond.left.attr);
    cc.op = cond.op;
    cc.right = cond.right.is_literal
                   ? CyOperand::lit(cond.right.literal)
                   : CyOperand::property(cond.right.alias, cond.right.attr);
    c.where.push_back(std::move(cc));
  }
  for (const auto& item : q.items)
    c.return_items.push_back(CyReturnItem{item.alias, item.attr, item.star});
  c.distinct = q.distinct;
  return c;
}

}  // namespace rel2pg
