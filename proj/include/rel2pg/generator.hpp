#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rel2pg/relational.hpp"
#include "rel2pg/sql.hpp"

namespace rel2pg {

enum class Inconsistency { PkNull, PkDup, FkDangling };

struct GeneratorConfig {
  std::uint64_t seed = 0;
  int max_relations = 4;
  int max_attrs = 6;
  int max_tuples = 30;
  int max_joins = 3;
  std::optional<Inconsistency> injection;
};

namespace gen_detail {

using Rng = std::mt19937_64;

inline int pick(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline bool chance(Rng& rng, double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

inline Value random_value(Rng& rng, AttrType t) {
  switch (t) {
    case AttrType::String: {
      static const char* words[] = {"alpha", "beta", "gamma", "delta", "epsilon",
                                    "zeta",  "eta",  "theta", "iota",  "kappa"};
      return Value::str(words[pick(rng, 0, 9)]);
    }
    case AttrType::Integer: return Value::integer(pick(rng, -50, 200));
    case AttrType::Float: return Value::flt(pick(rng, -100, 100) / 4.0);
    case AttrType::Boolean: return Value::boolean(chance(rng, 0.5));
    case AttrType::Date: {
      Date d{2000 + pick(rng, 0, 25), pick(rng, 1, 12), pick(rng, 1, 28)};
      return Value::date(d);
    }
    case AttrType::Object: return Value::object("blob" + std::to_string(pick(rng, 0, 99)));
  }
  return Value::null();
}

}  // namespace gen_detail

/// Seed-deterministic random database. The base instance is always
/// consistent (unique non-null keys; FK values resolve or are Null);
/// cfg.injection then plants exactly one fault of the requested kind.
inline RelationalDatabase generate_database(const GeneratorConfig& cfg,
                                            gen_detail::Rng& rng) {
  using namespace gen_detail;
  int nrel = pick(rng, 1, std::max(1, cfg.max_relations));
  if (cfg.injection && nrel < 2) nrel = 2;  // fk-dangling needs a referenced relation

  RelationalSchema schema;
  const AttrType pool[] = {AttrType::String, AttrType::Integer, AttrType::Float,
                           AttrType::Boolean, AttrType::Date, AttrType::Object};
  for (int i = 0; i < nrel; ++i) {
    Relation r;
    r.name = "R" + std::to_string(i + 1);
    r.attributes.emplace_back("id", AttrType::Integer);
    r.primary_key = {"id"};
    int extra = pick(rng, 0, std::max(0, cfg.max_attrs - 1));
    for (int k = 0; k < extra; ++k)
      r.attributes.emplace_back("a" + std::to_string(k + 1), pool[pick(rng, 0, 5)]);
    schema.relations.push_back(std::move(r));
  }
  // FKs point at earlier relations so the reference structure is acyclic.
  for (int i = 1; i < nrel; ++i) {
    Relation& r = schema.relations[i];
    int nfk = pick(rng, 0, 2);
    if (cfg.injection == Inconsistency::FkDangling && i == 1 && nfk == 0) nfk = 1;
    for (int f = 0; f < nfk; ++f) {
      int target = pick(rng, 0, i - 1);
      std::string attr = "ref" + std::to_string(f + 1) + "_" + schema.relations[target].name;
      r.attributes.emplace_back(attr, AttrType::Integer);
      r.foreign_keys.push_back(
          ForeignKey{r.name, {attr}, schema.relations[target].name, {"id"}});
    }
  }

  RelationalInstance inst;
  inst.tuples.resize(schema.relations.size());
  for (std::size_t ri = 0; ri < schema.relations.size(); ++ri) {
    const Relation& r = schema.relations[ri];
    int n = pick(rng, 0, std::max(1, cfg.max_tuples));
    if (cfg.injection && ri < 2 && n < 2) n = 2;  // room to plant a fault
    std::vector<int> keys(n);
    for (int k = 0; k < n; ++k) keys[k] = k + 1;
    std::shuffle(keys.begin(), keys.end(), rng);
    for (int k = 0; k < n; ++k) {
      Tuple t;
      t.tid = k + 1;
      for (const auto& [name, type] : r.attributes) {
        bool is_fk = false;
        const ForeignKey* fk = nullptr;
        for (const auto& f : r.foreign_keys)
          if (f.source_attrs[0] == name) {
            is_fk = true;
            fk = &f;
          }
        if (name == "id") {
          t.values.push_back(Value::integer(keys[k]));
        } else if (is_fk) {
          std::size_t ti = 0;
          while (schema.relations[ti].name != fk->target_relation) ++ti;
          const auto& targets = inst.tuples[ti];
          if (targets.empty() || chance(rng, 0.2)) {
            t.values.push_back(Value::null());
          } else {
            const Tuple& u = targets[pick(rng, 0, static_cast<int>(targets.size()) - 1)];
            t.values.push_back(u.values[0]);  // target "id" is attribute 0
          }
        } else if (chance(rng, 0.15)) {
          t.values.push_back(Value::null());
        } else {
          t.values.push_back(random_value(rng, type));
        }
      }
      inst.tuples[ri].push_back(std::move(t));
    }
  }

  if (cfg.injection) {
    switch (*cfg.injection) {
      case Inconsistency::PkNull:
        inst.tuples[0][0].values[0] = Value::null();
        break;
      case Inconsistency::PkDup:
        inst.tuples[0][1].values[0] = inst.tuples[0][0].values[0];
        break;
      case Inconsistency::FkDangling: {
        // relation R2 always carries an FK when this injection is requested
        const Relation& r2 = schema.relations[1];
        std::size_t no_fk_attr = *r2.attr_index(r2.foreign_keys[0].source_attrs[0]);
        inst.tuples[1][0].values[no_fk_attr] = Value::integer(999999);
        break;
      }
    }
  }
  return make_database(std::move(schema), std::move(inst));
}

/// Random SPJ query inside the supported class: a chain/star of FK joins
/// (full componentwise equalities) plus up to two literal filters. Returned
/// query is already validated against the schema.
inline SqlQuery generate_query(const RelationalDatabase& db, int max_joins,
                               gen_detail::Rng& rng) {
  using namespace gen_detail;
  const RelationalSchema& schema = db.schema;
  SqlQuery q;
  int alias_counter = 1;
  auto add_alias = [&](const std::string& rel) {
    std::string alias = "t" + std::to_string(alias_counter++);
    q.from.emplace_back(rel, alias);
    return alias;
  };
  int start = pick(rng, 0, static_cast<int>(schema.relations.size()) - 1);
  add_alias(schema.relations[start].name);

  int want = pick(rng, 0, std::max(0, max_joins));
  for (int j = 0; j < want; ++j) {
    // candidate joins touching any alias already in FROM, either direction
    struct Cand {
      const ForeignKey* fk;
      std::string bound_alias;
      bool bound_is_source;
    };
    std::vector<Cand> cands;
    for (const auto& [rel, alias] : q.from) {
      for (const auto& r : schema.relations) {
        for (const auto& fk : r.foreign_keys) {
          if (fk.source_relation == rel) cands.push_back({&fk, alias, true});
          if (fk.target_relation == rel) cands.push_back({&fk, alias, false});
        }
      }
    }
    if (cands.empty()) break;
    const Cand& c = cands[pick(rng, 0, static_cast<int>(cands.size()) - 1)];
    std::string other =
        add_alias(c.bound_is_source ? c.fk->target_relation : c.fk->source_relation);
    std::string src_alias = c.bound_is_source ? c.bound_alias : other;
    std::string tgt_alias = c.bound_is_source ? other : c.bound_alias;
    for (std::size_t k = 0; k < c.fk->source_attrs.size(); ++k)
      q.where.push_back(SqlCondition{SqlOperand::column(src_alias, c.fk->source_attrs[k]),
                                     CmpOp::Eq,
                                     SqlOperand::column(tgt_alias, c.fk->target_attrs[k])});
  }

  auto relation_of = [&](const std::string& alias) -> const Relation& {
    for (const auto& [rel, a] : q.from)
      if (a == alias) return schema.get(rel);
    throw SchemaError("alias not found");
  };

  int nfilters = pick(rng, 0, 2);
  for (int f = 0; f < nfilters; ++f) {
    const auto& [rel, alias] = q.from[pick(rng, 0, static_cast<int>(q.from.size()) - 1)];
    const Relation& r = schema.get(rel);
    const auto& [attr, type] = r.attributes[pick(rng, 0, static_cast<int>(r.attributes.size()) - 1)];
    CmpOp op = CmpOp::Eq;
    if (type != AttrType::Boolean && type != AttrType::Object && chance(rng, 0.5)) {
      const CmpOp ops[] = {CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge};
      op = ops[pick(rng, 0, 4)];
    }
    // prefer values drawn from the instance so filters sometimes hit
    Value lit = Value::null();
    const auto& tuples = db.tuples_of(rel);
    if (!tuples.empty() && chance(rng, 0.7)) {
      const Tuple& t = tuples[pick(rng, 0, static_cast<int>(tuples.size()) - 1)];
      lit = t.values[*r.attr_index(attr)];
    }
    if (lit.is_null()) lit = gen_detail::random_value(rng, type);
    q.where.push_back(
        SqlCondition{SqlOperand::column(alias, attr), op, SqlOperand::lit(lit)});
  }

  int nitems = pick(rng, 1, 3);
  for (int i = 0; i < nitems; ++i) {
    const auto& [rel, alias] = q.from[pick(rng, 0, static_cast<int>(q.from.size()) - 1)];
    const Relation& r = relation_of(alias);
    const auto& [attr, type] =
        r.attributes[pick(rng, 0, static_cast<int>(r.attributes.size()) - 1)];
    (void)type;
    q.items.push_back(SqlItem{alias, attr, false});
  }
  q.distinct = chance(rng, 0.3);
  return validate_and_alias(std::move(q), schema);
}

}  // namespace rel2pg
