#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rel2pg/eval.hpp"
#include "rel2pg/generator.hpp"
#include "rel2pg/io.hpp"
#include "rel2pg/mapper.hpp"
#include "rel2pg/s2c.hpp"

namespace rel2pg {

/// Seeded implementation faults for mutation testing. Each verifier passes
/// the relevant flag down; a correct build runs with all of them off.
struct FaultInjection {
  bool omit_null_props = false;       // IM drops Null-valued properties
  bool reverse_eval_edges = false;    // Cypher evaluation flips edge direction
  bool disable_fk_edge_rule = false;  // graph consistency without rule (c)
};

struct Counterexample {
  std::string description;
  std::string db_json;      // canonical serialization of the failing database
  std::string query;        // present for query-preservation failures
};

struct PropertyVerdict {
  std::string property;  // "IP", "QP" or "SP"
  int cases_run = 0;
  int cases_passed = 0;
  std::optional<Counterexample> counterexample;  // first failure only

  bool passed() const { return cases_passed == cases_run; }
};

namespace verify_detail {

inline gen_detail::Rng case_rng(std::uint64_t seed, int case_index) {
  // one independent stream per case, deterministic in (seed, index)
  std::seed_seq seq{seed, static_cast<std::uint64_t>(case_index) + 1};
  return gen_detail::Rng(seq);
}

inline GeneratorConfig with_injection(GeneratorConfig cfg, std::optional<Inconsistency> inj) {
  cfg.injection = inj;
  return cfg;
}

}  // namespace verify_detail

/// Information preservation: unmapping the mapped database reproduces it
/// byte-for-byte under canonical serialization. Half the cases carry
/// injected inconsistencies;
/// information preservation must hold regardless of consistency.
inline PropertyVerdict verify_information_preservation(const GeneratorConfig& cfg, int cases,
                                                       const FaultInjection& faults = {}) {
  PropertyVerdict verdict;
  verdict.property = "IP";
  const Inconsistency kinds[] = {Inconsistency::PkNull, Inconsistency::PkDup,
                                 Inconsistency::FkDangling};
  for (int i = 0; i < cases; ++i) {
    auto rng = verify_detail::case_rng(cfg.seed, i);
    auto case_cfg = verify_detail::with_injection(
        cfg, i % 2 ==  1 ? std::optional<Inconsistency>(kinds[(i / 2) % 3]) : std::nullopt);
    RelationalDatabase db = generate_database(case_cfg, rng);
    ++verdict.cases_run;
    std::string before = rdb_to_string(db);
    bool ok = false;
    std::string why;
    try {
      auto [gd, report] = complete_map(db, InstanceMapOptions{faults.omit_null_props});
      (void)report;
      RelationalDatabase back = complete_unmap(gd);
      std::string after = rdb_to_string(back);
      ok = before == after;
      if (!ok) why = "round-trip serialization differs";
    } catch (const Error& e) {
      why = std::string("inverse mapping failed: ") + e.what();
    }
    if (ok) {
      ++verdict.cases_passed;
    } else if (!verdict.counterexample) {
      verdict.counterexample = Counterexample{
          "case " + std::to_string(i) + ": " + why, before, ""};
    }
  }
  return verdict;
}

/// Semantic preservation: relational and graph consistency verdicts agree.
/// Even cases are consistent by construction, odd cases cycle the three
/// injected fault kinds.
inline PropertyVerdict verify_semantic_preservation(const GeneratorConfig& cfg, int cases,
                                                    const FaultInjection& faults = {}) {
  PropertyVerdict verdict;
  verdict.property = "SP";
  const Inconsistency kinds[] = {Inconsistency::PkNull, Inconsistency::PkDup,
                                 Inconsistency::FkDangling};
  for (int i = 0; i < cases; ++i) {
    auto rng = verify_detail::case_rng(cfg.seed, i);
    auto case_cfg = verify_detail::with_injection(
        cfg, i % 2 == 1 ? std::optional<Inconsistency>(kinds[(i / 2) % 3]) : std::nullopt);
    RelationalDatabase db = generate_database(case_cfg, rng);
    ++verdict.cases_run;
    bool rel = check_relational_consistency(db).consistent;
    SchemaGraph sg = schema_map(db.schema);
    InstanceGraph ig = instance_map(db);
    GraphConsistencyOptions opts;
    opts.require_fk_edges = !faults.disable_fk_edge_rule;
    bool graph = check_graph_consistency(ig, sg, opts).consistent;
    if (rel == graph) {
      ++verdict.cases_passed;
    } else if (!verdict.counterexample) {
      verdict.counterexample = Counterexample{
          "case " + std::to_string(i) + ": relational " + (rel ? "consistent" : "inconsistent") +
              " but graph " + (graph ? "consistent" : "inconsistent"),
          rdb_to_string(db), ""};
    }
  }
  return verdict;
}

/// Query preservation: dedup'd result sets of a random SPJ query and its
/// translation agree on the mapped graph.
inline PropertyVerdict verify_query_preservation(const GeneratorConfig& cfg, int cases,
                                                 const FaultInjection& faults = {}) {
  PropertyVerdict verdict;
  verdict.property = "QP";
  for (int i = 0; i < cases; ++i) {
    auto rng = verify_detail::case_rng(cfg.seed, i);
    RelationalDatabase db =
        generate_database(verify_detail::with_injection(cfg, std::nullopt), rng);
    SqlQuery q = generate_query(db, cfg.max_joins, rng);
    ++verdict.cases_run;
    InstanceGraph ig = instance_map(db, InstanceMapOptions{faults.omit_null_props});
    CypherQuery c = translate(q, db.schema);
    ResultTable rs = eval_sql(q, db);
    ResultTable rc = eval_cypher(c, ig, CypherEvalOptions{faults.reverse_eval_edges});
    MatchReport m = compare_results(dedup(rs), dedup(rc));
    if (m.verdict) {
      ++verdict.cases_passed;
    } else if (!verdict.counterexample) {
      std::string why = "case " + std::to_string(i) + ": " +
                        std::to_string(m.only_in_a.size()) + " rows only in SQL result, " +
                        std::to_string(m.only_in_b.size()) + " rows only in Cypher result";
      verdict.counterexample = Counterexample{why, rdb_to_string(db), render_sql(q)};
    }
  }
  return verdict;
}

}  // namespace rel2pg
