// rel2pg: relational <-> property-graph migration and verification toolkit.
//
// Exit codes: 0 success / consistent / all properties hold; 1 usage error;
// 2 I/O or format error; 3 inconsistent database (check); 4 counterexample
// found (verify).

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rel2pg/eval.hpp"
#include "rel2pg/io.hpp"
#include "rel2pg/mapper.hpp"
#include "rel2pg/s2c.hpp"
#include "rel2pg/sql.hpp"
#include "rel2pg/verify.hpp"

namespace {

using namespace rel2pg;

int cmd_map(const std::string& in, const std::string& out, const std::string& script) {
  RelationalDatabase db = load_rdb(in);
  auto [gd, report] = complete_map(db);
  save_gdb(gd, out);
  if (!script.empty()) emit_cypher_script(gd, script);
  std::cerr << "mapped " << report.vertices << " vertices, " << report.edges << " edges\n";
  return 0;
}

int cmd_unmap(const std::string& in, const std::string& out) {
  GraphDatabase gd = load_gdb(in);
  RelationalDatabase db = complete_unmap(gd);
  save_rdb(db, out);
  return 0;
}

int cmd_translate(const std::string& schema_path, const std::string& sql_path,
                  const std::string& out) {
  RelationalDatabase db = load_rdb(schema_path);
  std::ifstream in(sql_path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + sql_path);
  std::stringstream buf;
  buf << in.rdbuf();
  SqlQuery q = validate_and_alias(parse_sql(buf.str()), db.schema);
  std::string text = render_cypher(translate(q, db.schema));
  if (out.empty())
    std::cout << text;
  else
    io_detail::write_file(out, text);
  return 0;
}

int cmd_check(const std::string& in) {
  bool consistent = false;
  if (is_relational_file(in)) {
    auto report = check_relational_consistency(load_rdb(in));
    consistent = report.consistent;
    for (const auto& v : report.violations)
      std::cerr << v.kind << " [" << v.subject << "] " << v.detail << "\n";
  } else {
    GraphDatabase gd = load_gdb(in);
    auto report = check_graph_consistency(gd.instance, gd.schema);
    consistent = report.consistent;
    for (const auto& v : report.structural)
      std::cerr << "structural: " << v.kind << " [" << v.subject << "] " << v.detail << "\n";
    for (const auto& v : report.violations)
      std::cerr << v.kind << " [" << v.subject << "] " << v.detail << "\n";
  }
  std::cout << (consistent ? "consistent" : "inconsistent") << "\n";
  return consistent ? 0 : 3;
}

nlohmann::ordered_json verdict_json(const PropertyVerdict& v) {
  nlohmann::ordered_json j;
  j["property"] = v.property;
  j["cases_run"] = v.cases_run;
  j["cases_passed"] = v.cases_passed;
  if (v.counterexample) {
    j["counterexample"] = {{"description", v.counterexample->description}};
    if (!v.counterexample->query.empty())
      j["counterexample"]["query"] = v.counterexample->query;
  }
  return j;
}

int cmd_verify(const std::string& db_path, std::uint64_t seed, int cases,
               const std::string& property, const std::string& json_out) {
  GeneratorConfig cfg;
  cfg.seed = seed;
  std::vector<PropertyVerdict> verdicts;
  if (property == "ip" || property == "all")
    verdicts.push_back(verify_information_preservation(cfg, cases));
  if (property == "sp" || property == "all")
    verdicts.push_back(verify_semantic_preservation(cfg, cases));
  if (property == "qp" || property == "all")
    verdicts.push_back(verify_query_preservation(cfg, cases));

  // An explicit database contributes one extra fixed case per property.
  if (!db_path.empty()) {
    RelationalDatabase db = load_rdb(db_path);
    if (property == "ip" || property == "all") {
      PropertyVerdict v;
      v.property = "IP(db)";
      v.cases_run = 1;
      auto [gd, rep] = complete_map(db);
      (void)rep;
      if (rdb_to_string(complete_unmap(gd)) == rdb_to_string(db))
        v.cases_passed = 1;
      else
        v.counterexample = Counterexample{"round-trip differs for " + db_path, "", ""};
      verdicts.push_back(std::move(v));
    }
    if (property == "sp" || property == "all") {
      PropertyVerdict v;
      v.property = "SP(db)";
      v.cases_run = 1;
      bool rel = check_relational_consistency(db).consistent;
      bool graph =
          check_graph_consistency(instance_map(db), schema_map(db.schema)).consistent;
      if (rel == graph)
        v.cases_passed = 1;
      else
        v.counterexample = Counterexample{"verdicts disagree for " + db_path, "", ""};
      verdicts.push_back(std::move(v));
    }
  }

  bool all_pass = true;
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& v : verdicts) {
    all_pass = all_pass && v.passed();
    std::cout << v.property << ": " << v.cases_passed << "/" << v.cases_run
              << (v.passed() ? " pass" : " FAIL") << "\n";
    if (v.counterexample) std::cout << "  counterexample: " << v.counterexample->description << "\n";
    out.push_back(verdict_json(v));
  }
  if (!json_out.empty()) io_detail::write_file(json_out, out.dump(2) + "\n");
  return all_pass ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relational to property-graph migration toolkit"};
  app.require_subcommand(1);

  std::string in, out, script, schema_path, sql_path, db_path, json_out;
  std::string property = "all";
  std::uint64_t seed = 0;
  int cases = 100;

  auto* map_cmd = app.add_subcommand("map", "map a relational database to a graph database");
  map_cmd->add_option("--in", in, "relational database JSON")->required();
  map_cmd->add_option("--out", out, "graph database JSON to write")->required();
  map_cmd->add_option("--cypher-script", script, "also emit a Neo4j load script");

  auto* unmap_cmd = app.add_subcommand("unmap", "invert a mapped graph database");
  unmap_cmd->add_option("--in", in, "graph database JSON")->required();
  unmap_cmd->add_option("--out", out, "relational database JSON to write")->required();

  auto* tr_cmd = app.add_subcommand("translate", "translate a SQL query to Cypher");
  tr_cmd->add_option("--schema", schema_path, "relational database JSON (schema source)")
      ->required();
  tr_cmd->add_option("--sql", sql_path, "file holding the SQL query")->required();
  tr_cmd->add_option("--out", out, "Cypher output file (default: stdout)");

  auto* check_cmd = app.add_subcommand("check", "check consistency of a database file");
  check_cmd->add_option("--in", in, "relational or graph database JSON")->required();

  auto* verify_cmd = app.add_subcommand("verify", "verify the mapping properties");
  verify_cmd->add_option("--db", db_path, "fixed database to include as a case");
  verify_cmd->add_option("--seed", seed, "generator seed (default 0)");
  verify_cmd->add_option("--cases", cases, "random cases per property (default 100)");
  verify_cmd->add_option("--property", property, "ip|qp|sp|all (default all)")
      ->check(CLI::IsMember({"ip", "qp", "sp", "all"}));
  verify_cmd->add_option("--json", json_out, "write machine-readable verdicts here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (map_cmd->parsed()) return cmd_map(in, out, script);
    if (unmap_cmd->parsed()) return cmd_unmap(in, out);
    if (tr_cmd->parsed()) return cmd_translate(schema_path, sql_path, out);
    if (check_cmd->parsed()) return cmd_check(in);
    if (verify_cmd->parsed()) return cmd_verify(db_path, seed, cases, property, json_out);
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
