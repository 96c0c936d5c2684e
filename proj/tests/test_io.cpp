#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "hosp_fixture.hpp"
#include "rel2pg/generator.hpp"
#include "rel2pg/io.hpp"
#include "rel2pg/mapper.hpp"

using namespace rel2pg;

namespace {

std::filesystem::path tmp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("relational JSON round-trip is exact") {
  auto db = fixtures::hosp();
  auto back = rdb_from_json(rdb_to_json(db));
  CHECK(back == db);
  CHECK(rdb_to_string(back) == rdb_to_string(db));
}

TEST_CASE("graph JSON round-trip is exact") {
  auto [g, rep] = complete_map(fixtures::hosp());
  auto back = gdb_from_json(gdb_to_json(g));
  CHECK(back == g);
  CHECK(gdb_to_string(back) == gdb_to_string(g));
}

TEST_CASE("serialization is canonical: save(load(save)) == save") {
  for (std::uint64_t seed : {1u, 7u, 23u}) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    gen_detail::Rng rng(seed);
    auto db = generate_database(cfg, rng);
    std::string once = rdb_to_string(db);
    CHECK(rdb_to_string(rdb_from_json(io_detail::json::parse(once))) == once);
  }
}

TEST_CASE("file save and load") {
  auto db = fixtures::hosp();
  auto p = tmp_path("rel2pg_io_test_rdb.json");
  save_rdb(db, p.string());
  CHECK(load_rdb(p.string()) == db);
  CHECK(is_relational_file(p.string()));

  auto [g, rep] = complete_map(db);
  auto pg = tmp_path("rel2pg_io_test_gdb.json");
  save_gdb(g, pg.string());
  CHECK(load_gdb(pg.string()) == g);
  CHECK_FALSE(is_relational_file(pg.string()));
  std::filesystem::remove(p);
  std::filesystem::remove(pg);
}

TEST_CASE("version gate accepts minor drift, rejects major drift") {
  auto j = rdb_to_json(fixtures::hosp());
  j["version"] = "rel2pg/1.9-experimental";
  CHECK_NOTHROW(rdb_from_json(j));
  j["version"] = "rel2pg/2";
  CHECK_THROWS_AS(rdb_from_json(j), FormatError);
  j.erase("version");
  CHECK_THROWS_AS(rdb_from_json(j), FormatError);
}

TEST_CASE("malformed relational input: duplicate tid") {
  auto j = rdb_to_json(fixtures::hosp());
  j["instance"]["Doctors"][1]["tid"] = 1;
  CHECK_THROWS_WITH(rdb_from_json(j), Catch::Matchers::ContainsSubstring("duplicate tid"));
}

TEST_CASE("malformed relational input: undeclared and missing attributes") {
  auto j = rdb_to_json(fixtures::hosp());
  j["instance"]["Patients"][0]["Age"] = 33;
  CHECK_THROWS_WITH(rdb_from_json(j), Catch::Matchers::ContainsSubstring("undeclared attribute Age"));

  j = rdb_to_json(fixtures::hosp());
  j["instance"]["Patients"][0].erase("Name");
  CHECK_THROWS_WITH(rdb_from_json(j), Catch::Matchers::ContainsSubstring("missing attribute Name"));
}

TEST_CASE("malformed relational input: value type mismatch names its location") {
  auto j = rdb_to_json(fixtures::hosp());
  j["instance"]["Doctors"][0]["DoctorNo"] = "one";
  CHECK_THROWS_WITH(rdb_from_json(j), Catch::Matchers::ContainsSubstring("DoctorNo"));
}

TEST_CASE("malformed graph input: dangling edge endpoint") {
  auto [g, rep] = complete_map(fixtures::hosp());
  auto j = gdb_to_json(g);
  j["instance_graph"]["edges"][0]["target_id"] = 9999;
  CHECK_THROWS_AS(gdb_from_json(j), FormatError);
}

TEST_CASE("malformed graph input: undeclared property") {
  auto [g, rep] = complete_map(fixtures::hosp());
  auto j = gdb_to_json(g);
  j["instance_graph"]["vertices"][0]["properties"]["ghost"] = 1;
  CHECK_THROWS_WITH(gdb_from_json(j), Catch::Matchers::ContainsSubstring("undeclared property"));
}

TEST_CASE("dates serialize as ISO strings") {
  auto j = rdb_to_json(fixtures::hosp());
  CHECK(j["instance"]["Admissions"][0]["Admi_date"] == "2021-11-30");
}

TEST_CASE("cypher script shape") {
  auto db = fixtures::hosp();
  auto [g, rep] = complete_map(db);
  std::string script = cypher_script(g);

  std::size_t creates = 0, matches = 0;
  for (std::size_t pos = 0; (pos = script.find("CREATE ", pos)) != std::string::npos; ++pos)
    ++creates;
  for (std::size_t pos = 0; (pos = script.find("MATCH ", pos)) != std::string::npos; ++pos)
    ++matches;
  // One CREATE per vertex and per edge; each edge needs a MATCH of both ends.
  CHECK(creates == g.instance.vertices.size() + g.instance.edges.size());
  CHECK(matches == g.instance.edges.size());
  // Null properties are omitted, not emitted as literals.
  CHECK(script.find("Doc_No: null") == std::string::npos);
  CHECK(script.find("date(\"2021-11-30\")") != std::string::npos);
  CHECK(script.find("`Admissions-Doctors`") != std::string::npos);
}

TEST_CASE("cypher script for an empty instance has no statements") {
  auto db = fixtures::hosp();
  for (auto& rel : db.instance.tuples) rel.clear();
  auto [g, rep] = complete_map(db);
  std::string script = cypher_script(g);
  CHECK(script.find("CREATE") == std::string::npos);
  CHECK(script.find("MATCH") == std::string::npos);
}

TEST_CASE("cypher script rejects control characters in strings") {
  auto db = fixtures::hosp();
  db.instance.tuples[2][0].values[1] = Value::str(std::string("bad\x01name"));
  auto [g, rep] = complete_map(db);
  CHECK_THROWS_AS(cypher_script(g), FormatError);
}
