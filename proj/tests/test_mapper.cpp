#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "hosp_fixture.hpp"
#include "rel2pg/generator.hpp"
#include "rel2pg/io.hpp"
#include "rel2pg/mapper.hpp"

using namespace rel2pg;

TEST_CASE("schema mapping of the hospital fixture") {
  SchemaGraph sg = schema_map(fixtures::hosp_schema());
  REQUIRE(sg.vertices.size() == 4);
  REQUIRE(sg.edges.size() == 3);

  const SVertex& adm = *sg.find_vertex("Admissions");
  CHECK(adm.pk == std::vector<std::string>{"AdmiNo"});
  CHECK(adm.attrs.back() == std::pair<std::string, AttrType>{"vid", AttrType::Integer});

  const SEdge* ad = nullptr;
  for (const auto& e : sg.edges)
    if (e.label == "Admissions-Doctors") ad = &e;
  REQUIRE(ad != nullptr);
  CHECK(ad->fk_source == std::vector<std::string>{"Doc_No"});
  CHECK(ad->fk_target == std::vector<std::string>{"DoctorNo"});
  CHECK(ad->source_label == "Admissions");
  CHECK(ad->target_label == "Doctors");
}

TEST_CASE("schema mapping without foreign keys is edgeless") {
  RelationalSchema s;
  Relation r;
  r.name = "Solo";
  r.attributes = {{"id", AttrType::Integer}};
  r.primary_key = {"id"};
  s.relations = {r};
  SchemaGraph sg = schema_map(s);
  CHECK(sg.edges.empty());
  CHECK(sg.vertices.size() == 1);
}

TEST_CASE("duplicate relation pairs get disambiguated edge labels") {
  auto db = fixtures::flights();
  SchemaGraph sg = schema_map(db.schema);
  std::set<std::string> labels;
  for (const auto& e : sg.edges) labels.insert(e.label);
  CHECK(labels == std::set<std::string>{"Flights-Cities#From_City", "Flights-Cities#To_City"});
}

namespace {

// Nested-loop FK-join oracle: the set of (source tid, target tid, label)
// triples the instance mapping must realize as edges.
std::set<std::tuple<std::string, std::int64_t, std::int64_t>> oracle_edges(
    const RelationalDatabase& db) {
  std::set<std::tuple<std::string, std::int64_t, std::int64_t>> out;
  for (const auto& r : db.schema.relations) {
    for (const auto& fk : r.foreign_keys) {
      const Relation& tgt = db.schema.get(fk.target_relation);
      for (const auto& t : db.tuples_of(r.name)) {
        for (const auto& u : db.tuples_of(tgt.name)) {
          bool all = true;
          for (std::size_t k = 0; k < fk.source_attrs.size(); ++k) {
            const Value& a = t.values[*r.attr_index(fk.source_attrs[k])];
            const Value& b = u.values[*tgt.attr_index(fk.target_attrs[k])];
            if (a.is_null() || b.is_null() || !(a == b)) all = false;
          }
          if (all) out.insert({fk_edge_label(db.schema, fk), t.tid, u.tid});
        }
      }
    }
  }
  return out;
}

std::set<std::tuple<std::string, std::int64_t, std::int64_t>> mapped_edges(
    const RelationalDatabase& db, const InstanceGraph& ig) {
  std::set<std::tuple<std::string, std::int64_t, std::int64_t>> out;
  for (const auto& e : ig.edges) {
    const IVertex* s = ig.find_vertex(e.source_id);
    const IVertex* t = ig.find_vertex(e.target_id);
    out.insert({e.label, s->find_prop("vid")->as_int(), t->find_prop("vid")->as_int()});
  }
  (void)db;
  return out;
}

}  // namespace

TEST_CASE("instance mapping materializes tuples and FK edges") {
  auto db = fixtures::hosp();
  InstanceGraph ig = instance_map(db);

  std::size_t expected_vertices = 0;
  for (const auto& tuples : db.instance.tuples) expected_vertices += tuples.size();
  CHECK(ig.vertices.size() == expected_vertices);

  CHECK(mapped_edges(db, ig) == oracle_edges(db));

  SECTION("null FK values produce a Null property and no edge") {
    const IVertex* v5 = nullptr;
    for (const auto& v : ig.vertices)
      if (v.label == "Admissions" && v.find_prop("vid")->as_int() == 5) v5 = &v;
    REQUIRE(v5 != nullptr);
    CHECK(v5->find_prop("Doc_No")->is_null());
    for (const auto& e : ig.edges)
      CHECK_FALSE((e.label == "Admissions-Doctors" && e.source_id == v5->id));
  }
}

TEST_CASE("dangling references map to a vertex without the edge") {
  auto db = fixtures::hosp();
  RelationalInstance inst = db.instance;
  inst.tuples[0].push_back(
      {6, {Value::integer(6), Value::null(), Value::integer(99), Value::null()}});
  db = make_database(db.schema, std::move(inst));
  InstanceGraph ig = instance_map(db);
  CHECK(mapped_edges(db, ig) == oracle_edges(db));
  CHECK(ig.vertices.size() == 16);  // the dangling tuple still maps
}

TEST_CASE("edge set equals the oracle on random instances") {
  for (int i = 0; i < 30; ++i) {
    auto rng = gen_detail::Rng(7000 + i);
    GeneratorConfig cfg;
    cfg.max_tuples = 20;
    if (i % 3 == 0) cfg.injection = Inconsistency::FkDangling;
    auto db = generate_database(cfg, rng);
    InstanceGraph ig = instance_map(db);
    INFO("case " << i);
    CHECK(mapped_edges(db, ig) == oracle_edges(db));
    std::size_t expected = 0;
    for (const auto& t : db.instance.tuples) expected += t.size();
    CHECK(ig.vertices.size() == expected);
  }
}

TEST_CASE("complete mapping validates against its own schema graph") {
  auto [gd, report] = complete_map(fixtures::hosp());
  CHECK(validate_instance_graph(gd.instance, gd.schema).empty());
  CHECK(report.vertices == gd.instance.vertices.size());
  CHECK(report.edges == gd.instance.edges.size());
}

TEST_CASE("empty and tiny databases map trivially") {
  RelationalSchema s;
  Relation r;
  r.name = "Solo";
  r.attributes = {{"id", AttrType::Integer}};
  r.primary_key = {"id"};
  s.relations = {r};
  RelationalInstance inst;
  inst.tuples.push_back({});
  auto [gd_empty, rep1] = complete_map(make_database(s, inst));
  (void)rep1;
  CHECK(gd_empty.instance.vertices.empty());
  CHECK(gd_empty.schema.vertices.size() == 1);

  inst.tuples[0].push_back({1, {Value::integer(1)}});
  auto [gd_one, rep2] = complete_map(make_database(s, inst));
  (void)rep2;
  CHECK(gd_one.instance.vertices.size() == 1);
  CHECK(gd_one.instance.edges.empty());
}

TEST_CASE("schema round-trip is the identity") {
  auto schema = fixtures::hosp_schema();
  CHECK(schema_unmap(schema_map(schema)) == schema);

  SECTION("disambiguated labels recover both foreign keys") {
    auto fl = fixtures::flights().schema;
    CHECK(schema_unmap(schema_map(fl)) == fl);
  }
  SECTION("edgeless graph yields an FK-free schema") {
    RelationalSchema s;
    Relation r;
    r.name = "Solo";
    r.attributes = {{"x", AttrType::Float}};
    s.relations = {r};
    CHECK(schema_unmap(schema_map(s)) == s);
  }
}

TEST_CASE("schema unmap rejects graphs without the vid pair") {
  SchemaGraph sg;
  sg.vertices.push_back(SVertex{"X", {{"a", AttrType::Integer}}, {}});
  CHECK_THROWS_AS(schema_unmap(sg), FormatError);
}

TEST_CASE("instance round-trip is the identity") {
  auto db = fixtures::hosp();
  SchemaGraph sg = schema_map(db.schema);
  CHECK(instance_unmap(instance_map(db), sg) == db.instance);

  SECTION("inconsistent databases round-trip identically too") {
    RelationalInstance inst = db.instance;
    inst.tuples[0][1].values[0] = inst.tuples[0][0].values[0];  // duplicate AdmiNo
    auto bad = make_database(db.schema, std::move(inst));
    CHECK(instance_unmap(instance_map(bad), sg) == bad.instance);
  }
  SECTION("empty graph yields an empty instance") {
    RelationalInstance empty;
    empty.tuples.resize(db.schema.relations.size());
    auto empty_db = make_database(db.schema, empty);
    CHECK(instance_unmap(instance_map(empty_db), sg) == empty_db.instance);
  }
}

TEST_CASE("complete round-trip on random databases, inconsistent ones included") {
  for (int i = 0; i < 60; ++i) {
    auto rng = gen_detail::Rng(9000 + i);
    GeneratorConfig cfg;
    if (i % 2 == 1) cfg.injection = static_cast<Inconsistency>((i / 2) % 3);
    auto db = generate_database(cfg, rng);
    auto [gd, report] = complete_map(db);
    (void)report;
    INFO("case " << i);
    CHECK(complete_unmap(gd) == db);
  }
}

TEST_CASE("mapping is deterministic byte for byte") {
  auto db = fixtures::hosp();
  auto [a, ra] = complete_map(db);
  auto [b, rb] = complete_map(db);
  (void)ra;
  (void)rb;
  CHECK(gdb_to_string(a) == gdb_to_string(b));
}

TEST_CASE("tuple/vertex bijection: vid multiset per label equals tid multiset") {
  auto db = fixtures::hosp();
  InstanceGraph ig = instance_map(db);
  for (std::size_t ri = 0; ri < db.schema.relations.size(); ++ri) {
    std::multiset<std::int64_t> tids, vids;
    for (const auto& t : db.instance.tuples[ri]) tids.insert(t.tid);
    for (const auto& v : ig.vertices)
      if (v.label == db.schema.relations[ri].name) vids.insert(v.find_prop("vid")->as_int());
    CHECK(tids == vids);
  }
}
