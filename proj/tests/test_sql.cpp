#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "hosp_fixture.hpp"
#include "rel2pg/generator.hpp"
#include "rel2pg/sql.hpp"

using namespace rel2pg;

TEST_CASE("minimal query") {
  SqlQuery q = parse_sql("SELECT p.Name FROM Patients AS p");
  REQUIRE(q.items.size() == 1);
  CHECK(q.items[0] == SqlItem{"p", "Name", false});
  REQUIRE(q.from.size() == 1);
  CHECK(q.from[0] == std::pair<std::string, std::string>{"Patients", "p"});
  CHECK(q.where.empty());
  CHECK_FALSE(q.distinct);
}

TEST_CASE("three-relation join query") {
  SqlQuery q = parse_sql(
      "SELECT b.Name, p.Name FROM Admissions a, Doctors b, Patients p "
      "WHERE a.Doc_No = b.DoctorNo AND a.Pat_No = p.PatientNo");
  CHECK(q.from.size() == 3);
  REQUIRE(q.where.size() == 2);
  CHECK(q.where[0].left == SqlOperand::column("a", "Doc_No"));
  CHECK(q.where[0].right == SqlOperand::column("b", "DoctorNo"));
}

TEST_CASE("keywords are case-insensitive, strings take either quote") {
  SqlQuery q = parse_sql("select distinct p.Name from Patients as p where p.Name = \"Bob\"");
  CHECK(q.distinct);
  REQUIRE(q.where.size() == 1);
  CHECK(q.where[0].right.literal == Value::str("Bob"));
}

TEST_CASE("literal on the left is flipped into canonical form") {
  SqlQuery q = parse_sql("SELECT a.AdmiNo FROM Admissions a WHERE 3 < a.AdmiNo");
  REQUIRE(q.where.size() == 1);
  CHECK(q.where[0].left == SqlOperand::column("a", "AdmiNo"));
  CHECK(q.where[0].op == CmpOp::Gt);
}

TEST_CASE("unsupported constructs are rejected loudly") {
  CHECK_THROWS_AS(parse_sql("SELECT * FROM t WHERE x IN (1,2)"), UnsupportedConstructError);
  CHECK_THROWS_AS(parse_sql("SELECT * FROM t WHERE a = 1 OR b = 2"), UnsupportedConstructError);
  CHECK_THROWS_AS(parse_sql("SELECT * FROM t WHERE NOT a = 1"), UnsupportedConstructError);
  CHECK_THROWS_AS(parse_sql("SELECT * FROM t GROUP BY x"), UnsupportedConstructError);
  CHECK_THROWS_AS(parse_sql("SELECT * FROM t JOIN s"), UnsupportedConstructError);

  try {
    parse_sql("SELECT * FROM t WHERE x IN (1)");
    FAIL("expected UnsupportedConstructError");
  } catch (const UnsupportedConstructError& e) {
    CHECK(e.construct == "IN");
  }
}

TEST_CASE("syntax errors carry a position") {
  try {
    parse_sql("SELECT FROM t");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
    CHECK(e.column > 1);
  }
}

TEST_CASE("validation assigns deterministic aliases") {
  auto schema = fixtures::hosp_schema();
  SqlQuery q = validate_and_alias(parse_sql("SELECT Speciality FROM Doctors"), schema);
  REQUIRE(q.from.size() == 1);
  CHECK(q.from[0].second == "r1");
  CHECK(q.items[0] == SqlItem{"r1", "Speciality", false});

  SECTION("generated names avoid collisions with explicit aliases") {
    SqlQuery q2 = validate_and_alias(
        parse_sql("SELECT r1.Name FROM Patients AS r1, Doctors"), schema);
    CHECK(q2.from[1].second == "r2");
  }
}

TEST_CASE("validation rejects unknown names and ambiguity") {
  auto schema = fixtures::hosp_schema();
  CHECK_THROWS_AS(validate_and_alias(parse_sql("SELECT x.y FROM Nowhere x"), schema),
                  SchemaError);
  CHECK_THROWS_AS(validate_and_alias(parse_sql("SELECT p.Oops FROM Patients p"), schema),
                  SchemaError);
  // "Name" exists in both Doctors and Patients
  CHECK_THROWS_AS(
      validate_and_alias(parse_sql("SELECT Name FROM Patients p, Doctors d"), schema),
      SchemaError);
}

TEST_CASE("type checking of comparisons") {
  auto schema = fixtures::hosp_schema();
  // Date column vs integer literal
  CHECK_THROWS_AS(validate_and_alias(
                      parse_sql("SELECT a.AdmiNo FROM Admissions a WHERE a.Admi_date = 5"),
                      schema),
                  SchemaError);
  // Date column vs date-shaped string: coerced, both forms accepted
  SqlQuery q = validate_and_alias(
      parse_sql("SELECT a.AdmiNo FROM Admissions a WHERE a.Admi_date = '30/11/2021'"), schema);
  CHECK(q.where[0].right.literal == Value::date(Date{2021, 11, 30}));
  SqlQuery q2 = validate_and_alias(
      parse_sql("SELECT a.AdmiNo FROM Admissions a WHERE a.Admi_date = '2021-11-30'"), schema);
  CHECK(q2.where[0].right.literal == q.where[0].right.literal);
  // attribute-to-attribute mismatch
  CHECK_THROWS_AS(
      validate_and_alias(
          parse_sql("SELECT a.AdmiNo FROM Admissions a WHERE a.AdmiNo = a.Admi_date"), schema),
      SchemaError);
}

TEST_CASE("star expansion follows declared attribute order") {
  auto schema = fixtures::hosp_schema();
  SqlQuery q = validate_and_alias(parse_sql("SELECT * FROM Doctors d"), schema);
  REQUIRE(q.items.size() == 3);
  CHECK(q.items[0].attr == "DoctorNo");
  CHECK(q.items[2].attr == "Speciality");

  SqlQuery q2 = validate_and_alias(parse_sql("SELECT p.* FROM Patients p, Doctors d"), schema);
  REQUIRE(q2.items.size() == 2);
  CHECK(q2.items[0] == SqlItem{"p", "PatientNo", false});
}

TEST_CASE("parse-render-parse is a fixpoint") {
  const char* samples[] = {
      "SELECT p.Name FROM Patients AS p",
      "SELECT DISTINCT a.AdmiNo, d.Name FROM Admissions AS a, Doctors AS d WHERE a.Doc_No = "
      "d.DoctorNo AND a.AdmiNo > 2",
      "SELECT * FROM Doctors",
      "SELECT d.* FROM Doctors AS d WHERE d.Name <> 'X'",
  };
  for (const char* s : samples) {
    SqlQuery once = parse_sql(s);
    SqlQuery twice = parse_sql(render_sql(once));
    INFO(s);
    CHECK(once == twice);
  }
}

TEST_CASE("random valid queries validate; mutated ones fail") {
  for (int i = 0; i < 50; ++i) {
    auto rng = gen_detail::Rng(3100 + i);
    GeneratorConfig cfg;
    cfg.max_tuples = 5;
    auto db = generate_database(cfg, rng);
    SqlQuery q = generate_query(db, 3, rng);
    // already validated by the generator; re-parse through the renderer
    SqlQuery reparsed = validate_and_alias(parse_sql(render_sql(q)), db.schema);
    CHECK(reparsed.from == q.from);
    CHECK(reparsed.items == q.items);

    SqlQuery broken = q;
    if (!broken.items.empty()) {
      broken.items[0].attr = "no_such_attr";
      CHECK_THROWS_AS(validate_and_alias(broken, db.schema), SchemaError);
    }
  }
}
