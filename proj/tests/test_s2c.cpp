#include <catch2/catch_amalgamated.hpp>

#include "hosp_fixture.hpp"
#include "rel2pg/s2c.hpp"

using namespace rel2pg;

namespace {

SqlQuery prepared(const std::string& text) {
  return validate_and_alias(parse_sql(text), fixtures::hosp_schema());
}

}  // namespace

TEST_CASE("join detection on the worked three-relation query") {
  SqlQuery q = prepared(
      "SELECT b.Name, p.Name FROM Admissions a, Doctors b, Patients p "
      "WHERE a.Doc_No = b.DoctorNo AND a.Pat_No = p.PatientNo");
  auto joins = detect_fk_joins(q, fixtures::hosp_schema());
  REQUIRE(joins.size() == 2);
  CHECK(joins[0].source_alias == "a");
  CHECK(joins[0].target_alias == "b");
  CHECK(joins[0].edge_label == "Admissions-Doctors");
  CHECK(joins[1].target_alias == "p");
}

TEST_CASE("equality between non-FK attributes is not a join") {
  SqlQuery q = prepared("SELECT d.Name FROM Doctors d, Patients p WHERE d.Name = p.Name");
  CHECK(detect_fk_joins(q, fixtures::hosp_schema()).empty());
}

TEST_CASE("join conditions written in either orientation are detected") {
  SqlQuery q = prepared(
      "SELECT p.Name FROM Patients p, Admissions a WHERE p.PatientNo = a.Pat_No");
  auto joins = detect_fk_joins(q, fixtures::hosp_schema());
  REQUIRE(joins.size() == 1);
  CHECK(joins[0].source_alias == "a");  // FK holder, regardless of written order
  CHECK(joins[0].target_alias == "p");
}

TEST_CASE("composite FK requires all components to be equated") {
  auto db = fixtures::campus();
  SqlQuery partial = validate_and_alias(
      parse_sql("SELECT c.Title FROM Enrollments e, Courses c WHERE e.C_Dept = c.Dept"),
      db.schema);
  CHECK(detect_fk_joins(partial, db.schema).empty());

  SqlQuery full = validate_and_alias(
      parse_sql("SELECT c.Title FROM Enrollments e, Courses c WHERE e.C_Dept = c.Dept AND "
                "e.C_No = c.CourseNo"),
      db.schema);
  REQUIRE(detect_fk_joins(full, db.schema).size() == 1);
}

TEST_CASE("translation of the date-filter example") {
  SqlQuery q = prepared(
      "SELECT p.Name FROM Patients p, Admissions a "
      "WHERE a.Pat_No = p.PatientNo AND a.Admi_date = '30/11/2021'");
  CypherQuery c = translate(q, fixtures::hosp_schema());
  CHECK(render_cypher(c) ==
        "MATCH (a:Admissions)-[:`Admissions-Patients`]->(p:Patients)\n"
        "WHERE a.Pat_No = p.PatientNo AND a.Admi_date = \"2021-11-30\"\n"
        "RETURN p.Name\n");
}

TEST_CASE("single-relation query becomes a single node pattern") {
  SqlQuery q = prepared("SELECT d.Name FROM Doctors d");
  CypherQuery c = translate(q, fixtures::hosp_schema());
  REQUIRE(c.match_patterns.size() == 1);
  CHECK(c.match_patterns[0].head == CyNode{"d", "Doctors"});
  CHECK(c.match_patterns[0].hops.empty());
  CHECK(c.where.empty());
}

TEST_CASE("three-relation star join folds into one path") {
  SqlQuery q = prepared(
      "SELECT b.Name, p.Name FROM Admissions a, Doctors b, Patients p "
      "WHERE a.Doc_No = b.DoctorNo AND a.Pat_No = p.PatientNo");
  CypherQuery c = translate(q, fixtures::hosp_schema());
  REQUIRE(c.match_patterns.size() == 1);
  CHECK(c.match_patterns[0].hops.size() == 2);
  // both edges leave the FK holder a
  CHECK(render_cypher(c).find("(p:Patients)<-[:`Admissions-Patients`]-(a:Admissions)"
                              "-[:`Admissions-Doctors`]->(b:Doctors)") != std::string::npos);
}

TEST_CASE("unjoined aliases stay as comma-separated patterns") {
  SqlQuery q = prepared("SELECT d.Name, p.Name FROM Doctors d, Patients p");
  CypherQuery c = translate(q, fixtures::hosp_schema());
  REQUIRE(c.match_patterns.size() == 2);
  CHECK(c.match_patterns[0].head.var == "d");
  CHECK(c.match_patterns[1].head.var == "p");
}

TEST_CASE("no WHERE condition is dropped by translation") {
  SqlQuery q = prepared(
      "SELECT b.Name FROM Admissions a, Doctors b "
      "WHERE a.Doc_No = b.DoctorNo AND a.AdmiNo > 1 AND b.Speciality = 'Cardiology'");
  CypherQuery c = translate(q, fixtures::hosp_schema());
  REQUIRE(c.where.size() == q.where.size());
  for (std::size_t i = 0; i < q.where.size(); ++i) {
    CHECK(c.where[i].op == q.where[i].op);
    CHECK(c.where[i].left.var == q.where[i].left.alias);
    CHECK(c.where[i].left.prop == q.where[i].left.attr);
  }
}

TEST_CASE("return items mirror SELECT order, DISTINCT carries over") {
  SqlQuery q = prepared("SELECT DISTINCT p.Name, a.AdmiNo FROM Patients p, Admissions a");
  CypherQuery c = translate(q, fixtures::hosp_schema());
  REQUIRE(c.return_items.size() == 2);
  CHECK(c.return_items[0] == CyReturnItem{"p", "Name", false});
  CHECK(c.return_items[1] == CyReturnItem{"a", "AdmiNo", false});
  CHECK(c.distinct);
}

TEST_CASE("disambiguated edge labels flow into patterns") {
  auto db = fixtures::flights();
  SqlQuery q = validate_and_alias(
      parse_sql("SELECT c.Name FROM Flights f, Cities c WHERE f.From_City = c.CityId"),
      db.schema);
  CypherQuery c = translate(q, db.schema);
  CHECK(render_cypher(c).find("`Flights-Cities#From_City`") != std::string::npos);
}
