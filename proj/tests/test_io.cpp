#include <catch_amalgamated.hpp>

#include "cartan/json_io.hpp"

using namespace cartan;

namespace {
NatMatrix M(std::vector<std::vector<Entry>> rows) { return NatMatrix::from_rows(rows); }
}  // namespace

TEST_CASE("matrix json round trip") {
  const auto a = M({{0, 2}, {2, 0}});
  CHECK(matrix_to_json(a).dump() == "[[0,2],[2,0]]");
  CHECK(matrix_from_json(matrix_to_json(a)) == a);
  CHECK_THROWS_AS(matrix_from_json(json::parse("[[1,2],[3]]")), ParseError);
  CHECK_THROWS_AS(matrix_from_json(json::parse("[[1,-2]]")), ParseError);
  CHECK_THROWS_AS(matrix_from_json(json::parse("{\"a\":1}")), ParseError);
}

TEST_CASE("class json") {
  const MarginSpec spec(2, 2, 2, 2);
  const auto keys = enumerate_congruence_classes(spec);
  CHECK(class_to_json(keys[0], spec).dump() == R"({"canonical":[[0,2],[2,0]],"spec":{"a":2,"b":2,"c":2,"d":2}})");
}

TEST_CASE("graph json") {
  const auto g = graph_from_matrix(M({{1, 2, 0}}));
  const auto j = graph_to_json(g);
  CHECK(j.dump() == R"({"rows":1,"cols":3,"mult":[[1,2,0]]})");
  CHECK(graph_from_json(j).multiplicity() == g.multiplicity());
  CHECK_THROWS_AS(graph_from_json(json::parse(R"({"rows":2,"cols":3,"mult":[[1,2,0]]})")), ParseError);
  CHECK_THROWS_AS(graph_from_json(json::parse(R"({"rows":1})")), ParseError);
}

TEST_CASE("homeo json") {
  const auto h = homeo_type(M({{1, 1}, {1, 1}}));
  CHECK(homeo_to_json(h).dump() == R"({"circles":1,"core":{"vertices":0,"edges":[]}})");
}

TEST_CASE("report json conforms to the schema") {
  for (auto p : {Params(2, 2, 1), Params(2, 2, 2), Params(2, 5, 1), Params(3, 3, 1), Params(1, 3, 2)}) {
    const auto j = report_to_json(count_cartan_classes(p));
    CHECK_FALSE(validate_report_json(j));
    CHECK_FALSE(validate_report_json(json::parse(j.dump())));
  }
  const auto j = report_to_json(count_cartan_classes(Params(2, 2, 1)));
  CHECK(j["class_count"] == 2);
  CHECK(j["oracle_count"] == 2);
  CHECK(j["formula"]["name"] == "floor(n/2)+1");
  CHECK(j["classes"][0]["blocks"] == json::array({1, 1}));
  CHECK(report_to_json(count_cartan_classes(Params(2, 5, 1)))["oracle_count"].is_null());
  CHECK(report_to_json(count_cartan_classes(Params(3, 3, 1)))["formula"].is_null());
}

TEST_CASE("schema validation rejects malformed reports") {
  const auto good = report_to_json(count_cartan_classes(Params(2, 2, 1)));
  auto broken = good;
  broken.erase("classes");
  CHECK(validate_report_json(broken));
  broken = good;
  broken["class_count"] = 3;
  CHECK(validate_report_json(broken));
  broken = good;
  broken["params"]["m"] = "two";
  CHECK(validate_report_json(broken));
  broken = good;
  broken["classes"][0]["blocks"] = "x";
  CHECK(validate_report_json(broken));
  broken = good;
  broken["formula"] = json{{"name", "x"}};
  CHECK(validate_report_json(broken));
  CHECK(validate_report_json(json::array()));
}
