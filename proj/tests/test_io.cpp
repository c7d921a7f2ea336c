#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <variant>
#include <vector>

#include "gcshi/io.hpp"
#include "gcshi/report.hpp"
#include "support/paths.hpp"
#include "support/temp.hpp"

using namespace gcshi;
using testsupport::TempDir;

TEST_CASE("format resolution prefers the explicit format") {
    CHECK(resolve_format({"data.csv", {}}) == "csv");
    CHECK(resolve_format({"data.JSON", {}}) == "json");
    CHECK(resolve_format({"data.txt", std::string("csv")}) == "csv");
    CHECK(resolve_format({"data", std::string("JSON")}) == "json");
    CHECK_THROWS_AS(resolve_format({"data.txt", {}}), IoError);
    CHECK_THROWS_AS(resolve_format({"data", {}}), IoError);
}

TEST_CASE("csv parser handles quoting, escapes, and line endings") {
    auto rows = csv::parse("a, b ,\"c,d\"\r\n\"say \"\"hi\"\"\",2\n\n3,4\n", "t.csv");
    REQUIRE(rows.size() == 3);
    REQUIRE(rows[0].size() == 3);
    CHECK(rows[0][0].text == "a");
    CHECK(rows[0][1].text == "b");  // unquoted cells are trimmed
    CHECK(rows[0][2].text == "c,d");
    CHECK(rows[1][0].text == "say \"hi\"");
    CHECK(rows[1][1].text == "2");
    CHECK(rows[2][0].text == "3");  // the blank line was skipped
    CHECK(rows[2][0].line == 4);
    CHECK(rows[2][1].column == 3);
}

TEST_CASE("csv parser reports malformed quoting with positions") {
    try {
        csv::parse("a,b\n\"unclosed\n", "bad.csv");
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()) == "bad.csv:2:1: unterminated quoted field");
    }
    try {
        csv::parse("\"x\"y,b\n", "bad.csv");
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("unexpected character after closing quote") !=
              std::string::npos);
    }
}

TEST_CASE("format_double emits the shortest round-trip form") {
    CHECK(detail::format_double(0.5) == "0.5");
    CHECK(detail::format_double(1.0) == "1");
    CHECK(detail::format_double(-2.5) == "-2.5");
    CHECK(detail::format_double(0.1) == "0.1");
    for (double v : {1.0 / 3.0, 0.1 + 0.2, 1e-17, 123456.789012345, 0.63}) {
        std::string s = detail::format_double(v);
        double back = 0.0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), back);
        REQUIRE(ec == std::errc());
        REQUIRE(ptr == s.data() + s.size());
        CHECK(back == v);
    }
}

TEST_CASE("labeled tables demand a header and rectangular rows") {
    CHECK_THROWS_WITH(detail::parse_labeled_table("", "t.csv"), "t.csv: no header row");
    CHECK_THROWS_WITH(detail::parse_labeled_table("activity\nL1\n", "t.csv"),
                      "t.csv: header must name at least one data column");
    CHECK_THROWS_WITH(detail::parse_labeled_table("activity,G1\n", "t.csv"),
                      "t.csv: no data rows");
    CHECK_THROWS_WITH(detail::parse_labeled_table("activity,G1,G2\nL1,4\n", "t.csv"),
                      "t.csv:2: row L1 is missing a value for column G2");
    CHECK_THROWS_WITH(detail::parse_labeled_table("activity,G1\nL1,4,9\n", "t.csv"),
                      "t.csv:2: row L1 has more values than header columns");
    CHECK_THROWS_WITH(detail::parse_labeled_table("activity,G1\n,4\n", "t.csv"),
                      "t.csv:2:1: empty row code");
    CHECK_THROWS_WITH(detail::parse_labeled_table("activity,,G2\nL1,4,5\n", "t.csv"),
                      "t.csv:1:10: empty column id in header");
}

TEST_CASE("bundled data files load back to the bundled catalog") {
    RatingMatrix ratings = load_rating_matrix({testsupport::data_file("ratings.csv"), {}});
    CHECK(ratings == bundled_catalog().ratings);

    DecisionMatrix decision =
        load_decision_matrix({testsupport::data_file("decision.csv"), {}});
    CHECK(decision == bundled_catalog().decision);
}

TEST_CASE("rating values outside the scale are rejected with the cell named") {
    TempDir tmp;
    std::string path = tmp.write("bad.csv", "activity,G1,G2\nL1,5,11\n");
    try {
        load_rating_matrix({path, {}});
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        std::string msg = e.what();
        CHECK(msg.find("(L1, G2): value 11 out of range [1,10]") != std::string::npos);
    }
}

TEST_CASE("non-numeric cells are io errors with positions") {
    TempDir tmp;
    std::string path = tmp.write("bad.csv", "activity,G1\nL1,x\n");
    try {
        load_rating_matrix({path, {}});
        FAIL("expected IoError");
    } catch (const IoError& e) {
        std::string msg = e.what();
        CHECK(msg.find(":2:4: expected an integer, got 'x'") != std::string::npos);
    }
    std::string dpath = tmp.write("bad2.csv", "alternative,E1\nC1,1\nC2,abc\n");
    try {
        load_decision_matrix({dpath, {}});
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find(":3:4: expected a number, got 'abc'") !=
              std::string::npos);
    }
}

TEST_CASE("missing files and missing json keys are io errors") {
    CHECK_THROWS_AS(load_rating_matrix({"/nonexistent/ratings.csv", {}}), IoError);
    TempDir tmp;
    std::string path = tmp.write("r.json", "{\"rows\": [\"L1\"], \"columns\": [\"G1\"]}");
    try {
        load_rating_matrix({path, {}});
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("missing required key 'values'") !=
              std::string::npos);
    }
    std::string broken = tmp.write("broken.json", "{not json");
    CHECK_THROWS_AS(load_rating_matrix({broken, {}}), IoError);
}

TEST_CASE("weights files classify by shape") {
    SECTION("bundled 1xk vector, unlabeled") {
        WeightsInput w = load_weights({testsupport::data_file("weights.csv"), {}});
        REQUIRE(std::holds_alternative<WeightVector>(w.value));
        const WeightVector& v = std::get<WeightVector>(w.value);
        CHECK(v.criteria.empty());
        CHECK(v.weights == std::vector<double>{0.11, 0.63, 0.26});
        CHECK_FALSE(w.labeled);
        CHECK(w.notes.empty());
    }
    SECTION("kx1 vector") {
        TempDir tmp;
        WeightsInput w = load_weights({tmp.write("w.csv", "0.2\n0.3\n0.5\n"), {}});
        REQUIRE(std::holds_alternative<WeightVector>(w.value));
        CHECK(std::get<WeightVector>(w.value).weights == std::vector<double>{0.2, 0.3, 0.5});
    }
    SECTION("unnormalized vectors are rescaled with a note") {
        TempDir tmp;
        WeightsInput w = load_weights({tmp.write("w.csv", "2,3,5\n"), {}});
        const WeightVector& v = std::get<WeightVector>(w.value);
        CHECK(v.weights == std::vector<double>{0.2, 0.3, 0.5});
        REQUIRE(w.notes.size() == 1);
        CHECK(w.notes[0] == "weights rescaled to sum 1 (input sum 10)");
    }
    SECTION("labeled header") {
        TempDir tmp;
        WeightsInput w = load_weights({tmp.write("w.csv", "E1,E2\n0.5,0.5\n"), {}});
        const WeightVector& v = std::get<WeightVector>(w.value);
        CHECK(v.criteria == std::vector<std::string>{"E1", "E2"});
        CHECK(w.labeled);
    }
    SECTION("bundled pairwise csv equals the candidate matrix") {
        WeightsInput w = load_weights({testsupport::data_file("pairwise.csv"), {}});
        REQUIRE(std::holds_alternative<PairwiseMatrix>(w.value));
        CHECK(std::get<PairwiseMatrix>(w.value) == bundled_candidate_pairwise());
        CHECK(w.labeled);
    }
    SECTION("unlabeled square matrices get synthesized ids") {
        TempDir tmp;
        WeightsInput w =
            load_weights({tmp.write("m.csv", "1,3\n0.3333333333333333,1\n"), {}});
        REQUIRE(std::holds_alternative<PairwiseMatrix>(w.value));
        CHECK(std::get<PairwiseMatrix>(w.value).criteria ==
              std::vector<std::string>{"K1", "K2"});
        CHECK_FALSE(w.labeled);
    }
    SECTION("rejected shapes and contents") {
        TempDir tmp;
        try {
            load_weights({tmp.write("w.csv", "1,2,3\n4,5,6\n"), {}});
            FAIL("expected IoError");
        } catch (const IoError& e) {
            CHECK(std::string(e.what()).find(
                      "unsupported shape 2x3; expected a 1xk or kx1 weight vector, or a "
                      "kxk comparison matrix (k >= 2)") != std::string::npos);
        }
        CHECK_THROWS_AS(load_weights({tmp.write("h.csv", "E1,E2\n"), {}}), IoError);
        CHECK_THROWS_AS(load_weights({tmp.write("e.csv", ""), {}}), IoError);
        CHECK_THROWS_AS(load_weights({tmp.write("n.csv", "-1,2\n"), {}}), ValidationError);
        CHECK_THROWS_AS(
            load_weights({tmp.write("p.csv", "1,2\n3,1\n"), {}}), ValidationError);
        CHECK_THROWS_AS(
            load_weights({tmp.write("l.csv", "E1,E2,E3\n0.5,0.5\n"), {}}), IoError);
    }
    SECTION("json forms") {
        TempDir tmp;
        WeightsInput w = load_weights(
            {tmp.write("w.json", R"({"criteria": ["E1", "E2"], "weights": [0.5, 0.5]})"),
             {}});
        const WeightVector& v = std::get<WeightVector>(w.value);
        CHECK(v.criteria == std::vector<std::string>{"E1", "E2"});
        CHECK(w.labeled);

        WeightsInput m = load_weights(
            {tmp.write("m.json", R"({"matrix": [[1, 3], [0.3333333333333333, 1]]})"), {}});
        REQUIRE(std::holds_alternative<PairwiseMatrix>(m.value));
        CHECK_FALSE(m.labeled);

        try {
            load_weights({tmp.write("x.json", R"({"foo": 1})"), {}});
            FAIL("expected IoError");
        } catch (const IoError& e) {
            CHECK(std::string(e.what()).find(
                      "expected a 'weights' array or a 'matrix' of pairwise comparisons") !=
                  std::string::npos);
        }
    }
}

TEST_CASE("matrices survive a save/load round-trip") {
    TempDir tmp;
    const Catalog& c = bundled_catalog();

    SECTION("ratings csv") {
        std::string path = tmp.file("r.csv");
        save_rating_matrix(c.ratings, {path, {}});
        CHECK(load_rating_matrix({path, {}}) == c.ratings);
    }
    SECTION("ratings json") {
        std::string path = tmp.file("r.json");
        save_rating_matrix(c.ratings, {path, {}});
        CHECK(load_rating_matrix({path, {}}) == c.ratings);
    }
    SECTION("decision csv keeps doubles bit-exact") {
        DecisionMatrix m = c.decision;
        m.values[0][0] = 1.0 / 3.0;
        m.values[1][1] = 0.1 + 0.2;
        std::string path = tmp.file("d.csv");
        save_decision_matrix(m, {path, {}});
        CHECK(load_decision_matrix({path, {}}) == m);
    }
    SECTION("decision json") {
        std::string path = tmp.file("d.json");
        save_decision_matrix(c.decision, {path, {}});
        CHECK(load_decision_matrix({path, {}}) == c.decision);
    }
    SECTION("weights csv with labels") {
        WeightVector w{{"E1", "E2", "E3"}, {0.11, 0.63, 0.26}};
        std::string path = tmp.file("w.csv");
        save_weights(w, {path, {}});
        WeightsInput back = load_weights({path, {}});
        CHECK(std::get<WeightVector>(back.value) == w);
    }
    SECTION("weights json without labels") {
        WeightVector w{{}, {1.0 / 3.0, 2.0 / 3.0}};
        std::string path = tmp.file("w.json");
        save_weights(w, {path, {}});
        WeightsInput back = load_weights({path, {}});
        CHECK(std::get<WeightVector>(back.value).weights == w.weights);
    }
    SECTION("labels with commas are quoted") {
        RatingMatrix m;
        m.rows = {"L,1", "L\"2\""};
        m.columns = {"G1"};
        m.values = {{5}, {6}};
        std::string path = tmp.file("q.csv");
        save_rating_matrix(m, {path, {}});
        CHECK(load_rating_matrix({path, {}}) == m);
    }
}

TEST_CASE("the catalog round-trips through json") {
    const Catalog& c = bundled_catalog();
    ordered_json j = catalog_to_json(c);
    Catalog back = catalog_from_json(j);
    CHECK(back == c);

    ordered_json broken = j;
    broken.erase("experts");
    CHECK_THROWS_AS(catalog_from_json(broken), IoError);
}

TEST_CASE("schema validation accepts conforming documents and names breaks") {
    ordered_json schema = detail::parse_json(
        detail::read_file(testsupport::schema_file("report.schema.json")),
        "report.schema.json");

    ordered_json minimal = {{"schema", "gcshi-report/1"},
                            {"notes", ordered_json::array()},
                            {"errata", ordered_json::array()}};
    CHECK(validate_schema(minimal, schema).empty());

    ordered_json missing = {{"schema", "gcshi-report/1"}};
    auto errors = validate_schema(missing, schema);
    REQUIRE_FALSE(errors.empty());
    CHECK(errors[0].find("missing required property") != std::string::npos);

    ordered_json wrong_type = minimal;
    wrong_type["notes"] = "not an array";
    CHECK_FALSE(validate_schema(wrong_type, schema).empty());
}
