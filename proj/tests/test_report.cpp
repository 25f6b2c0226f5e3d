#include "nkspin/report.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace nkspin;

namespace {

RunConfig small_config() {
    RunConfig c;
    c.suites = {"algebra", "curvature", "rarita", "deform"};
    c.mode_window = std::vector<Mode>{{0, 0}, {0.5, 0.5}};
    c.instances = 10;
    c.seed = 5;
    return c;
}

void collect_ids(const ojson& j, std::set<std::string>& ids) {
    if (j.is_object()) {
        if (j.contains("id") && j["id"].is_string()) ids.insert(j["id"].get<std::string>());
        if (j.contains("identity_id")) ids.insert(j["identity_id"].get<std::string>());
        for (const auto& [k, v] : j.items()) collect_ids(v, ids);
    } else if (j.is_array()) {
        for (const auto& v : j) collect_ids(v, ids);
    }
}

}  // namespace

TEST(Config, HalfIntegersAndModes) {
    EXPECT_EQ(parse_half_integer("1/2"), 0.5);
    EXPECT_EQ(parse_half_integer("3/2"), 1.5);
    EXPECT_EQ(parse_half_integer("1"), 1.0);
    EXPECT_EQ(parse_half_integer("0.5"), 0.5);
    EXPECT_THROW(parse_half_integer("1/3"), std::invalid_argument);
    EXPECT_THROW(parse_half_integer("-1"), std::invalid_argument);
    EXPECT_THROW(parse_half_integer("x"), std::invalid_argument);
    Mode m = parse_mode("1/2,1");
    EXPECT_EQ(m.j1, 0.5);
    EXPECT_EQ(m.j2, 1.0);
    EXPECT_THROW(parse_mode("1/2"), std::invalid_argument);
}

TEST(Config, Validation) {
    RunConfig c;
    EXPECT_NO_THROW(c.validate());
    c.metric = "flat";
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = RunConfig{};
    c.suites = {"bogus"};
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = RunConfig{};
    c.mode_window = std::vector<Mode>{};
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = RunConfig{};
    EXPECT_THROW(c.tol.set("nope", 1e-3), std::invalid_argument);
    EXPECT_THROW(c.tol.set("algebra", -1.0), std::invalid_argument);
    c.tol.set("algebra", 1e-6);
    EXPECT_EQ(c.tol["algebra"], 1e-6);
    c.suites = {"deform", "algebra", "algebra"};
    EXPECT_EQ(c.ordered_suites(), (std::vector<std::string>{"algebra", "deform"}));
}

TEST(Assertions, Comparisons) {
    EXPECT_TRUE(make_assertion("a", "s", 1e-10, 0, 1e-9, "below", "reference").pass);
    EXPECT_FALSE(make_assertion("a", "s", 1e-8, 0, 1e-9, "below", "reference").pass);
    EXPECT_TRUE(make_assertion("a", "s", 2, 2, 0, "equal", "reference").pass);
    EXPECT_FALSE(make_assertion("a", "s", 3, 2, 0, "equal", "reference").pass);
    EXPECT_TRUE(make_assertion("a", "s", 1e7, 1e6, 0, "at_least", "reference").pass);
    EXPECT_TRUE(make_assertion("a", "s", INFINITY, 1e6, 0, "at_least", "reference").pass);
    EXPECT_FALSE(make_assertion("a", "s", NAN, 0, 1, "below", "reference").pass);
    EXPECT_TRUE(make_assertion("a", "s", -1e-12, 0, 1e-9, "not_below", "reference").pass);
    EXPECT_FALSE(make_assertion("a", "s", -1e-6, 0, 1e-9, "not_below", "reference").pass);
    ojson j = assertion_json(make_assertion("x", "invariant", 1, 1, 0, "equal", "derived"));
    for (const char* k : {"value", "expected", "tolerance", "provenance_tag"}) EXPECT_TRUE(j.contains(k)) << k;
}

TEST(Report, SchemaAndAllPass) {
    RunReport r = run(small_config());
    EXPECT_TRUE(r.pass());
    const ojson& j = r.json;
    EXPECT_EQ(j["schema_version"], kSchemaVersion);
    EXPECT_EQ(j["config"]["seed"], 5);
    EXPECT_TRUE(j["summary"]["pass"].get<bool>());
    EXPECT_EQ(j["summary"]["failed"], 0);
    for (const char* s : {"algebra", "curvature", "rarita", "deform"}) EXPECT_TRUE(j["suites"].contains(s)) << s;
    EXPECT_FALSE(j["suites"].contains("prop_suite"));
    // rarita records: one per metric and mode
    EXPECT_EQ(j["suites"]["rarita"]["records"].size(), 4u);
    const ojson& rec = j["suites"]["rarita"]["records"][0];
    EXPECT_EQ(rec["metric"], "nearly_kahler");
    EXPECT_EQ(rec["dim_kernel"], 2);
    EXPECT_TRUE(rec.contains("spectral_gap"));
    EXPECT_TRUE(rec.contains("residuals"));
    const ojson& drec = j["suites"]["deform"]["records"][0];
    for (const char* k : {"dim_E12", "dim_Kplus", "dim_deformations"}) EXPECT_TRUE(drec.contains(k)) << k;
}

TEST(Report, EveryEmittedIdIsExplained) {
    RunConfig c = small_config();
    c.suites = suite_names();
    c.mode_window = std::vector<Mode>{{0, 0}};
    RunReport r = run(c);
    std::set<std::string> ids;
    collect_ids(r.json, ids);
    EXPECT_GT(ids.size(), 40u);
    for (const auto& id : ids) {
        EXPECT_NO_THROW(explain(id)) << id;
        EXPECT_NE(explain(id).find(id), std::string::npos);
    }
    try {
        explain("no_such_identity");
        ADD_FAILURE() << "explain accepted an unknown id";
    } catch (const std::out_of_range& e) {
        EXPECT_NE(std::string(e.what()).find("ricci_einstein"), std::string::npos);
    }
}

TEST(Report, DeterministicSequentialAndParallel) {
    RunConfig c = small_config();
    std::string a = run(c).json.dump(2);
    std::string b = run(c).json.dump(2);
    c.parallel = true;
    RunReport p = run(c);
    EXPECT_EQ(a, b);
    // the parallel flag is part of neither the output nor the numbers
    EXPECT_EQ(a, p.json.dump(2));
    c.parallel = false;
    c.seed = 6;
    EXPECT_NE(a, run(c).json.dump(2));
}

TEST(Report, TightToleranceFails) {
    RunConfig c;
    c.suites = {"algebra"};
    c.instances = 5;
    c.tol.set("algebra", 1e-30);
    RunReport r = run(c);
    EXPECT_FALSE(r.pass());
    EXPECT_FALSE(r.json["summary"]["pass"].get<bool>());
    EXPECT_GT(r.json["summary"]["failed"].get<int>(), 0);
    EXPECT_FALSE(r.json["summary"]["failures"].empty());
}

TEST(Report, TextReportMentionsEverySuite) {
    RunConfig c;
    c.suites = {"algebra", "curvature"};
    c.instances = 3;
    std::string t = text_report(run(c));
    EXPECT_NE(t.find("algebra: PASS"), std::string::npos);
    EXPECT_NE(t.find("curvature: PASS"), std::string::npos);
    EXPECT_NE(t.find("overall: PASS"), std::string::npos);
}
