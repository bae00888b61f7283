#include <doctest.h>

#include <string>

#include "mvmdp/evaluate.hpp"
#include "mvmdp/model_io.hpp"
#include "mvmdp/report.hpp"
#include "support.hpp"

using namespace mvmdp;
using namespace mvmdp::test;

#ifndef MVMDP_MODEL_DIR
#error "MVMDP_MODEL_DIR must point at the bundled model directory"
#endif

TEST_CASE("bundled model file parses to the reference model") {
    ParsedModel parsed = load_model(std::string(MVMDP_MODEL_DIR) + "/two_state.json");
    const MdpModel& model = parsed.model;
    CHECK(model.num_states() == 2);
    CHECK(model.beta() == 0.5);
    CHECK(model.actions(0).size() == 3);
    CHECK(model.actions(1).size() == 4);
    CHECK(model.find_action(0, 3)->reward == 19.0 / 32.0);
    CHECK(model.find_action(1, 4)->transition[0] == 1.0);
    CHECK(parsed.warnings.empty());

    // Identical numbers to the programmatic fixture.
    MdpModel reference = two_state_model();
    for (int i = 0; i < 2; ++i) {
        for (const ActionSpec& a : reference.actions(i)) {
            const ActionSpec* b = model.find_action(i, a.label);
            REQUIRE(b != nullptr);
            CHECK(a.reward == b->reward);
            CHECK((a.transition.array() == b->transition.array()).all());
        }
    }
}

TEST_CASE("rational reward strings parse to the nearest double") {
    const std::string text = R"({
        "num_states": 1, "beta": 0.5,
        "states": [{"actions": [{"label": 1, "reward": "19/32", "transition": [1.0]}]}]
    })";
    ParsedModel parsed = parse_model(text);
    CHECK(parsed.model.find_action(0, 1)->reward == 0.59375);
}

TEST_CASE("boundary discount is rejected as a semantic violation") {
    const std::string text = R"({
        "num_states": 1, "beta": 1.0,
        "states": [{"actions": [{"label": 1, "reward": 1, "transition": [1.0]}]}]
    })";
    try {
        parse_model(text);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        REQUIRE(!e.violations.empty());
        CHECK(e.violations.front().find("(0,1)") != std::string::npos);
    }
}

TEST_CASE("syntax and structural errors carry context") {
    CHECK_THROWS_AS(parse_model("{"), ParseError);
    CHECK_THROWS_AS(parse_model("[1,2,3]"), ParseError);
    CHECK_THROWS_AS(parse_model(R"({"num_states": 1, "beta": 0.5, "states": []})"), ParseError);
    CHECK_THROWS_AS(
        parse_model(
            R"({"num_states": 1, "beta": 0.5,
                "states": [{"actions": [{"label": 1, "reward": "1/0", "transition": [1.0]}]}]})"),
        ParseError);
    CHECK_THROWS_AS(
        parse_model(
            R"({"num_states": 1, "beta": 0.5,
                "states": [{"actions": [{"label": 1, "reward": "x", "transition": [1.0]}]}]})"),
        ParseError);
}

TEST_CASE("unchecked parse reports violations as data") {
    const std::string text = R"({
        "num_states": 2, "beta": 0.5,
        "states": [
            {"actions": [{"label": 1, "reward": 1, "transition": [0.6, 0.5]}]},
            {"actions": [{"label": 1, "reward": 1, "transition": [0.5, 0.5]}]}
        ]
    })";
    UncheckedModel unchecked = parse_model_unchecked(text);
    REQUIRE(unchecked.validation.violations.size() == 1);
    CHECK(unchecked.validation.violations.front().find("row sum") != std::string::npos);
}

TEST_CASE("serialize and reparse round-trips at double precision") {
    ParsedModel parsed = load_model(std::string(MVMDP_MODEL_DIR) + "/two_state.json");
    const std::string dumped = serialize_model(parsed.model).dump();
    ParsedModel again = parse_model(dumped);
    CHECK(again.model.beta() == parsed.model.beta());
    for (int i = 0; i < parsed.model.num_states(); ++i) {
        for (const ActionSpec& a : parsed.model.actions(i)) {
            const ActionSpec* b = again.model.find_action(i, a.label);
            REQUIRE(b != nullptr);
            CHECK(a.reward == b->reward);
            CHECK((a.transition.array() == b->transition.array()).all());
        }
    }
    // And the serialized form itself is stable.
    CHECK(serialize_model(again.model).dump() == dumped);
}

TEST_CASE("run reports carry the schema version and reparse losslessly") {
    MdpModel model = two_state_model();
    ValueVector mean = mean_performance(model, policy({1, 4}));
    nlohmann::json payload{{"mean", values_json(mean.values)}};
    nlohmann::json report = run_report("evaluate --model m.json", {{"model", "m.json"}},
                                       payload, 1.25);
    CHECK(report["schema"] == kReportSchema);
    nlohmann::json reparsed = nlohmann::json::parse(report.dump());
    CHECK(reparsed["result"]["mean"][0].get<double>() == mean.values[0]);
    CHECK(reparsed["result"]["mean"][1].get<double>() == mean.values[1]);
}
