#include "mvmdp/model_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace mvmdp {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ParseError(where + ": " + what);
}

double rational_or_number(const json& value, const std::string& where) {
    if (value.is_number()) {
        return value.get<double>();
    }
    if (value.is_string()) {
        const std::string text = value.get<std::string>();
        std::istringstream in(text);
        long long numerator = 0;
        long long denominator = 0;
        char slash = 0;
        if (!(in >> numerator >> slash >> denominator) || slash != '/' || !in.eof()) {
            fail(where, "expected a number or a rational string like \"19/32\", got \"" + text + "\"");
        }
        if (denominator == 0) {
            fail(where, "rational \"" + text + "\" has a zero denominator");
        }
        return static_cast<double>(numerator) / static_cast<double>(denominator);
    }
    fail(where, "expected a number or a rational string");
}

long long integer_field(const json& object, const char* key, const std::string& where) {
    if (!object.contains(key)) fail(where, std::string("missing field \"") + key + "\"");
    const json& value = object.at(key);
    if (!value.is_number_integer()) fail(where + "." + key, "expected an integer");
    return value.get<long long>();
}

} // namespace

UncheckedModel parse_model_unchecked(const std::string& text) {
    json document;
    try {
        document = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("syntax error: ") + e.what());
    }
    if (!document.is_object()) fail("document", "expected a JSON object");

    const long long num_states = integer_field(document, "num_states", "document");
    if (num_states < 1 || num_states > 100000) {
        fail("document.num_states", "must be a positive state count");
    }
    if (!document.contains("beta")) fail("document", "missing field \"beta\"");
    const double beta = rational_or_number(document.at("beta"), "document.beta");

    if (!document.contains("states") || !document.at("states").is_array()) {
        fail("document", "missing array field \"states\"");
    }
    const json& states_json = document.at("states");
    if (static_cast<long long>(states_json.size()) != num_states) {
        fail("document.states", "has " + std::to_string(states_json.size()) + " entries, expected " +
                                    std::to_string(num_states));
    }

    std::vector<StateSpec> states;
    states.reserve(states_json.size());
    for (std::size_t i = 0; i < states_json.size(); ++i) {
        const std::string state_where = "states[" + std::to_string(i) + "]";
        const json& state_json = states_json[i];
        if (!state_json.is_object() || !state_json.contains("actions") ||
            !state_json.at("actions").is_array()) {
            fail(state_where, "expected an object with an \"actions\" array");
        }
        StateSpec state;
        const json& actions_json = state_json.at("actions");
        for (std::size_t k = 0; k < actions_json.size(); ++k) {
            const std::string action_where = state_where + ".actions[" + std::to_string(k) + "]";
            const json& action_json = actions_json[k];
            if (!action_json.is_object()) fail(action_where, "expected an object");
            ActionSpec action;
            action.label = static_cast<int>(integer_field(action_json, "label", action_where));
            if (!action_json.contains("reward")) fail(action_where, "missing field \"reward\"");
            action.reward = rational_or_number(action_json.at("reward"), action_where + ".reward");
            if (!action_json.contains("transition") || !action_json.at("transition").is_array()) {
                fail(action_where, "missing array field \"transition\"");
            }
            const json& row_json = action_json.at("transition");
            action.transition.resize(static_cast<Eigen::Index>(row_json.size()));
            for (std::size_t j = 0; j < row_json.size(); ++j) {
                action.transition[static_cast<Eigen::Index>(j)] = rational_or_number(
                    row_json[j], action_where + ".transition[" + std::to_string(j) + "]");
            }
            state.actions.push_back(std::move(action));
        }
        states.push_back(std::move(state));
    }

    UncheckedModel unchecked{MdpModel(std::move(states), beta), {}};
    unchecked.validation = validate_model(unchecked.model);
    return unchecked;
}

ParsedModel parse_model(const std::string& text) {
    UncheckedModel unchecked = parse_model_unchecked(text);
    if (!unchecked.validation.ok()) {
        std::string message = "model violates " + std::to_string(unchecked.validation.violations.size()) +
                              " invariant(s): " + unchecked.validation.violations.front();
        throw ParseError(message, unchecked.validation.violations);
    }
    return {std::move(unchecked.model), std::move(unchecked.validation.warnings)};
}

ParsedModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open model file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_model(buffer.str());
}

nlohmann::json serialize_model(const MdpModel& model) {
    json document;
    document["num_states"] = model.num_states();
    document["beta"] = model.beta();
    json states = json::array();
    for (int i = 0; i < model.num_states(); ++i) {
        json actions = json::array();
        for (const ActionSpec& a : model.actions(i)) {
            json action;
            action["label"] = a.label;
            action["reward"] = a.reward;
            action["transition"] = std::vector<double>(a.transition.data(),
                                                       a.transition.data() + a.transition.size());
            actions.push_back(std::move(action));
        }
        states.push_back(json{{"actions", std::move(actions)}});
    }
    document["states"] = std::move(states);
    return document;
}

} // namespace mvmdp
