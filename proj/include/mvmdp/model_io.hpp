#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mvmdp/model.hpp"

namespace mvmdp {

/// Syntax or semantic failure while reading a model document. Semantic
/// failures carry the full violation list from validate_model.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what, std::vector<std::string> violations = {})
        : std::runtime_error(what), violations(std::move(violations)) {}
    std::vector<std::string> violations;
};

struct ParsedModel {
    MdpModel model;
    std::vector<std::string> warnings;
};

struct UncheckedModel {
    MdpModel model;
    ValidationReport validation;
};

/// Parses the document shape only; throws ParseError for syntax or structural
/// problems, and returns semantic violations as data in the report.
UncheckedModel parse_model_unchecked(const std::string& text);

/// Model document:
///   {"num_states": S, "beta": b,
///    "states": [{"actions": [{"label": int, "reward": num|"p/q",
///                             "transition": [num|"p/q", ...]}, ...]}, ...]}
/// with each transition array of length S in state order. Rational strings
/// are parsed to the nearest double. The parsed model is validated; any
/// violation raises ParseError, warnings are passed through.
ParsedModel parse_model(const std::string& text);

/// parse_model over a file's contents.
ParsedModel load_model(const std::string& path);

nlohmann::json serialize_model(const MdpModel& model);

} // namespace mvmdp
