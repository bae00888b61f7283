#pragma once

#include <stdexcept>
#include <string>

namespace mvmdp {

/// A policy references an action that does not exist, or its weights are malformed.
class InvalidPolicyError : public std::runtime_error {
public:
    explicit InvalidPolicyError(const std::string& what) : std::runtime_error(what) {}
};

/// Caller broke an argument contract (dimension mismatch, bad range).
class ContractError : public std::invalid_argument {
public:
    explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

/// A policy was required to attain the target mean but does not.
class InfeasiblePolicyError : public std::runtime_error {
public:
    explicit InfeasiblePolicyError(const std::string& what) : std::runtime_error(what) {}
};

/// Some state has no feasible action for the requested target mean.
class EmptyFeasibleSetError : public std::runtime_error {
public:
    EmptyFeasibleSetError(int state_one_based, const std::string& what)
        : std::runtime_error(what), state(state_one_based) {}
    /// First empty state, 1-based as reported to users.
    int state;
};

/// Policy enumeration would exceed the configured cap.
class EnumerationTooLargeError : public std::runtime_error {
public:
    EnumerationTooLargeError(long long count, const std::string& what)
        : std::runtime_error(what), count(count) {}
    long long count;
};

} // namespace mvmdp
