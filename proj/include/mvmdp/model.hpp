#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "mvmdp/errors.hpp"

namespace mvmdp {

/// What an S-dimensional value vector carries.
enum class Role {
    Mean,                // J: expected total discounted reward per start state
    Target,              // lambda: prescribed mean vector
    Variance,            // sigma^2: variance of the total discounted reward
    VarianceReward,      // h: reward whose beta^2-discounted mean equals the variance
    SecondMomentReward,  // f: reward whose beta^2-discounted mean equals sigma^2 + J^2
    SecondMoment,        // g: E[(total discounted reward)^2] = sigma^2 + target^2
};

const char* role_name(Role role);

/// S-dimensional vector of reals tagged with what it represents.
struct ValueVector {
    Role role = Role::Mean;
    Eigen::VectorXd values;

    int size() const { return static_cast<int>(values.size()); }
    double operator[](int i) const { return values[i]; }
};

/// One action available at some state: opaque positive label, reward, and
/// the next-state distribution over all S states.
struct ActionSpec {
    int label = 0;
    double reward = 0.0;
    Eigen::VectorXd transition;
};

struct StateSpec {
    std::vector<ActionSpec> actions;
};

/// Finite discounted MDP in tabular form. Construction stores the data as
/// given; validate_model reports invariant violations as data rather than
/// throwing, so malformed inputs can be diagnosed in full.
class MdpModel {
public:
    MdpModel(std::vector<StateSpec> states, double beta);

    int num_states() const { return static_cast<int>(states_.size()); }
    double beta() const { return beta_; }

    const std::vector<StateSpec>& states() const { return states_; }
    const std::vector<ActionSpec>& actions(int state) const { return states_[state].actions; }

    /// Action with the given label at `state` (0-based), or nullptr.
    const ActionSpec* find_action(int state, int label) const;

private:
    std::vector<StateSpec> states_;
    double beta_;
};

/// One action label per state, in state order. Ordering and equality are
/// lexicographic over the label sequence.
struct DeterministicPolicy {
    std::vector<int> actions;

    auto operator<=>(const DeterministicPolicy&) const = default;

    std::string to_string() const;
};

struct ActionWeight {
    int label = 0;
    double weight = 0.0;
};

/// Per-state probability distribution over a support set of action labels.
struct RandomizedPolicy {
    std::vector<std::vector<ActionWeight>> weights;
};

/// Transition matrix and reward vector of the chain a policy induces.
struct InducedChain {
    Eigen::MatrixXd transition;
    Eigen::VectorXd reward;
};

struct ValidationReport {
    std::vector<std::string> violations;
    std::vector<std::string> warnings;

    bool ok() const { return violations.empty(); }
};

/// Row tolerance for stochasticity checks; inputs carry decimal literals so
/// exact row sums of 1 cannot be demanded.
inline constexpr double kRowSumTolerance = 1e-12;

/// Weight-sum tolerance for randomized policy distributions.
inline constexpr double kSimplexTolerance = 1e-12;

/// Checks all structural invariants (row stochasticity, probability ranges,
/// finite rewards, discount in (0,1), nonempty action sets, unique positive
/// labels). Violations are fatal for downstream use; warnings are not: a
/// disconnected support graph only threatens ergodicity assumptions, while
/// the closed forms need nothing beyond invertibility of (I - beta P).
ValidationReport validate_model(const MdpModel& model);

/// P(d) and r(d) for a deterministic policy. Throws InvalidPolicyError if
/// the policy misses a state or names an unknown action.
InducedChain induced_chain(const MdpModel& model, const DeterministicPolicy& policy);

/// Mixture chain of a randomized policy: rows and rewards are the
/// weight-averaged rows and rewards of the supported actions.
InducedChain induced_chain_randomized(const MdpModel& model, const RandomizedPolicy& policy);

/// True when the support graph of P is strongly connected.
bool is_irreducible(const Eigen::MatrixXd& transition);

} // namespace mvmdp
