#pragma once

// Shared fixtures and independent oracles for the test suites. Everything in
// here stays off the library's computation paths on purpose: the fixed-point
// solver, the exhaustive enumerations, and the hand-built models give the
// tests something to disagree with.

#include <initializer_list>
#include <random>
#include <vector>

#include "mvmdp/model.hpp"

namespace mvmdp::test {

inline Eigen::VectorXd vec(std::initializer_list<double> values) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double v : values) out[i++] = v;
    return out;
}

inline ValueVector target(std::initializer_list<double> values) {
    return {Role::Target, vec(values)};
}

inline DeterministicPolicy policy(std::initializer_list<int> labels) {
    return DeterministicPolicy{std::vector<int>(labels)};
}

inline ActionSpec action(int label, double reward, std::initializer_list<double> row) {
    return {label, reward, vec(row)};
}

/// Two-state chain bundled with the tool (models/two_state.json): walk
/// probabilities a/4 toward the other state, discount 1/2.
inline MdpModel two_state_model() {
    std::vector<StateSpec> states(2);
    states[0].actions = {
        action(1, 1.0, {0.75, 0.25}),
        action(2, 0.75, {0.5, 0.5}),
        action(3, 19.0 / 32.0, {0.25, 0.75}),
    };
    states[1].actions = {
        action(1, 2.5, {0.25, 0.75}),
        action(2, 2.0, {0.5, 0.5}),
        action(3, 3.0, {0.75, 0.25}),
        action(4, 3.25, {1.0, 0.0}),
    };
    return MdpModel(std::move(states), 0.5);
}

inline MdpModel single_state_model(double reward = 1.0, double beta = 0.5) {
    std::vector<StateSpec> states(1);
    states[0].actions = {action(1, reward, {1.0})};
    return MdpModel(std::move(states), beta);
}

/// Truncated Neumann series sum_{n<=terms} gamma^n P^n b; independent route
/// to the discounted solve.
inline Eigen::VectorXd neumann_solve(const Eigen::MatrixXd& transition, double gamma,
                                     const Eigen::VectorXd& rhs, int terms) {
    Eigen::VectorXd x = rhs;
    Eigen::VectorXd term = rhs;
    for (int n = 0; n < terms; ++n) {
        term = gamma * (transition * term);
        x += term;
    }
    return x;
}

inline Eigen::VectorXd random_stochastic_row(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> uniform(0.05, 1.0);
    Eigen::VectorXd row(n);
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
        row[j] = uniform(rng);
        total += row[j];
    }
    // Normalize and re-balance the first entry so the sum is exactly 1.
    row /= total;
    row[0] = 1.0 - (row.sum() - row[0]);
    return row;
}

/// Random dense model: every state gets `num_actions` actions with random
/// stochastic rows and rewards in [-2, 2].
inline MdpModel random_model(std::mt19937& rng, int num_states, int num_actions, double beta) {
    std::uniform_real_distribution<double> reward(-2.0, 2.0);
    std::vector<StateSpec> states(num_states);
    for (StateSpec& state : states) {
        for (int a = 1; a <= num_actions; ++a) {
            state.actions.push_back({a, reward(rng), random_stochastic_row(rng, num_states)});
        }
    }
    return MdpModel(std::move(states), beta);
}

/// Same, but the action count is drawn per state from [min_actions, max_actions].
inline MdpModel random_model_varied(std::mt19937& rng, int num_states, int min_actions,
                                    int max_actions, double beta) {
    std::uniform_real_distribution<double> reward(-2.0, 2.0);
    std::uniform_int_distribution<int> count(min_actions, max_actions);
    std::vector<StateSpec> states(num_states);
    for (StateSpec& state : states) {
        const int actions = count(rng);
        for (int a = 1; a <= actions; ++a) {
            state.actions.push_back({a, reward(rng), random_stochastic_row(rng, num_states)});
        }
    }
    return MdpModel(std::move(states), beta);
}

/// Random model with a designed feasible structure: for a random target, the
/// first `feasible_per_state` actions at every state get their reward pinned
/// to target(i) - beta * row . target, so they satisfy the consistency
/// equation exactly; the rest get random rewards.
struct DesignedInstance {
    MdpModel model;
    ValueVector target;
    int feasible_per_state;
};

inline DesignedInstance designed_instance(std::mt19937& rng, int num_states, int num_actions,
                                          int feasible_per_state, double beta) {
    std::uniform_real_distribution<double> value(-2.0, 2.0);
    Eigen::VectorXd lambda(num_states);
    for (int i = 0; i < num_states; ++i) lambda[i] = value(rng);

    std::vector<StateSpec> states(num_states);
    for (int i = 0; i < num_states; ++i) {
        for (int a = 1; a <= num_actions; ++a) {
            Eigen::VectorXd row = random_stochastic_row(rng, num_states);
            double reward = value(rng);
            if (a <= feasible_per_state) {
                reward = lambda[i] - beta * row.dot(lambda);
            }
            states[i].actions.push_back({a, reward, std::move(row)});
        }
    }
    return {MdpModel(std::move(states), beta), {Role::Target, std::move(lambda)},
            feasible_per_state};
}

/// Every deterministic policy of the model, lexicographic order.
inline std::vector<DeterministicPolicy> all_policies(const MdpModel& model) {
    std::vector<DeterministicPolicy> out;
    DeterministicPolicy current;
    current.actions.assign(model.num_states(), 0);
    std::vector<std::size_t> index(model.num_states(), 0);
    while (true) {
        for (int i = 0; i < model.num_states(); ++i) {
            current.actions[i] = model.actions(i)[index[i]].label;
        }
        out.push_back(current);
        int i = model.num_states() - 1;
        while (i >= 0) {
            if (++index[i] < model.actions(i).size()) break;
            index[i] = 0;
            --i;
        }
        if (i < 0) break;
    }
    return out;
}

inline double max_abs_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a - b).lpNorm<Eigen::Infinity>();
}

inline bool close(double a, double b, double tol) {
    return std::abs(a - b) <= tol;
}

} // namespace mvmdp::test
