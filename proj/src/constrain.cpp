#include "mvmdp/constrain.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <string>

#include "mvmdp/evaluate.hpp"

namespace mvmdp {

bool FeasibleSets::all_nonempty() const {
    return !first_empty_state().has_value();
}

std::optional<int> FeasibleSets::first_empty_state() const {
    for (std::size_t i = 0; i < per_state.size(); ++i) {
        if (per_state[i].empty()) return static_cast<int>(i);
    }
    return std::nullopt;
}

long long FeasibleSets::policy_count() const {
    long long count = 1;
    for (const auto& set : per_state) {
        const long long n = static_cast<long long>(set.size());
        if (n == 0) return 0;
        if (count > LLONG_MAX / n) return LLONG_MAX;
        count *= n;
    }
    return count;
}

FeasibleSets feasible_sets(const MdpModel& model, const ValueVector& target, double tolerance) {
    const int S = model.num_states();
    if (target.size() != S) {
        throw ContractError("target vector has length " + std::to_string(target.size()) +
                            ", expected " + std::to_string(S));
    }
    if (!(tolerance > 0.0)) {
        throw ContractError("tolerance must be positive");
    }
    FeasibleSets sets;
    sets.target = {Role::Target, target.values};
    sets.tolerance = tolerance;
    sets.per_state.resize(S);
    const double beta = model.beta();
    for (int i = 0; i < S; ++i) {
        for (const ActionSpec& a : model.actions(i)) {
            const double residual = a.reward + beta * a.transition.dot(target.values) - target.values[i];
            if (std::abs(residual) <= tolerance) {
                sets.per_state[i].push_back(a.label);
            }
        }
        std::sort(sets.per_state[i].begin(), sets.per_state[i].end());
    }
    return sets;
}

PolicyEnumerator::PolicyEnumerator(const FeasibleSets& sets)
    : sets_(sets.per_state), index_(sets.per_state.size(), 0) {
    if (auto empty = sets.first_empty_state()) {
        throw EmptyFeasibleSetError(*empty + 1, "no feasible action at state " +
                                                    std::to_string(*empty + 1) +
                                                    " for the requested target mean");
    }
    if (sets_.empty()) done_ = true;
}

std::optional<DeterministicPolicy> PolicyEnumerator::next() {
    if (done_) return std::nullopt;
    DeterministicPolicy policy;
    policy.actions.resize(sets_.size());
    for (std::size_t i = 0; i < sets_.size(); ++i) {
        policy.actions[i] = sets_[i][index_[i]];
    }
    // Odometer increment, last state fastest.
    int i = static_cast<int>(sets_.size()) - 1;
    while (i >= 0) {
        if (++index_[i] < sets_[i].size()) break;
        index_[i] = 0;
        --i;
    }
    if (i < 0) done_ = true;
    return policy;
}

std::vector<DeterministicPolicy> enumerate_feasible_policies(const FeasibleSets& sets, long long cap) {
    const long long count = sets.policy_count();
    if (count > cap) {
        throw EnumerationTooLargeError(count, "feasible policy space holds " + std::to_string(count) +
                                                  " policies, above the cap of " + std::to_string(cap));
    }
    PolicyEnumerator stream(sets);
    std::vector<DeterministicPolicy> out;
    out.reserve(static_cast<std::size_t>(count));
    while (auto policy = stream.next()) {
        out.push_back(std::move(*policy));
    }
    return out;
}

bool verify_membership(const MdpModel& model, const DeterministicPolicy& policy,
                       const ValueVector& target, double tolerance) {
    ValueVector j = mean_performance(model, policy);
    return (j.values - target.values).lpNorm<Eigen::Infinity>() <= tolerance;
}

} // namespace mvmdp
