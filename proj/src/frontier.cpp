#include "mvmdp/frontier.hpp"

#include <string>
#include <utility>

#include "mvmdp/constrain.hpp"
#include "mvmdp/evaluate.hpp"

namespace mvmdp {

std::vector<FrontierEntry> enumerate_all(const MdpModel& model, long long cap) {
    // Reuse the feasible-set streaming with every action marked feasible.
    FeasibleSets all;
    all.per_state.resize(model.num_states());
    all.target = {Role::Target, Eigen::VectorXd::Zero(model.num_states())};
    for (int i = 0; i < model.num_states(); ++i) {
        for (const ActionSpec& a : model.actions(i)) {
            all.per_state[i].push_back(a.label);
        }
        std::sort(all.per_state[i].begin(), all.per_state[i].end());
    }
    const long long count = all.policy_count();
    if (count > cap) {
        throw EnumerationTooLargeError(count, "policy space holds " + std::to_string(count) +
                                                  " policies, above the cap of " + std::to_string(cap));
    }

    std::vector<FrontierEntry> entries;
    entries.reserve(static_cast<std::size_t>(count));
    PolicyEnumerator stream(all);
    while (auto policy = stream.next()) {
        FrontierEntry entry;
        entry.mean = mean_performance(model, *policy);
        entry.variance = variance(model, *policy);
        entry.policy = std::move(*policy);
        entries.push_back(std::move(entry));
    }
    return entries;
}

bool dominates(const FrontierEntry& a, const FrontierEntry& b, double epsilon) {
    bool strict = false;
    for (int i = 0; i < a.mean.size(); ++i) {
        if (a.mean[i] < b.mean[i] - epsilon) return false;
        if (a.mean[i] > b.mean[i] + epsilon) strict = true;
    }
    for (int i = 0; i < a.variance.size(); ++i) {
        if (a.variance[i] > b.variance[i] + epsilon) return false;
        if (a.variance[i] < b.variance[i] - epsilon) strict = true;
    }
    return strict;
}

FrontierReport efficient_frontier(std::vector<FrontierEntry> entries, double mean_tolerance,
                                  double epsilon) {
    if (entries.empty()) {
        throw ContractError("frontier extraction needs at least one entry");
    }
    FrontierReport report;
    report.mean_classes = mean_classes(entries, mean_tolerance);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        bool dominated = false;
        for (std::size_t k = 0; k < entries.size() && !dominated; ++k) {
            dominated = k != i && dominates(entries[k], entries[i], epsilon);
        }
        if (!dominated) report.efficient_set.push_back(static_cast<int>(i));
    }
    report.entries = std::move(entries);
    return report;
}

std::vector<std::vector<int>> mean_classes(const std::vector<FrontierEntry>& entries,
                                           double tolerance) {
    if (!(tolerance > 0.0)) {
        throw ContractError("tolerance must be positive");
    }
    std::vector<std::vector<int>> classes;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        bool placed = false;
        for (auto& group : classes) {
            const Eigen::VectorXd& representative = entries[group.front()].mean.values;
            if ((entries[i].mean.values - representative).lpNorm<Eigen::Infinity>() <= tolerance) {
                group.push_back(static_cast<int>(i));
                placed = true;
                break;
            }
        }
        if (!placed) classes.push_back({static_cast<int>(i)});
    }
    return classes;
}

} // namespace mvmdp
