#include "mvmdp/solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "mvmdp/evaluate.hpp"
#include "mvmdp/rng.hpp"

namespace mvmdp {

namespace {

// Slack for "entrywise no worse" comparisons between exactly co-optimal
// policies evaluated through different linear systems.
constexpr double kDominatorSlack = 1e-10;

// Margin the randomized-dominance check allows below the deterministic
// optimum before calling it a violation.
constexpr double kDominanceSlack = 1e-8;

void require_nonempty(const FeasibleSets& sets) {
    if (auto empty = sets.first_empty_state()) {
        throw EmptyFeasibleSetError(*empty + 1, "no feasible action at state " +
                                                    std::to_string(*empty + 1) +
                                                    " for the requested target mean");
    }
}

DeterministicPolicy smallest_member(const FeasibleSets& sets) {
    DeterministicPolicy policy;
    policy.actions.reserve(sets.per_state.size());
    for (const auto& set : sets.per_state) {
        policy.actions.push_back(set.front());
    }
    return policy;
}

void require_member(const MdpModel& model, const FeasibleSets& sets,
                    const DeterministicPolicy& policy) {
    if (policy.actions.size() != sets.per_state.size()) {
        throw InfeasiblePolicyError("initial policy selects " + std::to_string(policy.actions.size()) +
                                    " actions for " + std::to_string(sets.per_state.size()) + " states");
    }
    for (std::size_t i = 0; i < sets.per_state.size(); ++i) {
        const auto& set = sets.per_state[i];
        if (std::find(set.begin(), set.end(), policy.actions[i]) == set.end()) {
            throw InfeasiblePolicyError("initial policy action " + std::to_string(policy.actions[i]) +
                                        " at state " + std::to_string(i + 1) +
                                        " is not in the feasible set");
        }
    }
    (void)model;
}

// Contiguous feasible-action view of one state: labels, rewards, rows.
struct FeasibleActions {
    std::vector<int> labels;
    std::vector<double> rewards;
    std::vector<Eigen::VectorXd> rows;
};

std::vector<FeasibleActions> collect_actions(const MdpModel& model, const FeasibleSets& sets) {
    std::vector<FeasibleActions> out(sets.per_state.size());
    for (std::size_t i = 0; i < sets.per_state.size(); ++i) {
        for (int label : sets.per_state[i]) {
            const ActionSpec* a = model.find_action(static_cast<int>(i), label);
            if (a == nullptr) {
                throw ContractError("feasible set names unknown action " + std::to_string(label) +
                                    " at state " + std::to_string(i + 1));
            }
            out[i].labels.push_back(label);
            out[i].rewards.push_back(a->reward);
            out[i].rows.push_back(a->transition);
        }
    }
    return out;
}

} // namespace

SolveResult policy_iteration(const MdpModel& model, const FeasibleSets& sets,
                             std::optional<DeterministicPolicy> initial, double tie_tol) {
    require_nonempty(sets);
    DeterministicPolicy current = initial ? *initial : smallest_member(sets);
    require_member(model, sets, current);

    const auto actions = collect_actions(model, sets);
    const Eigen::VectorXd& target = sets.target.values;
    const double beta = model.beta();
    const double beta2 = beta * beta;
    const long long sweep_bound = sets.policy_count();
    // A residual within sets.tolerance moves the mean by at most
    // tolerance / (1 - beta), so loosely built sets get a matching slack here.
    const double feasibility_tol =
        std::max(kFeasibilityTolerance, sets.tolerance / (1.0 - beta));

    SolveResult result;
    result.target = sets.target;

    for (long long sweep = 0;; ++sweep) {
        if (sweep > sweep_bound) {
            // Monotone descent makes revisits impossible; reaching this line
            // means the tie handling is broken.
            throw std::logic_error("policy iteration exceeded the policy-count bound");
        }
        ValueVector g = second_moment(model, current, sets.target, feasibility_tol);

        DeterministicPolicy next;
        next.actions.resize(current.actions.size());
        ImprovementScores all_scores(actions.size());
        for (std::size_t i = 0; i < actions.size(); ++i) {
            const FeasibleActions& fa = actions[i];
            std::vector<double>& scores = all_scores[i];
            scores.resize(fa.labels.size());
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < fa.labels.size(); ++k) {
                const double r = fa.rewards[k];
                scores[k] = beta2 * fa.rows[k].dot(g.values) + r * r +
                            2.0 * beta * r * fa.rows[k].dot(target);
                best = std::min(best, scores[k]);
            }
            int chosen = -1;
            for (std::size_t k = 0; k < fa.labels.size(); ++k) {
                if (fa.labels[k] == current.actions[i] && scores[k] <= best + tie_tol) {
                    chosen = fa.labels[k];  // keep the incumbent when it attains the minimum
                    break;
                }
            }
            if (chosen < 0) {
                for (std::size_t k = 0; k < fa.labels.size(); ++k) {
                    if (scores[k] <= best + tie_tol) {
                        chosen = fa.labels[k];  // labels are sorted, so the smallest tied one
                        break;
                    }
                }
            }
            next.actions[i] = chosen;
        }

        result.trace.push_back({current, g.values, std::move(all_scores)});
        ++result.iterations;
        if (next == current) break;
        current = next;
    }

    result.optimal_policy = current;
    result.optimal_variance = variance(model, current);
    return result;
}

SolveResult value_iteration(const MdpModel& model, const FeasibleSets& sets, double epsilon,
                            std::optional<Eigen::VectorXd> initial_values) {
    require_nonempty(sets);
    if (!(epsilon > 0.0)) {
        throw ContractError("epsilon must be positive");
    }
    const int S = model.num_states();
    const auto actions = collect_actions(model, sets);
    const Eigen::VectorXd& target = sets.target.values;
    const Eigen::VectorXd target2 = target.cwiseProduct(target);
    const double beta = model.beta();
    const double beta2 = beta * beta;
    const double threshold = epsilon * (1.0 - beta2) / (2.0 * beta2);

    // Per feasible action: reward transform with the target folded in.
    std::vector<std::vector<double>> h(actions.size());
    for (std::size_t i = 0; i < actions.size(); ++i) {
        for (std::size_t k = 0; k < actions[i].labels.size(); ++k) {
            const double r = actions[i].rewards[k];
            const Eigen::VectorXd& row = actions[i].rows[k];
            h[i].push_back(r * r + 2.0 * beta * r * row.dot(target) + beta2 * row.dot(target2) -
                           target2[static_cast<int>(i)]);
        }
    }

    Eigen::VectorXd v = initial_values ? *initial_values : Eigen::VectorXd::Zero(S);
    if (v.size() != S) {
        throw ContractError("initial value vector has length " + std::to_string(v.size()) +
                            ", expected " + std::to_string(S));
    }

    SolveResult result;
    result.target = sets.target;

    constexpr long kMaxSweeps = 1'000'000;
    for (long sweep = 0; sweep < kMaxSweeps; ++sweep) {
        Eigen::VectorXd updated(S);
        DeterministicPolicy greedy;
        greedy.actions.resize(S);
        ImprovementScores all_scores(actions.size());
        for (int i = 0; i < S; ++i) {
            const FeasibleActions& fa = actions[i];
            std::vector<double>& scores = all_scores[i];
            scores.resize(fa.labels.size());
            double best = std::numeric_limits<double>::infinity();
            int best_label = fa.labels.front();
            for (std::size_t k = 0; k < fa.labels.size(); ++k) {
                scores[k] = h[i][k] + beta2 * fa.rows[k].dot(v);
                if (scores[k] < best) {
                    best = scores[k];
                    best_label = fa.labels[k];
                }
            }
            updated[i] = best;
            greedy.actions[i] = best_label;
        }
        const double delta = (updated - v).lpNorm<Eigen::Infinity>();
        v = std::move(updated);
        result.trace.push_back({greedy, v, std::move(all_scores)});
        ++result.iterations;
        if (delta <= threshold) break;
    }
    if (result.trace.empty() || result.iterations >= kMaxSweeps) {
        throw std::logic_error("value iteration failed to converge");
    }

    result.optimal_policy = result.trace.back().policy;
    result.optimal_variance = variance(model, result.optimal_policy);
    return result;
}

BruteForceResult brute_force(const MdpModel& model, const FeasibleSets& sets, long long cap) {
    require_nonempty(sets);
    const long long count = sets.policy_count();
    if (count > cap) {
        throw EnumerationTooLargeError(count, "feasible policy space holds " + std::to_string(count) +
                                                  " policies, above the cap of " + std::to_string(cap));
    }

    const int S = model.num_states();
    std::vector<std::pair<DeterministicPolicy, Eigen::VectorXd>> evaluated;
    evaluated.reserve(static_cast<std::size_t>(count));
    PolicyEnumerator stream(sets);
    while (auto policy = stream.next()) {
        Eigen::VectorXd sigma2 = variance(model, *policy).values;
        evaluated.emplace_back(std::move(*policy), std::move(sigma2));
    }

    Eigen::VectorXd floor = evaluated.front().second;
    for (const auto& [policy, sigma2] : evaluated) {
        floor = floor.cwiseMin(sigma2);
    }

    BruteForceResult result;
    result.evaluated = static_cast<long long>(evaluated.size());
    for (const auto& [policy, sigma2] : evaluated) {
        if ((sigma2.array() <= floor.array() + kDominatorSlack).all()) {
            result.co_optimal.push_back(policy);
        }
    }
    result.has_dominator = !result.co_optimal.empty();

    if (result.has_dominator) {
        const DeterministicPolicy& best = result.co_optimal.front();
        SolveResult solve;
        solve.optimal_policy = best;
        solve.optimal_variance = variance(model, best);
        solve.target = sets.target;
        solve.iterations = static_cast<int>(std::min<long long>(result.evaluated,
                                                                std::numeric_limits<int>::max()));
        result.best = std::move(solve);
        return result;
    }

    // No policy attains the componentwise floor: report the Pareto-minimal set.
    for (std::size_t i = 0; i < evaluated.size(); ++i) {
        bool dominated = false;
        for (std::size_t k = 0; k < evaluated.size() && !dominated; ++k) {
            if (k == i) continue;
            const auto& a = evaluated[k].second;
            const auto& b = evaluated[i].second;
            bool weakly_better = true;
            bool strictly = false;
            for (int s = 0; s < S; ++s) {
                if (a[s] > b[s] + kDominatorSlack) { weakly_better = false; break; }
                if (a[s] < b[s] - kDominatorSlack) strictly = true;
            }
            dominated = weakly_better && strictly;
        }
        if (!dominated) {
            result.pareto.emplace_back(evaluated[i].first,
                                       ValueVector{Role::Variance, evaluated[i].second});
        }
    }
    return result;
}

DominanceReport check_randomized_dominance(const MdpModel& model, const FeasibleSets& sets,
                                           const SolveResult& result, int num_samples,
                                           std::uint64_t seed) {
    require_nonempty(sets);
    DominanceReport report;
    report.num_samples = num_samples;
    report.seed = seed;
    if (num_samples <= 0) return report;

    double max_dev = 0.0;
    double min_margin = std::numeric_limits<double>::infinity();
    for (int sample = 0; sample < num_samples; ++sample) {
        SplitMix64 rng = substream(seed, static_cast<std::uint64_t>(sample));
        RandomizedPolicy theta;
        theta.weights.resize(sets.per_state.size());
        for (std::size_t i = 0; i < sets.per_state.size(); ++i) {
            // Symmetric Dirichlet via normalized exponentials.
            std::vector<double> draws(sets.per_state[i].size());
            double total = 0.0;
            for (double& e : draws) {
                e = -std::log1p(-rng.next_double());
                total += e;
            }
            for (std::size_t k = 0; k < draws.size(); ++k) {
                theta.weights[i].push_back({sets.per_state[i][k], draws[k] / total});
            }
        }

        auto [mean, sigma2] = evaluate_randomized(model, theta);
        const double deviation = (mean.values - sets.target.values).lpNorm<Eigen::Infinity>();
        const double margin = (sigma2.values - result.optimal_variance.values).minCoeff();
        max_dev = std::max(max_dev, deviation);
        min_margin = std::min(min_margin, margin);
        if (deviation > kFeasibilityTolerance || margin < -kDominanceSlack) {
            report.violations.push_back({sample, deviation, std::min(margin, 0.0)});
        }
    }
    report.max_mean_deviation = max_dev;
    report.min_variance_margin = min_margin;
    return report;
}

} // namespace mvmdp
