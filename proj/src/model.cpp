#include "mvmdp/model.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <utility>

namespace mvmdp {

const char* role_name(Role role) {
    switch (role) {
    case Role::Mean: return "mean";
    case Role::Target: return "target";
    case Role::Variance: return "variance";
    case Role::VarianceReward: return "variance-reward";
    case Role::SecondMomentReward: return "second-moment-reward";
    case Role::SecondMoment: return "second-moment";
    }
    return "?";
}

MdpModel::MdpModel(std::vector<StateSpec> states, double beta)
    : states_(std::move(states)), beta_(beta) {}

const ActionSpec* MdpModel::find_action(int state, int label) const {
    for (const ActionSpec& a : states_[state].actions) {
        if (a.label == label) return &a;
    }
    return nullptr;
}

std::string DeterministicPolicy::to_string() const {
    std::ostringstream out;
    out << "(";
    for (std::size_t i = 0; i < actions.size(); ++i) {
        if (i > 0) out << ",";
        out << actions[i];
    }
    out << ")";
    return out.str();
}

namespace {

std::string state_action(int state, int label) {
    std::ostringstream out;
    out << "state " << state + 1 << ", action " << label;
    return out.str();
}

} // namespace

ValidationReport validate_model(const MdpModel& model) {
    ValidationReport report;
    auto violation = [&report](const std::string& text) { report.violations.push_back(text); };

    const int S = model.num_states();
    if (S < 1) {
        violation("model must have at least one state");
        return report;
    }
    if (!(model.beta() > 0.0) || !(model.beta() < 1.0) || !std::isfinite(model.beta())) {
        violation("discount factor must lie in (0,1)");
    }

    for (int i = 0; i < S; ++i) {
        const auto& actions = model.actions(i);
        if (actions.empty()) {
            violation("state " + std::to_string(i + 1) + " has no actions");
            continue;
        }
        std::set<int> seen;
        for (const ActionSpec& a : actions) {
            if (a.label <= 0) {
                violation(state_action(i, a.label) + ": labels must be positive integers");
            }
            if (!seen.insert(a.label).second) {
                violation(state_action(i, a.label) + ": duplicate action label");
            }
            if (!std::isfinite(a.reward)) {
                violation(state_action(i, a.label) + ": reward is not finite");
            }
            if (a.transition.size() != S) {
                violation(state_action(i, a.label) + ": transition row has length " +
                          std::to_string(a.transition.size()) + ", expected " + std::to_string(S));
                continue;
            }
            double sum = 0.0;
            bool range_ok = true;
            for (int j = 0; j < S; ++j) {
                const double p = a.transition[j];
                if (!(p >= 0.0) || !(p <= 1.0)) {  // catches NaN too
                    range_ok = false;
                }
                sum += p;
            }
            if (!range_ok) {
                violation(state_action(i, a.label) + ": probabilities must lie in [0,1]");
            } else if (std::abs(sum - 1.0) > kRowSumTolerance) {
                std::ostringstream out;
                out.precision(17);
                out << state_action(i, a.label) << ": row sum " << sum << " differs from 1 by more than "
                    << kRowSumTolerance;
                violation(out.str());
            }
        }
    }

    if (!report.violations.empty()) return report;

    // Union support graph: if it is not strongly connected, no policy can
    // induce an irreducible chain. Warning only.
    Eigen::MatrixXd support = Eigen::MatrixXd::Zero(S, S);
    for (int i = 0; i < S; ++i) {
        for (const ActionSpec& a : model.actions(i)) {
            for (int j = 0; j < S; ++j) {
                if (a.transition[j] > 0.0) support(i, j) = 1.0;
            }
        }
    }
    if (!is_irreducible(support)) {
        report.warnings.push_back(
            "support graph over all actions is not strongly connected; no policy induces an "
            "irreducible chain (closed-form evaluation is still well defined)");
    }
    return report;
}

InducedChain induced_chain(const MdpModel& model, const DeterministicPolicy& policy) {
    const int S = model.num_states();
    if (static_cast<int>(policy.actions.size()) != S) {
        throw InvalidPolicyError("policy selects " + std::to_string(policy.actions.size()) +
                                 " actions for " + std::to_string(S) + " states");
    }
    InducedChain chain;
    chain.transition.resize(S, S);
    chain.reward.resize(S);
    for (int i = 0; i < S; ++i) {
        const ActionSpec* a = model.find_action(i, policy.actions[i]);
        if (a == nullptr) {
            throw InvalidPolicyError("no action labelled " + std::to_string(policy.actions[i]) +
                                     " at state " + std::to_string(i + 1));
        }
        chain.transition.row(i) = a->transition.transpose();
        chain.reward[i] = a->reward;
    }
    return chain;
}

InducedChain induced_chain_randomized(const MdpModel& model, const RandomizedPolicy& policy) {
    const int S = model.num_states();
    if (static_cast<int>(policy.weights.size()) != S) {
        throw InvalidPolicyError("randomized policy covers " + std::to_string(policy.weights.size()) +
                                 " states, expected " + std::to_string(S));
    }
    InducedChain chain;
    chain.transition = Eigen::MatrixXd::Zero(S, S);
    chain.reward = Eigen::VectorXd::Zero(S);
    for (int i = 0; i < S; ++i) {
        const auto& dist = policy.weights[i];
        if (dist.empty()) {
            throw InvalidPolicyError("randomized policy has empty support at state " + std::to_string(i + 1));
        }
        double total = 0.0;
        for (const ActionWeight& w : dist) {
            const ActionSpec* a = model.find_action(i, w.label);
            if (a == nullptr) {
                throw InvalidPolicyError("no action labelled " + std::to_string(w.label) + " at state " +
                                         std::to_string(i + 1));
            }
            if (!(w.weight >= 0.0)) {
                throw InvalidPolicyError("negative weight on " + state_action(i, w.label));
            }
            total += w.weight;
            chain.transition.row(i) += w.weight * a->transition.transpose();
            chain.reward[i] += w.weight * a->reward;
        }
        if (std::abs(total - 1.0) > kSimplexTolerance) {
            std::ostringstream out;
            out.precision(17);
            out << "weights at state " << i + 1 << " sum to " << total;
            throw InvalidPolicyError(out.str());
        }
    }
    return chain;
}

namespace {

// Reachability of every node from node 0 along edges selected by `row`.
bool all_reachable(const Eigen::MatrixXd& transition, bool forward) {
    const int S = static_cast<int>(transition.rows());
    std::vector<char> seen(S, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v = 0; v < S; ++v) {
            const double p = forward ? transition(u, v) : transition(v, u);
            if (p > 0.0 && !seen[v]) {
                seen[v] = 1;
                ++count;
                stack.push_back(v);
            }
        }
    }
    return count == S;
}

} // namespace

bool is_irreducible(const Eigen::MatrixXd& transition) {
    if (transition.rows() <= 1) return true;
    return all_reachable(transition, true) && all_reachable(transition, false);
}

} // namespace mvmdp
