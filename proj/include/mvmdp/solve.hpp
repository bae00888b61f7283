#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mvmdp/constrain.hpp"
#include "mvmdp/model.hpp"

namespace mvmdp {

/// Absolute slack when comparing improvement scores; the incumbent action is
/// kept whenever it lies within this slack of the per-state minimum, which is
/// what makes the stopping rule sound.
inline constexpr double kTieTolerance = 1e-10;

/// Per-state improvement scores of one iteration, aligned with the feasible
/// action sets: scores[i][k] belongs to sets.per_state[i][k].
using ImprovementScores = std::vector<std::vector<double>>;

struct IterationRecord {
    DeterministicPolicy policy;
    /// Second-moment vector g (policy iteration) or value function sweep
    /// (value iteration).
    Eigen::VectorXd values;
    ImprovementScores scores;
};

struct SolveResult {
    DeterministicPolicy optimal_policy;
    ValueVector optimal_variance;
    ValueVector target;
    int iterations = 0;
    std::vector<IterationRecord> trace;
};

/// Minimizes the variance of the total discounted reward over the policies
/// whose mean equals the target, by policy iteration on the equivalent
/// beta^2-discounted problem.
///
/// Each sweep evaluates the second moment g of the current policy and picks,
/// per state, the feasible action minimizing
///   beta^2 sum_j p(j|i,a) g(j) + r(i,a)^2 + 2 beta r(i,a) sum_j p(j|i,a) target(j).
/// The incumbent is kept when it attains the minimum within `tie_tol`; among
/// other tied actions the smallest label wins. Stops at the first unchanged
/// sweep; the variance descends entrywise along the way, so this terminates
/// within |feasible policy space| sweeps and the fixpoint minimizes the
/// variance entrywise.
SolveResult policy_iteration(const MdpModel& model, const FeasibleSets& sets,
                             std::optional<DeterministicPolicy> initial = std::nullopt,
                             double tie_tol = kTieTolerance);

/// Value iteration on the optimality equation
///   V(i) = min_{a feasible} { h(i,a) + beta^2 sum_j p(j|i,a) V(j) },
/// where h(i,a) folds the target in place of the mean. Sweeps stop when the
/// sup-norm step falls below epsilon (1-beta^2) / (2 beta^2), the standard
/// epsilon-optimality bound at discount beta^2. The greedy policy of the
/// final sweep is re-evaluated exactly.
SolveResult value_iteration(const MdpModel& model, const FeasibleSets& sets, double epsilon,
                            std::optional<Eigen::VectorXd> initial_values = std::nullopt);

struct BruteForceResult {
    /// True when one policy's variance is entrywise <= every other's.
    bool has_dominator = false;
    std::optional<SolveResult> best;
    /// All policies attaining the same minimal variance vector (first one is
    /// best->optimal_policy). Populated only when has_dominator.
    std::vector<DeterministicPolicy> co_optimal;
    /// Pareto-minimal (policy, variance) pairs when no dominator exists.
    std::vector<std::pair<DeterministicPolicy, ValueVector>> pareto;
    long long evaluated = 0;
};

/// Evaluates every feasible policy. Oracle for the iterative solvers; also
/// the honest fallback when no entrywise dominator exists (possible for a
/// general multi-objective problem, never for this one in exact arithmetic).
BruteForceResult brute_force(const MdpModel& model, const FeasibleSets& sets,
                             long long cap = 1'000'000);

struct DominanceViolation {
    int sample = 0;
    double mean_deviation = 0.0;
    double variance_shortfall = 0.0;
};

struct DominanceReport {
    int num_samples = 0;
    std::uint64_t seed = 0;
    std::vector<DominanceViolation> violations;
    double max_mean_deviation = 0.0;   // max over samples of ||J_theta - target||_inf
    double min_variance_margin = 0.0;  // min over samples/components of sigma2_theta - sigma2*
};

/// Samples randomized policies over the feasible sets (symmetric Dirichlet
/// per state) and checks that each keeps the target mean within 1e-7 and
/// never beats the deterministic optimum's variance by more than 1e-8.
/// Violations are returned as data, not thrown.
DominanceReport check_randomized_dominance(const MdpModel& model, const FeasibleSets& sets,
                                           const SolveResult& result, int num_samples,
                                           std::uint64_t seed);

} // namespace mvmdp
