#pragma once

#include <optional>
#include <vector>

#include "mvmdp/model.hpp"

namespace mvmdp {

/// Default slack on the per-action consistency residual
/// r(i,a) + beta sum_j p(j|i,a) target(j) - target(i). Targets obtained from a
/// prior solve carry ~1e-9 residual; one order of safety margin on top.
/// Targets typed in from rounded output need an explicitly looser value.
inline constexpr double kFeasibilityResidualTolerance = 1e-7;

/// Per-state feasible action sets. Their Cartesian product is exactly the set
/// of deterministic policies whose mean vector equals `target`.
struct FeasibleSets {
    std::vector<std::vector<int>> per_state;  // sorted action labels
    ValueVector target;
    double tolerance = kFeasibilityResidualTolerance;

    bool all_nonempty() const;
    /// 0-based index of the first state with no feasible action, if any.
    std::optional<int> first_empty_state() const;
    /// Product of the per-state set sizes, saturating at LLONG_MAX.
    long long policy_count() const;
};

FeasibleSets feasible_sets(const MdpModel& model, const ValueVector& target, double tolerance);

/// Streams the Cartesian product of the feasible sets in lexicographic policy
/// order (last state varies fastest). Throws EmptyFeasibleSetError on
/// construction if some state has no feasible action.
class PolicyEnumerator {
public:
    explicit PolicyEnumerator(const FeasibleSets& sets);

    std::optional<DeterministicPolicy> next();

private:
    std::vector<std::vector<int>> sets_;
    std::vector<std::size_t> index_;
    bool done_ = false;
};

/// Materializes the whole product. `cap` bounds the policy count.
std::vector<DeterministicPolicy> enumerate_feasible_policies(const FeasibleSets& sets,
                                                             long long cap = 1'000'000);

/// True iff the policy's mean vector equals `target` within `tolerance` in
/// the max norm. Agrees with per-state feasible-set membership.
bool verify_membership(const MdpModel& model, const DeterministicPolicy& policy,
                       const ValueVector& target, double tolerance);

} // namespace mvmdp
