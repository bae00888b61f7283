#pragma once

#include <vector>

#include "mvmdp/model.hpp"

namespace mvmdp {

/// Means computed from the same model agree to far better than this when the
/// policies are genuinely mean-equivalent.
inline constexpr double kMeanClassTolerance = 1e-6;

/// Entries come from finite-precision solves, so dominance cannot hinge on
/// exact comparisons: coordinates within this slack count as equal, and a
/// strict edge must clear it.
inline constexpr double kDominanceEpsilon = 1e-9;

struct FrontierEntry {
    DeterministicPolicy policy;
    ValueVector mean;
    ValueVector variance;
};

struct FrontierReport {
    std::vector<FrontierEntry> entries;
    /// Partition of entry indices by mean vector (entrywise tolerance).
    std::vector<std::vector<int>> mean_classes;
    /// Indices of entries not dominated under (maximize mean, minimize
    /// variance), both entrywise.
    std::vector<int> efficient_set;
};

/// Mean and variance of every deterministic policy, in lexicographic policy
/// order. `cap` bounds the total policy count.
std::vector<FrontierEntry> enumerate_all(const MdpModel& model, long long cap = 1'000'000);

/// Entry e dominates e' when mean(e) >= mean(e') and variance(e) <= variance(e')
/// entrywise with at least one strict inequality across the 2S coordinates.
bool dominates(const FrontierEntry& a, const FrontierEntry& b,
               double epsilon = kDominanceEpsilon);

/// Undominated entries plus the mean-class partition.
FrontierReport efficient_frontier(std::vector<FrontierEntry> entries,
                                  double mean_tolerance = kMeanClassTolerance,
                                  double epsilon = kDominanceEpsilon);

/// Groups entry indices by mean vector; each class is a candidate target for
/// the constrained solvers.
std::vector<std::vector<int>> mean_classes(const std::vector<FrontierEntry>& entries,
                                           double tolerance);

} // namespace mvmdp
