#pragma once

#include <utility>

#include "mvmdp/model.hpp"

namespace mvmdp {

/// Feasibility slack used when an operation requires a policy's mean to equal
/// a target vector. Looser than the solver tolerance to absorb round-off.
inline constexpr double kFeasibilityTolerance = 1e-7;

/// Expected total discounted reward per start state: J = (I - beta P)^{-1} r,
/// the unique solution of J = r + beta P J.
ValueVector mean_performance(const MdpModel& model, const DeterministicPolicy& policy);

/// Transformed reward h with
///   h(i) = r(i)^2 + 2 beta r(i) (P J)(i) + beta^2 (P J^2)(i) - J(i)^2.
/// Discounting h at beta^2 over the same chain reproduces the variance of the
/// total discounted reward. `mean` must be the policy's mean vector (or a
/// target known to equal it).
ValueVector variance_reward(const MdpModel& model, const DeterministicPolicy& policy,
                            const ValueVector& mean);

/// Variance of the total discounted reward per start state:
/// sigma^2 = (I - beta^2 P)^{-1} h.
ValueVector variance(const MdpModel& model, const DeterministicPolicy& policy);

/// Same quantity through the second-moment route: with
/// f = r^2 + 2 beta r (P J), sigma^2 = (I - beta^2 P)^{-1} f - J^2.
/// Agrees with variance() to solver precision; kept as an independent path.
ValueVector variance_via_second_moment(const MdpModel& model, const DeterministicPolicy& policy);

/// Second moment of the return, g(i) = sigma^2(i) + target(i)^2. Requires the
/// policy's mean to equal `target` within `feasibility_tol`; throws
/// InfeasiblePolicyError otherwise, since improvement steps built on g are
/// only valid inside the mean-constrained policy set.
ValueVector second_moment(const MdpModel& model, const DeterministicPolicy& policy,
                          const ValueVector& target,
                          double feasibility_tol = kFeasibilityTolerance);

/// Mean and variance of the chain induced by a randomized policy. The
/// variance uses the mixture reward
///   h(i) = sum_a theta_{i,a} [ r(i,a)^2 + 2 beta r(i,a) sum_j p(j|i,a) J(j) ]
///          + beta^2 sum_j p(j|i) J(j)^2 - J(i)^2,
/// which is not the theta-mixture of the per-action transformed rewards: the
/// quadratic terms run over the mixed chain.
std::pair<ValueVector, ValueVector> evaluate_randomized(const MdpModel& model,
                                                        const RandomizedPolicy& policy);

} // namespace mvmdp
