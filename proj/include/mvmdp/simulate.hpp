#pragma once

#include <cstdint>

#include "mvmdp/model.hpp"

namespace mvmdp {

/// Monte Carlo estimate of the mean and variance of the total discounted
/// reward from one start state. All randomness derives from (seed, path
/// index) through the generator named in rng_id, so results are exactly
/// reproducible.
struct SimulationEstimate {
    int start_state = 0;  // 0-based
    double mean_estimate = 0.0;
    double variance_estimate = 0.0;  // unbiased sample variance
    double std_error_mean = 0.0;
    double std_error_variance = 0.0;  // fourth-moment asymptotic formula
    long num_paths = 0;
    int horizon = 0;
    /// Valid bound on the truncation error of the mean:
    /// r_max beta^(horizon+1) / (1 - beta) over the induced chain.
    double truncation_bound = 0.0;
    std::uint64_t seed = 0;
    const char* rng_id = nullptr;
};

/// Smallest horizon whose truncation bound is at most `tolerance` for the
/// chain this policy induces.
int default_horizon(const MdpModel& model, const DeterministicPolicy& policy,
                    double tolerance = 1e-6);

SimulationEstimate simulate_policy(const MdpModel& model, const DeterministicPolicy& policy,
                                   int start_state, long num_paths, int horizon,
                                   std::uint64_t seed);

/// Randomized variant: draws an action from the per-state distribution at
/// every step of every path.
SimulationEstimate simulate_policy(const MdpModel& model, const RandomizedPolicy& policy,
                                   int start_state, long num_paths, int horizon,
                                   std::uint64_t seed);

/// One-step Monte Carlo check of the transformed reward: estimates
/// E[(r(i) + beta J(next))^2 - J(i)^2] per state and reports z-scores against
/// the analytic values.
struct TransformedRewardCheck {
    Eigen::VectorXd analytic;
    Eigen::VectorXd estimated;
    Eigen::VectorXd std_error;
    Eigen::VectorXd z_score;
    long num_samples = 0;
    std::uint64_t seed = 0;
    const char* rng_id = nullptr;
};

TransformedRewardCheck sample_path_reward_check(const MdpModel& model,
                                                const DeterministicPolicy& policy,
                                                long num_samples, std::uint64_t seed);

} // namespace mvmdp
