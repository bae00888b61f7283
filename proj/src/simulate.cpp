#include "mvmdp/simulate.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "mvmdp/evaluate.hpp"
#include "mvmdp/rng.hpp"

namespace mvmdp {

namespace {

void require_run_shape(const MdpModel& model, int start_state, long num_paths, int horizon) {
    if (start_state < 0 || start_state >= model.num_states()) {
        throw ContractError("start state " + std::to_string(start_state + 1) + " outside 1.." +
                            std::to_string(model.num_states()));
    }
    if (num_paths < 2) {
        throw ContractError("need at least 2 paths for a variance estimate");
    }
    if (horizon < 1) {
        throw ContractError("horizon must be at least 1");
    }
}

int pick(const Eigen::VectorXd& distribution, double u) {
    double cumulative = 0.0;
    const int n = static_cast<int>(distribution.size());
    for (int j = 0; j < n; ++j) {
        cumulative += distribution[j];
        if (u < cumulative) return j;
    }
    return n - 1;  // u landed in the rounding gap past the last bucket
}

double truncation_bound(double r_max, double beta, int horizon) {
    return r_max * std::pow(beta, horizon + 1) / (1.0 - beta);
}

/// Discounted returns -> estimate. Sequential accumulation keeps results
/// bit-reproducible for a fixed seed.
SimulationEstimate summarize(const std::vector<double>& returns, int start_state, int horizon,
                             double bound, std::uint64_t seed) {
    const long n = static_cast<long>(returns.size());
    double sum = 0.0;
    for (double x : returns) sum += x;
    const double mean = sum / static_cast<double>(n);

    double m2 = 0.0;
    double m4 = 0.0;
    for (double x : returns) {
        const double d = x - mean;
        const double d2 = d * d;
        m2 += d2;
        m4 += d2 * d2;
    }
    const double variance = m2 / static_cast<double>(n - 1);
    const double central2 = m2 / static_cast<double>(n);
    const double central4 = m4 / static_cast<double>(n);

    SimulationEstimate estimate;
    estimate.start_state = start_state;
    estimate.mean_estimate = mean;
    estimate.variance_estimate = variance;
    estimate.std_error_mean = std::sqrt(variance / static_cast<double>(n));
    estimate.std_error_variance =
        std::sqrt(std::max(0.0, central4 - central2 * central2) / static_cast<double>(n));
    estimate.num_paths = n;
    estimate.horizon = horizon;
    estimate.truncation_bound = bound;
    estimate.seed = seed;
    estimate.rng_id = kRngId;
    return estimate;
}

} // namespace

int default_horizon(const MdpModel& model, const DeterministicPolicy& policy, double tolerance) {
    InducedChain chain = induced_chain(model, policy);
    const double r_max = chain.reward.cwiseAbs().maxCoeff();
    if (r_max == 0.0) return 1;
    const double beta = model.beta();
    int horizon = 1;
    while (truncation_bound(r_max, beta, horizon) > tolerance && horizon < 1'000'000) {
        ++horizon;
    }
    return horizon;
}

SimulationEstimate simulate_policy(const MdpModel& model, const DeterministicPolicy& policy,
                                   int start_state, long num_paths, int horizon,
                                   std::uint64_t seed) {
    require_run_shape(model, start_state, num_paths, horizon);
    InducedChain chain = induced_chain(model, policy);
    const int S = model.num_states();
    const double beta = model.beta();

    std::vector<Eigen::VectorXd> rows(S);
    for (int i = 0; i < S; ++i) rows[i] = chain.transition.row(i).transpose();

    std::vector<double> returns(static_cast<std::size_t>(num_paths));
    for (long path = 0; path < num_paths; ++path) {
        SplitMix64 rng = substream(seed, static_cast<std::uint64_t>(path));
        int state = start_state;
        double acc = 0.0;
        double discount = 1.0;
        for (int t = 0; t <= horizon; ++t) {
            acc += discount * chain.reward[state];
            discount *= beta;
            state = pick(rows[state], rng.next_double());
        }
        returns[static_cast<std::size_t>(path)] = acc;
    }

    const double r_max = chain.reward.cwiseAbs().maxCoeff();
    return summarize(returns, start_state, horizon, truncation_bound(r_max, beta, horizon), seed);
}

SimulationEstimate simulate_policy(const MdpModel& model, const RandomizedPolicy& policy,
                                   int start_state, long num_paths, int horizon,
                                   std::uint64_t seed) {
    require_run_shape(model, start_state, num_paths, horizon);
    (void)induced_chain_randomized(model, policy);  // validates support and weights
    const int S = model.num_states();
    const double beta = model.beta();

    // Flattened per-state supports.
    std::vector<std::vector<double>> weight(S);
    std::vector<std::vector<double>> reward(S);
    std::vector<std::vector<const Eigen::VectorXd*>> rows(S);
    double r_max = 0.0;
    for (int i = 0; i < S; ++i) {
        for (const ActionWeight& w : policy.weights[i]) {
            const ActionSpec* a = model.find_action(i, w.label);
            weight[i].push_back(w.weight);
            reward[i].push_back(a->reward);
            rows[i].push_back(&a->transition);
            r_max = std::max(r_max, std::abs(a->reward));
        }
    }

    std::vector<double> returns(static_cast<std::size_t>(num_paths));
    for (long path = 0; path < num_paths; ++path) {
        SplitMix64 rng = substream(seed, static_cast<std::uint64_t>(path));
        int state = start_state;
        double acc = 0.0;
        double discount = 1.0;
        for (int t = 0; t <= horizon; ++t) {
            const double u = rng.next_double();
            double cumulative = 0.0;
            std::size_t k = weight[state].size() - 1;
            for (std::size_t c = 0; c < weight[state].size(); ++c) {
                cumulative += weight[state][c];
                if (u < cumulative) { k = c; break; }
            }
            acc += discount * reward[state][k];
            discount *= beta;
            state = pick(*rows[state][k], rng.next_double());
        }
        returns[static_cast<std::size_t>(path)] = acc;
    }

    return summarize(returns, start_state, horizon, truncation_bound(r_max, beta, horizon), seed);
}

TransformedRewardCheck sample_path_reward_check(const MdpModel& model,
                                                const DeterministicPolicy& policy,
                                                long num_samples, std::uint64_t seed) {
    if (num_samples < 2) {
        throw ContractError("need at least 2 samples per state");
    }
    const int S = model.num_states();
    InducedChain chain = induced_chain(model, policy);
    const double beta = model.beta();
    ValueVector j = mean_performance(model, policy);
    ValueVector analytic = variance_reward(model, policy, j);

    TransformedRewardCheck check;
    check.analytic = analytic.values;
    check.estimated.resize(S);
    check.std_error.resize(S);
    check.z_score.resize(S);
    check.num_samples = num_samples;
    check.seed = seed;
    check.rng_id = kRngId;

    for (int i = 0; i < S; ++i) {
        const Eigen::VectorXd row = chain.transition.row(i).transpose();
        const double r = chain.reward[i];
        const double j2 = j.values[i] * j.values[i];
        SplitMix64 rng = substream(seed, static_cast<std::uint64_t>(i));
        double mean = 0.0;
        double m2 = 0.0;
        for (long n = 1; n <= num_samples; ++n) {
            const int next = pick(row, rng.next_double());
            const double value = (r + beta * j.values[next]) * (r + beta * j.values[next]) - j2;
            const double delta = value - mean;
            mean += delta / static_cast<double>(n);
            m2 += delta * (value - mean);
        }
        const double variance = m2 / static_cast<double>(num_samples - 1);
        const double se = std::sqrt(variance / static_cast<double>(num_samples));
        check.estimated[i] = mean;
        check.std_error[i] = se;
        const double gap = mean - analytic.values[i];
        if (se > 0.0) {
            check.z_score[i] = gap / se;
        } else {
            // Deterministic transition: the estimator has zero spread and must
            // match the analytic value outright.
            const double scale = std::max(1.0, std::abs(analytic.values[i]));
            check.z_score[i] =
                std::abs(gap) <= 1e-12 * scale ? 0.0 : std::numeric_limits<double>::infinity();
        }
    }
    return check;
}

} // namespace mvmdp
