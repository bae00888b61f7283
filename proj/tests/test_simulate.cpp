#include <doctest.h>

#include <cmath>
#include <random>

#include "mvmdp/evaluate.hpp"
#include "mvmdp/simulate.hpp"
#include "support.hpp"

using namespace mvmdp;
using namespace mvmdp::test;

TEST_CASE("identical inputs reproduce bitwise") {
    MdpModel model = two_state_model();
    SimulationEstimate a = simulate_policy(model, policy({2, 1}), 0, 2000, 30, 99);
    SimulationEstimate b = simulate_policy(model, policy({2, 1}), 0, 2000, 30, 99);
    CHECK(a.mean_estimate == b.mean_estimate);
    CHECK(a.variance_estimate == b.variance_estimate);
    CHECK(a.std_error_mean == b.std_error_mean);
    CHECK(a.std_error_variance == b.std_error_variance);
    SimulationEstimate c = simulate_policy(model, policy({2, 1}), 0, 2000, 30, 100);
    CHECK(c.mean_estimate != a.mean_estimate);
}

TEST_CASE("deterministic chain is estimated exactly") {
    MdpModel model = single_state_model(1.0, 0.5);
    const int horizon = 40;
    SimulationEstimate estimate = simulate_policy(model, policy({1}), 0, 100, horizon, 7);
    double truncated = 0.0;
    double discount = 1.0;
    for (int t = 0; t <= horizon; ++t) {
        truncated += discount;
        discount *= 0.5;
    }
    CHECK(estimate.mean_estimate == truncated);
    CHECK(estimate.variance_estimate == 0.0);
    CHECK(estimate.std_error_mean == 0.0);
}

TEST_CASE("estimates agree with the closed forms at modest path counts") {
    MdpModel model = two_state_model();
    const DeterministicPolicy d = policy({2, 1});
    const int horizon = default_horizon(model, d);
    SimulationEstimate estimate = simulate_policy(model, d, 0, 200000, horizon, 20240801);
    const double mean = mean_performance(model, d).values[0];
    const double sigma2 = variance(model, d).values[0];
    CHECK(std::abs(estimate.mean_estimate - mean) <= 3.0 * estimate.std_error_mean);
    CHECK(std::abs(estimate.variance_estimate - sigma2) <= 3.0 * estimate.std_error_variance);
    CHECK(estimate.truncation_bound <= 1e-6);
    CHECK(estimate.rng_id == std::string("splitmix64"));
}

TEST_CASE("randomized policies can be simulated") {
    MdpModel model = two_state_model();
    RandomizedPolicy theta;
    theta.weights = {{{1, 0.5}, {2, 0.5}},
                     {{1, 1.0 / 3.0}, {3, 1.0 / 3.0}, {4, 1.0 / 3.0}}};
    auto [mean, sigma2] = evaluate_randomized(model, theta);
    SimulationEstimate estimate = simulate_policy(model, theta, 1, 200000, 30, 5150);
    CHECK(std::abs(estimate.mean_estimate - mean.values[1]) <= 3.0 * estimate.std_error_mean);
    CHECK(std::abs(estimate.variance_estimate - sigma2.values[1]) <=
          3.0 * estimate.std_error_variance);
}

TEST_CASE("default horizon honors the truncation target") {
    MdpModel model = two_state_model();
    const int horizon = default_horizon(model, policy({2, 1}), 1e-6);
    const double beta = model.beta();
    const double r_max = 2.5;  // largest |reward| under (2,1)
    CHECK(r_max * std::pow(beta, horizon + 1) / (1.0 - beta) <= 1e-6);
    CHECK(r_max * std::pow(beta, horizon) / (1.0 - beta) > 1e-6);
}

TEST_CASE("truncation bound really bounds the truncation error") {
    MdpModel model = two_state_model();
    for (const DeterministicPolicy& d : all_policies(model)) {
        InducedChain chain = induced_chain(model, d);
        const double beta = model.beta();
        Eigen::VectorXd exact = mean_performance(model, d).values;
        for (int horizon : {3, 8, 20}) {
            // Exact truncated expectation by backward recursion.
            Eigen::VectorXd value = chain.reward;
            for (int t = 0; t < horizon; ++t) {
                value = chain.reward + beta * (chain.transition * value);
            }
            const double r_max = chain.reward.cwiseAbs().maxCoeff();
            const double bound = r_max * std::pow(beta, horizon + 1) / (1.0 - beta);
            CHECK((exact - value).lpNorm<Eigen::Infinity>() <= bound + 1e-12);
        }
    }
}

TEST_CASE("standard errors shrink like the square root of the path count") {
    MdpModel model = two_state_model();
    double ratio_sum = 0.0;
    const int trials = 20;
    for (int trial = 0; trial < trials; ++trial) {
        SimulationEstimate small =
            simulate_policy(model, policy({2, 1}), 0, 2000, 30, 1000 + trial);
        SimulationEstimate big =
            simulate_policy(model, policy({2, 1}), 0, 4000, 30, 5000 + trial);
        ratio_sum += big.std_error_mean / small.std_error_mean;
    }
    const double average = ratio_sum / trials;
    CHECK(average >= 1.0 / std::sqrt(2.0) - 0.1);
    CHECK(average <= 1.0 / std::sqrt(2.0) + 0.1);
}

TEST_CASE("one-step reward check matches the analytic transform") {
    MdpModel model = two_state_model();
    TransformedRewardCheck check = sample_path_reward_check(model, policy({1, 1}), 200000, 31337);
    for (int i = 0; i < 2; ++i) {
        CHECK(std::abs(check.z_score[i]) <= 4.0);
    }

    std::mt19937 rng(808);
    MdpModel random = random_model(rng, 3, 2, 0.5);
    TransformedRewardCheck sweep =
        sample_path_reward_check(random, policy({1, 2, 1}), 200000, 90210);
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(sweep.z_score[i]) <= 4.0);
    }
}

TEST_CASE("deterministic transitions give exact reward-check matches") {
    MdpModel model = single_state_model(1.0, 0.5);
    TransformedRewardCheck check = sample_path_reward_check(model, policy({1}), 1000, 5);
    CHECK(check.std_error[0] == 0.0);
    CHECK(check.z_score[0] == 0.0);
}

TEST_CASE("input contracts") {
    MdpModel model = two_state_model();
    CHECK_THROWS_AS(simulate_policy(model, policy({1, 1}), 5, 100, 10, 1), ContractError);
    CHECK_THROWS_AS(simulate_policy(model, policy({1, 1}), 0, 1, 10, 1), ContractError);
    CHECK_THROWS_AS(simulate_policy(model, policy({1, 1}), 0, 100, 0, 1), ContractError);
}
