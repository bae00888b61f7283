#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <string>

#include "mvmdp/constrain.hpp"
#include "mvmdp/evaluate.hpp"
#include "support.hpp"

using namespace mvmdp;
using namespace mvmdp::test;

TEST_CASE("feasible sets of the bundled model") {
    MdpModel model = two_state_model();
    SUBCASE("high target") {
        FeasibleSets sets = feasible_sets(model, target({2.5, 4.5}), 1e-7);
        CHECK(sets.per_state[0] == std::vector<int>{1, 2});
        CHECK(sets.per_state[1] == std::vector<int>{1, 3, 4});
        CHECK(sets.policy_count() == 6);
    }
    SUBCASE("low target") {
        FeasibleSets sets = feasible_sets(model, target({2.125, 3.375}), 1e-7);
        CHECK(sets.per_state[0] == std::vector<int>{2, 3});
        CHECK(sets.per_state[1] == std::vector<int>{2});
        CHECK(sets.policy_count() == 2);
    }
    SUBCASE("unreachable target leaves every state empty") {
        FeasibleSets sets = feasible_sets(model, target({0.0, 0.0}), 1e-7);
        CHECK(sets.per_state[0].empty());
        CHECK(sets.per_state[1].empty());
        CHECK(sets.first_empty_state() == 0);
        CHECK(sets.policy_count() == 0);
    }
}

TEST_CASE("enumeration yields the exact product") {
    MdpModel model = two_state_model();
    FeasibleSets sets = feasible_sets(model, target({2.5, 4.5}), 1e-7);
    std::vector<DeterministicPolicy> policies = enumerate_feasible_policies(sets);
    REQUIRE(policies.size() == 6);
    const std::vector<DeterministicPolicy> expected{
        policy({1, 1}), policy({1, 3}), policy({1, 4}),
        policy({2, 1}), policy({2, 3}), policy({2, 4}),
    };
    CHECK(policies == expected);

    FeasibleSets low = feasible_sets(model, target({2.125, 3.375}), 1e-7);
    std::vector<DeterministicPolicy> pair = enumerate_feasible_policies(low);
    CHECK(pair == std::vector<DeterministicPolicy>{policy({2, 2}), policy({3, 2})});
}

TEST_CASE("singleton sets give exactly one policy") {
    FeasibleSets sets;
    sets.per_state = {{2}, {1}};
    sets.target = target({0.0, 0.0});
    std::vector<DeterministicPolicy> policies = enumerate_feasible_policies(sets);
    REQUIRE(policies.size() == 1);
    CHECK(policies.front() == policy({2, 1}));
}

TEST_CASE("enumerating an empty set names the first empty state") {
    FeasibleSets sets;
    sets.per_state = {{1}, {}, {}};
    sets.target = target({0.0, 0.0, 0.0});
    try {
        enumerate_feasible_policies(sets);
        FAIL("expected EmptyFeasibleSetError");
    } catch (const EmptyFeasibleSetError& e) {
        CHECK(e.state == 2);
        CHECK(std::string(e.what()).find("state 2") != std::string::npos);
    }
}

TEST_CASE("enumeration stays lazy behind the cap") {
    FeasibleSets sets;
    sets.per_state = {{1, 2}, {1, 2}};
    sets.target = target({0.0, 0.0});
    CHECK_THROWS_AS(enumerate_feasible_policies(sets, 3), EnumerationTooLargeError);
    PolicyEnumerator stream(sets);
    CHECK(stream.next().has_value());  // streaming has no cap
}

TEST_CASE("membership agrees with the known table") {
    MdpModel model = two_state_model();
    CHECK(verify_membership(model, policy({1, 4}), target({2.5, 4.5}), 1e-7));
    CHECK_FALSE(verify_membership(model, policy({1, 2}), target({2.5, 4.5}), 1e-7));
    ValueVector own = mean_performance(model, policy({1, 2}));
    CHECK(verify_membership(model, policy({1, 2}), {Role::Target, own.values}, 1e-9));
}

TEST_CASE("set membership and mean membership are the same thing") {
    std::mt19937 rng(909);
    for (int trial = 0; trial < 100; ++trial) {
        const int S = 2 + static_cast<int>(rng() % 3);        // 2..4 states
        const int A = 2 + static_cast<int>(rng() % 3);        // 2..4 actions
        MdpModel model = random_model(rng, S, A, 0.5);
        DeterministicPolicy seedling;
        for (int i = 0; i < S; ++i) seedling.actions.push_back(1 + static_cast<int>(rng() % A));
        ValueVector lambda{Role::Target, mean_performance(model, seedling).values};
        FeasibleSets sets = feasible_sets(model, lambda, 1e-7);
        for (const DeterministicPolicy& d : all_policies(model)) {
            bool in_sets = true;
            for (int i = 0; i < S; ++i) {
                const auto& set = sets.per_state[i];
                in_sets = in_sets &&
                          std::find(set.begin(), set.end(), d.actions[i]) != set.end();
            }
            CHECK(in_sets == verify_membership(model, d, lambda, 1e-7));
        }
    }
}

TEST_CASE("designed instances recover their designated sets") {
    std::mt19937 rng(4040);
    for (int trial = 0; trial < 30; ++trial) {
        DesignedInstance instance = designed_instance(rng, 3, 3, 2, 0.5);
        FeasibleSets sets = feasible_sets(instance.model, instance.target, 1e-7);
        for (int i = 0; i < 3; ++i) {
            CHECK(static_cast<int>(sets.per_state[i].size()) >= instance.feasible_per_state);
            for (int a = 1; a <= instance.feasible_per_state; ++a) {
                CHECK(std::find(sets.per_state[i].begin(), sets.per_state[i].end(), a) !=
                      sets.per_state[i].end());
            }
        }
    }
}

TEST_CASE("feasible sets do not depend on the action listing order") {
    MdpModel model = two_state_model();
    std::vector<StateSpec> scrambled(model.states());
    std::reverse(scrambled[0].actions.begin(), scrambled[0].actions.end());
    std::swap(scrambled[1].actions[0], scrambled[1].actions[3]);
    MdpModel reordered(std::move(scrambled), model.beta());
    FeasibleSets a = feasible_sets(model, target({2.5, 4.5}), 1e-7);
    FeasibleSets b = feasible_sets(reordered, target({2.5, 4.5}), 1e-7);
    CHECK(a.per_state == b.per_state);
}

TEST_CASE("feasible sets grow with the tolerance") {
    MdpModel model = two_state_model();
    const double tolerances[] = {1e-9, 1e-7, 1e-3, 0.2, 1.0};
    std::vector<std::vector<std::set<int>>> by_tolerance;
    for (double tol : tolerances) {
        FeasibleSets sets = feasible_sets(model, target({2.5, 4.5}), tol);
        std::vector<std::set<int>> as_sets;
        for (const auto& labels : sets.per_state) {
            as_sets.emplace_back(labels.begin(), labels.end());
        }
        by_tolerance.push_back(std::move(as_sets));
    }
    for (std::size_t k = 1; k < by_tolerance.size(); ++k) {
        for (std::size_t i = 0; i < by_tolerance[k].size(); ++i) {
            CHECK(std::includes(by_tolerance[k][i].begin(), by_tolerance[k][i].end(),
                                by_tolerance[k - 1][i].begin(), by_tolerance[k - 1][i].end()));
        }
    }
}

TEST_CASE("contract checks") {
    MdpModel model = two_state_model();
    CHECK_THROWS_AS(feasible_sets(model, target({1.0}), 1e-7), ContractError);
    CHECK_THROWS_AS(feasible_sets(model, target({1.0, 2.0}), 0.0), ContractError);
}
