#include "mvmdp/evaluate.hpp"

#include <string>

#include "mvmdp/linsolve.hpp"

namespace mvmdp {

namespace {

void require_length(const ValueVector& v, int S, const char* name) {
    if (v.size() != S) {
        throw ContractError(std::string(name) + " has length " + std::to_string(v.size()) +
                            ", expected " + std::to_string(S));
    }
}

// Contiguous copy of a matrix row. Dots on strided rows and on dense vectors
// can round differently; routing every row product through a copy keeps the
// deterministic and point-mass randomized paths bit-identical.
Eigen::VectorXd row_of(const Eigen::MatrixXd& m, int i) {
    return m.row(i).transpose();
}

} // namespace

ValueVector mean_performance(const MdpModel& model, const DeterministicPolicy& policy) {
    InducedChain chain = induced_chain(model, policy);
    Eigen::VectorXd j = solve_discounted({chain.transition, model.beta(), chain.reward});
    return {Role::Mean, std::move(j)};
}

ValueVector variance_reward(const MdpModel& model, const DeterministicPolicy& policy,
                            const ValueVector& mean) {
    const int S = model.num_states();
    require_length(mean, S, "mean vector");
    InducedChain chain = induced_chain(model, policy);
    const double beta = model.beta();
    const Eigen::VectorXd& j = mean.values;
    const Eigen::VectorXd j2 = j.cwiseProduct(j);

    Eigen::VectorXd h(S);
    for (int i = 0; i < S; ++i) {
        const Eigen::VectorXd row = row_of(chain.transition, i);
        const double r = chain.reward[i];
        h[i] = (r * r + 2.0 * beta * r * row.dot(j)) + beta * beta * row.dot(j2) - j2[i];
    }
    return {Role::VarianceReward, std::move(h)};
}

ValueVector variance(const MdpModel& model, const DeterministicPolicy& policy) {
    InducedChain chain = induced_chain(model, policy);
    const double beta = model.beta();
    ValueVector j{Role::Mean, solve_discounted({chain.transition, beta, chain.reward})};
    ValueVector h = variance_reward(model, policy, j);
    Eigen::VectorXd sigma2 = solve_discounted({chain.transition, beta * beta, h.values});
    return {Role::Variance, std::move(sigma2)};
}

ValueVector variance_via_second_moment(const MdpModel& model, const DeterministicPolicy& policy) {
    InducedChain chain = induced_chain(model, policy);
    const double beta = model.beta();
    const int S = model.num_states();
    Eigen::VectorXd j = solve_discounted({chain.transition, beta, chain.reward});

    Eigen::VectorXd f(S);
    for (int i = 0; i < S; ++i) {
        const double r = chain.reward[i];
        f[i] = r * r + 2.0 * beta * r * row_of(chain.transition, i).dot(j);
    }
    Eigen::VectorXd second = solve_discounted({chain.transition, beta * beta, f});
    return {Role::Variance, second - j.cwiseProduct(j)};
}

ValueVector second_moment(const MdpModel& model, const DeterministicPolicy& policy,
                          const ValueVector& target, double feasibility_tol) {
    const int S = model.num_states();
    require_length(target, S, "target vector");
    ValueVector j = mean_performance(model, policy);
    const double gap = (j.values - target.values).lpNorm<Eigen::Infinity>();
    if (gap > feasibility_tol) {
        throw InfeasiblePolicyError("policy " + policy.to_string() +
                                    " does not attain the target mean (max deviation " +
                                    std::to_string(gap) + ")");
    }
    ValueVector sigma2 = variance(model, policy);
    return {Role::SecondMoment, sigma2.values + target.values.cwiseProduct(target.values)};
}

std::pair<ValueVector, ValueVector> evaluate_randomized(const MdpModel& model,
                                                        const RandomizedPolicy& policy) {
    const int S = model.num_states();
    InducedChain mixed = induced_chain_randomized(model, policy);
    const double beta = model.beta();
    Eigen::VectorXd j = solve_discounted({mixed.transition, beta, mixed.reward});
    const Eigen::VectorXd j2 = j.cwiseProduct(j);

    Eigen::VectorXd h(S);
    for (int i = 0; i < S; ++i) {
        double mixture = 0.0;
        for (const ActionWeight& w : policy.weights[i]) {
            const ActionSpec* a = model.find_action(i, w.label);
            const double r = a->reward;
            mixture += w.weight * (r * r + 2.0 * beta * r * a->transition.dot(j));
        }
        h[i] = mixture + beta * beta * row_of(mixed.transition, i).dot(j2) - j2[i];
    }
    Eigen::VectorXd sigma2 = solve_discounted({mixed.transition, beta * beta, h});
    return {ValueVector{Role::Mean, std::move(j)}, ValueVector{Role::Variance, std::move(sigma2)}};
}

} // namespace mvmdp
