#include "mvmdp/linsolve.hpp"

#include <algorithm>
#include <string>

#include "mvmdp/errors.hpp"

namespace mvmdp {

Eigen::VectorXd solve_discounted(const DiscountedSystem& system) {
    const auto S = system.transition.rows();
    if (system.transition.cols() != S) {
        throw ContractError("transition matrix must be square");
    }
    if (system.rhs.size() != S) {
        throw ContractError("rhs has length " + std::to_string(system.rhs.size()) + ", expected " +
                            std::to_string(S));
    }
    if (!(system.gamma > 0.0) || !(system.gamma < 1.0)) {
        throw ContractError("discount must lie strictly in (0,1)");
    }

    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(S, S) - system.gamma * system.transition;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    Eigen::VectorXd x = lu.solve(system.rhs);

    const double bound = kSolveTolerance * std::max(1.0, system.rhs.lpNorm<Eigen::Infinity>());
    Eigen::VectorXd residual = system.rhs - A * x;
    if (residual.lpNorm<Eigen::Infinity>() > bound) {
        x += lu.solve(residual);
    }
    return x;
}

bool positive_inverse_check(const Eigen::MatrixXd& transition, double gamma) {
    const auto S = transition.rows();
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(S, S) - gamma * transition;
    Eigen::MatrixXd inverse = A.partialPivLu().solve(Eigen::MatrixXd::Identity(S, S));
    return (inverse.array() > 0.0).all();
}

} // namespace mvmdp
