#pragma once

#include <Eigen/Dense>

namespace mvmdp {

/// Linear system (I - gamma P) x = b with P row stochastic and 0 < gamma < 1.
/// The spectral radius of gamma P is gamma, so the matrix is always invertible
/// and x is the unique fixed point of x = b + gamma P x.
struct DiscountedSystem {
    Eigen::MatrixXd transition;
    double gamma = 0.0;
    Eigen::VectorXd rhs;
};

/// Residual contract of solve_discounted, relative to max(1, ||b||_inf).
inline constexpr double kSolveTolerance = 1e-9;

/// Solves (I - gamma P) x = b by dense LU with partial pivoting, with one
/// refinement pass if the residual misses the contract.
Eigen::VectorXd solve_discounted(const DiscountedSystem& system);

/// True iff every entry of (I - gamma P)^{-1} is strictly positive,
/// obtained by solving the S unit-basis systems.
bool positive_inverse_check(const Eigen::MatrixXd& transition, double gamma);

} // namespace mvmdp
