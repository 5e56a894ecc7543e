#pragma once

#include <string>

#include <Eigen/Dense>

#include "acmdp/matrix.hpp"

namespace acmdp {

/// Largest condition number estimate accepted by the checked solvers.
inline constexpr double kMaxCondition = 1e8;

/// LU with partial pivoting; throws SingularSolve when the reciprocal
/// condition estimate falls below 1 / kMaxCondition.
Eigen::MatrixXd solve_checked(const Eigen::MatrixXd& a, const Eigen::MatrixXd& rhs, const std::string& what);

Eigen::MatrixXd to_eigen(const Matrix<double>& m);
Matrix<double> from_eigen(const Eigen::MatrixXd& m);

}  // namespace acmdp
