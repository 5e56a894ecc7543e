#include "acmdp/linalg.hpp"

#include "acmdp/errors.hpp"

namespace acmdp {

Eigen::MatrixXd solve_checked(const Eigen::MatrixXd& a, const Eigen::MatrixXd& rhs, const std::string& what) {
    if (a.rows() == 0) return Eigen::MatrixXd(0, rhs.cols());
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    const double rcond = lu.rcond();
    if (!(rcond >= 1.0 / kMaxCondition))
        throw SingularSolve(what + ": condition estimate " + std::to_string(1.0 / rcond) + " exceeds 1e8");
    return lu.solve(rhs);
}

Eigen::MatrixXd to_eigen(const Matrix<double>& m) {
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

Matrix<double> from_eigen(const Eigen::MatrixXd& m) {
    Matrix<double> out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

}  // namespace acmdp
