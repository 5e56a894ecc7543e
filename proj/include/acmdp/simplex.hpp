#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "acmdp/errors.hpp"
#include "acmdp/matrix.hpp"
#include "acmdp/scalar.hpp"

namespace acmdp {

inline constexpr std::size_t kMaxPivots = 1'000'000;

enum class SimplexStatus { Optimal, Infeasible, Unbounded };
std::string to_string(SimplexStatus status);

template <class T>
struct SimplexResult {
    SimplexStatus status = SimplexStatus::Infeasible;
    std::vector<T> x;
    T objective{};
    /// When infeasible: y with y^T A <= 0 and y^T b > 0.
    std::vector<T> farkas;
    std::size_t pivots = 0;
};

/**
 * min c^T x subject to A x = b, x >= 0. Dense two-phase tableau simplex with
 * Bland's rule. Phase one keeps the artificial columns so an infeasibility
 * certificate can be read from their reduced costs.
 */
template <class T>
class Simplex {
public:
    Simplex(const Matrix<T>& A, const std::vector<T>& b, const std::vector<T>& c, std::size_t pivot_cap = kMaxPivots)
        : m_(A.rows()), n_(A.cols()), cap_(pivot_cap), c_(c) {
        if (b.size() != m_ || c.size() != n_) throw DimensionMismatch("simplex: A, b and c sizes disagree");
        width_ = n_ + m_ + 1;
        tab_.assign(m_ * width_, T(0));
        sign_.assign(m_, T(1));
        for (std::size_t i = 0; i < m_; ++i) {
            if (b[i] < T(0)) sign_[i] = T(-1);
            for (std::size_t j = 0; j < n_; ++j) at(i, j) = sign_[i] * A(i, j);
            at(i, n_ + i) = T(1);
            at(i, width_ - 1) = sign_[i] * b[i];
        }
        basis_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) basis_[i] = n_ + i;
        active_.assign(m_, true);
    }

    SimplexResult<T> solve() {
        SimplexResult<T> out;
        // Phase one: minimize the sum of artificials.
        std::vector<T> phase1(n_ + m_, T(0));
        for (std::size_t i = 0; i < m_; ++i) phase1[n_ + i] = T(1);
        run(phase1, n_ + m_, out.pivots);
        const std::vector<T> rc = reduced_costs(phase1, n_ + m_);
        T infeas(0);
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] >= n_) infeas += at(i, width_ - 1);
        if (ScalarTraits<T>::exact ? infeas > T(0) : to_double(infeas) > kInfeasTol) {
            out.status = SimplexStatus::Infeasible;
            out.farkas.resize(m_);
            for (std::size_t i = 0; i < m_; ++i) out.farkas[i] = sign_[i] * (T(1) - rc[n_ + i]);
            return out;
        }
        drive_out_artificials(out.pivots);

        // Phase two on the original columns only.
        const bool bounded = run(c_, n_, out.pivots);
        if (!bounded) {
            out.status = SimplexStatus::Unbounded;
            return out;
        }
        out.status = SimplexStatus::Optimal;
        out.x.assign(n_, T(0));
        for (std::size_t i = 0; i < m_; ++i)
            if (active_[i] && basis_[i] < n_) out.x[basis_[i]] = at(i, width_ - 1);
        out.objective = T(0);
        for (std::size_t j = 0; j < n_; ++j) out.objective += c_[j] * out.x[j];
        return out;
    }

private:
    static constexpr double kInfeasTol = 1e-9;

    T& at(std::size_t i, std::size_t j) { return tab_[i * width_ + j]; }
    const T& at(std::size_t i, std::size_t j) const { return tab_[i * width_ + j]; }

    bool positive(const T& v) const {
        if constexpr (ScalarTraits<T>::exact) return v > T(0);
        else return v > ScalarTraits<T>::pivot_eps;
    }

    std::vector<T> reduced_costs(const std::vector<T>& cost, std::size_t cols) const {
        std::vector<T> rc(cols);
        for (std::size_t j = 0; j < cols; ++j) {
            T r = cost[j];
            for (std::size_t i = 0; i < m_; ++i)
                if (active_[i] && at(i, j) != T(0)) r -= cost[basis_[i]] * at(i, j);
            rc[j] = r;
        }
        return rc;
    }

    void pivot(std::size_t row, std::size_t col) {
        const T inv = T(1) / at(row, col);
        for (std::size_t j = 0; j < width_; ++j) at(row, j) *= inv;
        at(row, col) = T(1);
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == row || !active_[i]) continue;
            const T f = at(i, col);
            if (f == T(0)) continue;
            for (std::size_t j = 0; j < width_; ++j)
                if (at(row, j) != T(0)) at(i, j) -= f * at(row, j);
            at(i, col) = T(0);
        }
        basis_[row] = col;
    }

    // Bland's rule over columns [0, cols). Returns false when unbounded.
    bool run(const std::vector<T>& cost, std::size_t cols, std::size_t& pivots) {
        std::vector<T> rc = reduced_costs(cost, cols);
        for (;;) {
            std::size_t enter = cols;
            for (std::size_t j = 0; j < cols; ++j)
                if (positive(-rc[j])) {
                    enter = j;
                    break;
                }
            if (enter == cols) return true;
            std::size_t leave = m_;
            T best_ratio{};
            for (std::size_t i = 0; i < m_; ++i) {
                if (!active_[i] || !positive(at(i, enter))) continue;
                const T ratio = at(i, width_ - 1) / at(i, enter);
                if (leave == m_ || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave == m_) return false;
            if (++pivots > cap_) throw NumericalStall("simplex exceeded " + std::to_string(cap_) + " pivots");
            pivot(leave, enter);
            const T f = rc[enter];
            for (std::size_t j = 0; j < cols; ++j)
                if (at(leave, j) != T(0)) rc[j] -= f * at(leave, j);
            rc[enter] = T(0);
        }
    }

    void drive_out_artificials(std::size_t& pivots) {
        for (std::size_t i = 0; i < m_; ++i) {
            if (!active_[i] || basis_[i] < n_) continue;
            std::size_t col = n_;
            for (std::size_t j = 0; j < n_; ++j) {
                if (positive(at(i, j)) || positive(-at(i, j))) {
                    col = j;
                    break;
                }
            }
            if (col == n_) {
                active_[i] = false;  // redundant row
                continue;
            }
            if (++pivots > cap_) throw NumericalStall("simplex exceeded " + std::to_string(cap_) + " pivots");
            pivot(i, col);
        }
    }

    std::size_t m_, n_, width_, cap_;
    std::vector<T> c_;
    std::vector<T> tab_;
    std::vector<T> sign_;
    std::vector<std::size_t> basis_;
    std::vector<bool> active_;
};

template <class T>
SimplexResult<T> simplex_solve(const Matrix<T>& A, const std::vector<T>& b, const std::vector<T>& c,
                               std::size_t pivot_cap = kMaxPivots) {
    return Simplex<T>(A, b, c, pivot_cap).solve();
}

}  // namespace acmdp
