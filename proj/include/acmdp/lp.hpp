#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "acmdp/chain.hpp"
#include "acmdp/matrix.hpp"
#include "acmdp/mdp.hpp"
#include "acmdp/scalar.hpp"
#include "acmdp/simplex.hpp"

namespace acmdp {

enum class WeightScheme { Geometric, Uniform };
std::string to_string(WeightScheme scheme);
WeightScheme parse_weight_scheme(const std::string& name);

/// b_k proportional to 2^{-k-1} (geometric) or constant (uniform), summing to 1.
template <class T>
std::vector<T> make_weights(WeightScheme scheme, std::size_t n) {
    if (n == 0) throw WeightError("weights need at least one state");
    std::vector<T> b(n);
    if (scheme == WeightScheme::Uniform) {
        for (auto& v : b) v = T(1) / T(static_cast<long>(n));
        return b;
    }
    // 2^{-k-1} / (1 - 2^{-n}) = 2^{n-k-1} / (2^n - 1), computed as a running half.
    T w(1);
    T total(0);
    for (std::size_t k = 0; k < n; ++k) {
        w /= T(2);
        b[k] = w;
        total += w;
    }
    for (auto& v : b) v /= total;
    return b;
}

/**
 * Occupation-measure program of a chain on {0..n-1} with weights b.
 * Columns 0..n-1 hold gamma, n..2n-1 hold nu. Row k < n encodes
 * gamma(k) - sum_j p_jk gamma(j) = 0; row n+k encodes
 * gamma(k) + nu(k) - sum_j p_jk nu(j) = b_k.
 */
template <class T>
struct LpProgram {
    std::size_t n_states = 0;
    Matrix<T> A;
    std::vector<T> rhs;
    std::vector<T> b;

    std::size_t gamma_col(std::size_t k) const { return k; }
    std::size_t nu_col(std::size_t k) const { return n_states + k; }
};

template <class T>
LpProgram<T> build_lp(const Matrix<T>& P, const std::vector<T>& b) {
    const std::size_t n = P.rows();
    if (P.cols() != n || n == 0) throw DimensionMismatch("transition matrix must be square and nonempty");
    if (b.size() != n) throw WeightError("weight vector length " + std::to_string(b.size()) + " != " + std::to_string(n));
    T total(0);
    for (std::size_t k = 0; k < n; ++k) {
        if (!(b[k] > T(0))) throw WeightError("weight b_" + std::to_string(k) + " is not positive");
        total += b[k];
    }
    if (!prob_equal(total, T(1))) throw WeightError("weights do not sum to 1");

    LpProgram<T> lp;
    lp.n_states = n;
    lp.b = b;
    lp.A = Matrix<T>(2 * n, 2 * n);
    lp.rhs.assign(2 * n, T(0));
    for (std::size_t k = 0; k < n; ++k) {
        lp.A(k, lp.gamma_col(k)) += T(1);
        lp.A(n + k, lp.gamma_col(k)) += T(1);
        lp.A(n + k, lp.nu_col(k)) += T(1);
        for (std::size_t j = 0; j < n; ++j) {
            if (P(j, k) == T(0)) continue;
            lp.A(k, lp.gamma_col(j)) -= P(j, k);
            lp.A(n + k, lp.nu_col(j)) -= P(j, k);
        }
        lp.rhs[n + k] = b[k];
    }
    return lp;
}

LpProgram<double> build_lp(const MarkovChain& chain, const std::vector<double>& b);

enum class LpStatus { Feasible, Infeasible, Unbounded };
std::string to_string(LpStatus status);

template <class T>
struct LpOutcome {
    LpStatus status = LpStatus::Infeasible;
    std::vector<T> gamma;
    std::vector<T> nu;
    std::optional<T> objective;
    std::vector<T> farkas;
    std::size_t pivots = 0;
};

/// Two-phase simplex; the default objective is min sum_k nu(k).
template <class T>
LpOutcome<T> solve_lp(const LpProgram<T>& lp, const std::optional<std::vector<T>>& objective = std::nullopt,
                      std::size_t pivot_cap = kMaxPivots) {
    const std::size_t n = lp.n_states;
    std::vector<T> c(2 * n, T(0));
    if (objective) {
        if (objective->size() != 2 * n) throw DimensionMismatch("objective must have one entry per LP variable");
        c = *objective;
    } else {
        for (std::size_t k = 0; k < n; ++k) c[lp.nu_col(k)] = T(1);
    }
    const SimplexResult<T> r = simplex_solve(lp.A, lp.rhs, c, pivot_cap);
    LpOutcome<T> out;
    out.pivots = r.pivots;
    switch (r.status) {
        case SimplexStatus::Infeasible:
            out.status = LpStatus::Infeasible;
            out.farkas = r.farkas;
            return out;
        case SimplexStatus::Unbounded:
            out.status = LpStatus::Unbounded;
            return out;
        case SimplexStatus::Optimal:
            break;
    }
    out.status = LpStatus::Feasible;
    out.gamma.assign(r.x.begin(), r.x.begin() + static_cast<std::ptrdiff_t>(n));
    out.nu.assign(r.x.begin() + static_cast<std::ptrdiff_t>(n), r.x.end());
    out.objective = r.objective;
    return out;
}

/// Largest |A x - rhs| entry of a candidate solution.
template <class T>
double lp_residual(const LpProgram<T>& lp, const std::vector<T>& gamma, const std::vector<T>& nu) {
    double worst = 0.0;
    for (std::size_t i = 0; i < lp.A.rows(); ++i) {
        T s(0);
        for (std::size_t k = 0; k < lp.n_states; ++k) s += lp.A(i, lp.gamma_col(k)) * gamma[k] + lp.A(i, lp.nu_col(k)) * nu[k];
        worst = std::max(worst, std::fabs(to_double(T(s - lp.rhs[i]))));
    }
    return worst;
}

/// Checks y^T A <= tol componentwise and y^T rhs > 0.
template <class T>
bool verify_farkas(const LpProgram<T>& lp, const std::vector<T>& y, double tol = 1e-9) {
    if (y.size() != lp.A.rows()) return false;
    T yb(0);
    for (std::size_t i = 0; i < y.size(); ++i) yb += y[i] * lp.rhs[i];
    if (!(yb > T(0))) return false;
    for (std::size_t j = 0; j < lp.A.cols(); ++j) {
        T s(0);
        for (std::size_t i = 0; i < y.size(); ++i) s += y[i] * lp.A(i, j);
        if (ScalarTraits<T>::exact ? s > T(0) : to_double(s) > tol) return false;
    }
    return true;
}

struct TruncationRow {
    std::size_t K = 0;
    LpStatus status = LpStatus::Infeasible;
    double min_mass = 0.0;
    std::size_t pivots = 0;
    std::string mode;
    /// nu(k) >= (prod_{j=1}^{k-1} p_{j,j+1}) nu(1) - 1e-8 for 1 <= k <= K.
    bool nu_bound_holds = false;
    double nu1 = 0.0;
    std::vector<double> nu;
};

struct TruncationStudy {
    std::vector<TruncationRow> rows;
    bool strictly_increasing = false;
    bool nu_bound_holds = false;
    /// min_mass(K_{i+1}) - min_mass(K_i) for successive levels.
    std::vector<double> increments;
    std::size_t doublings = 0;
    /// Mass diverges: >= 4 doublings, all increments positive and the
    /// smallest at least half the first.
    bool divergence_verdict = false;
};

/// Solves min sum nu on the truncations {0..K} of an uncontrolled countable
/// chain (first action everywhere) for each K.
template <class T>
TruncationStudy truncation_study(const CountableMdp<T>& model, const std::vector<std::size_t>& Ks,
                                 WeightScheme scheme);

extern template TruncationStudy truncation_study<double>(const CountableMdp<double>&, const std::vector<std::size_t>&,
                                                         WeightScheme);
extern template TruncationStudy truncation_study<Rational>(const CountableMdp<Rational>&,
                                                           const std::vector<std::size_t>&, WeightScheme);

}  // namespace acmdp
