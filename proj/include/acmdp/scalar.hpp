#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <type_traits>

#include <boost/multiprecision/gmp.hpp>

namespace acmdp {

/// Exact rational number with value semantics (no expression templates).
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

/**
 * Arithmetic policy for the two scalar types the library is instantiated with.
 *
 * Floating-point comparisons use the fixed validation tolerance; rational
 * comparisons are exact.
 */
template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;
    /// Tolerance for stochasticity checks (row sums, total masses).
    static constexpr double prob_tol = 1e-12;
    /// Pivot / zero threshold for elimination-style algorithms.
    static constexpr double pivot_eps = 1e-11;
    static double from_double(double v) { return v; }
    static double to_double(double v) { return v; }
    static double from_ratio(std::int64_t num, std::int64_t den) {
        return static_cast<double>(num) / static_cast<double>(den);
    }
    static bool is_zero(double v) { return v == 0.0; }
    static bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }
    static double abs(double v) { return std::fabs(v); }
};

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static Rational from_double(double v) { return Rational(v); }
    static double to_double(const Rational& v) { return v.convert_to<double>(); }
    static Rational from_ratio(std::int64_t num, std::int64_t den) {
        return Rational(num) / Rational(den);
    }
    static bool is_zero(const Rational& v) { return v == 0; }
    static bool near(const Rational& a, const Rational& b, double /*tol*/) { return a == b; }
    static Rational abs(const Rational& v) { return v < 0 ? Rational(-v) : v; }
};

template <class T>
double to_double(const T& v) {
    return ScalarTraits<T>::to_double(v);
}

/// Probability-level equality: exact for rationals, within 1e-12 for doubles.
template <class T>
bool prob_equal(const T& a, const T& b) {
    if constexpr (ScalarTraits<T>::exact) {
        return a == b;
    } else {
        return std::fabs(a - b) <= ScalarTraits<double>::prob_tol;
    }
}

/// Parses "p/q", "p" or a decimal literal into an exact rational.
Rational parse_rational(const std::string& text);

/// Formats as "p/q" (or "p" when the denominator is 1).
std::string format_rational(const Rational& value);

/// Shortest round-trip decimal form of a double ("%.17g").
std::string format_double(double value);

}  // namespace acmdp
