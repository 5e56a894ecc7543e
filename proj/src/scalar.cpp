#include "acmdp/scalar.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <system_error>

#include "acmdp/errors.hpp"

namespace acmdp {

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char ch : s)
        if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
    return true;
}

Rational pow10(long e) {
    Rational r(1);
    for (long i = 0; i < e; ++i) r *= 10;
    return r;
}

}  // namespace

Rational parse_rational(const std::string& text) {
    std::string s = text;
    if (s.empty()) throw ParseError("empty rational literal");

    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::string num = s.substr(0, slash);
        std::string den = s.substr(slash + 1);
        bool negative = false;
        if (!num.empty() && (num[0] == '-' || num[0] == '+')) {
            negative = num[0] == '-';
            num.erase(0, 1);
        }
        if (!all_digits(num) || !all_digits(den)) throw ParseError("malformed rational literal '" + text + "'");
        auto strip = [](std::string& t) {
            t.erase(0, std::min(t.find_first_not_of('0'), t.size() - 1));
        };
        strip(num);
        strip(den);
        boost::multiprecision::mpz_int n(num), d(den);
        if (d == 0) throw ParseError("zero denominator in '" + text + "'");
        Rational r(n, d);
        return negative ? Rational(-r) : r;
    }

    bool negative = false;
    std::size_t pos = 0;
    if (s[0] == '-' || s[0] == '+') {
        negative = s[0] == '-';
        pos = 1;
    }
    long exponent = 0;
    const auto epos = s.find_first_of("eE", pos);
    std::string mantissa = s.substr(pos, epos == std::string::npos ? std::string::npos : epos - pos);
    if (epos != std::string::npos) {
        std::string ex = s.substr(epos + 1);
        bool eneg = false;
        if (!ex.empty() && (ex[0] == '-' || ex[0] == '+')) {
            eneg = ex[0] == '-';
            ex.erase(0, 1);
        }
        if (!all_digits(ex) || ex.size() > 6) throw ParseError("malformed exponent in '" + text + "'");
        exponent = std::stol(ex) * (eneg ? -1 : 1);
    }
    std::string int_part = mantissa;
    std::string frac_part;
    const auto dot = mantissa.find('.');
    if (dot != std::string::npos) {
        int_part = mantissa.substr(0, dot);
        frac_part = mantissa.substr(dot + 1);
    }
    if (int_part.empty() && frac_part.empty()) throw ParseError("malformed number '" + text + "'");
    if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part)))
        throw ParseError("malformed number '" + text + "'");
    // Leading zeros would select octal in the mpz string constructor.
    std::string all = int_part + frac_part;
    all.erase(0, std::min(all.find_first_not_of('0'), all.size()));
    boost::multiprecision::mpz_int digits(all.empty() ? std::string("0") : all);
    exponent -= static_cast<long>(frac_part.size());
    Rational r(digits);
    if (exponent >= 0) r *= pow10(exponent);
    else r /= pow10(-exponent);
    return negative ? Rational(-r) : r;
}

std::string format_rational(const Rational& value) {
    const auto num = boost::multiprecision::numerator(value);
    const auto den = boost::multiprecision::denominator(value);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    if (res.ec != std::errc()) return "nan";
    return std::string(buf, res.ptr);
}

}  // namespace acmdp
