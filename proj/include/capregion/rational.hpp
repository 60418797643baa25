#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace capregion {

/// Exact rational, always kept in lowest terms with a positive denominator.
/// Expression templates are off so values mix freely with std::min/max and auto.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;

using RationalVector = std::vector<Rational>;

/// "p/q", or "p" when the denominator is one.
inline std::string to_string(const Rational& r) { return r.str(); }

inline std::string to_string(const RationalVector& v, const char* sep = ",") {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += sep;
        out += v[i].str();
    }
    return out;
}

/// Parses "p", "p/q", or a finite decimal such as "-0.125".
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    auto bad = [&] { return std::invalid_argument("not a rational number: '" + s + "'"); };
    if (s.empty()) throw bad();

    auto is_int = [](std::string_view t) {
        if (!t.empty() && (t.front() == '-' || t.front() == '+')) t.remove_prefix(1);
        if (t.empty()) return false;
        for (char c : t)
            if (c < '0' || c > '9') return false;
        return true;
    };
    // GMP rejects a leading '+'.
    auto integer = [](std::string t) { return Integer(t.front() == '+' ? t.substr(1) : t); };

    if (auto slash = s.find('/'); slash != std::string::npos) {
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        if (!is_int(num) || !is_int(den) || den.front() == '-' || den.front() == '+') throw bad();
        Integer d(den);
        if (d == 0) throw bad();
        return Rational(integer(num), d);
    }
    if (auto dot = s.find('.'); dot != std::string::npos) {
        std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
        bool negative = !whole.empty() && whole.front() == '-';
        if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) whole.erase(0, 1);
        if (whole.empty()) whole = "0";
        if (frac.empty() || !is_int(whole) || !is_int(frac) || frac.front() == '-' || frac.front() == '+')
            throw bad();
        Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(frac.size()));
        Rational r(Integer(whole) * scale + Integer(frac), scale);
        return negative ? Rational(-r) : r;
    }
    if (!is_int(s)) throw bad();
    return Rational(integer(s));
}

/// Comma-separated list of rationals, e.g. "1,1/2,0.25".
inline RationalVector parse_rational_list(std::string_view text) {
    RationalVector out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        out.push_back(parse_rational(piece));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

/// Exact conversion: every finite double is a dyadic rational.
inline Rational from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite value");
    return Rational(x);
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational dot(const RationalVector& a, const RationalVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace capregion
