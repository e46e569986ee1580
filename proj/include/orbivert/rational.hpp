#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "error.hpp"

namespace orbivert {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using RationalVector = std::vector<Rational>;

inline Integer num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational& r) { return den(r) == 1; }

inline Integer floor(const Rational& r)
{
    Integer q = num(r) / den(r);
    if (num(r) < 0 && q * den(r) != num(r))
        q -= 1;
    return q;
}

inline Integer ceil(const Rational& r) { return -floor(-r); }

// Nearest integer, halves rounded towards -infinity.
inline Integer round_nearest(const Rational& r) { return ceil(r - Rational(1, 2)); }

// r mod 1 in [0, 1).
inline Rational frac(const Rational& r) { return r - Rational(floor(r)); }

inline Integer lcm(const Integer& a, const Integer& b)
{
    if (a == 0 || b == 0)
        return 0;
    Integer g = boost::multiprecision::gcd(a, b);
    return boost::multiprecision::abs(a / g * b);
}

inline std::int64_t to_int64(const Integer& v)
{
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw Error(ErrorCode::Overflow, "integer does not fit in 64 bits: " + v.str());
    return v.convert_to<std::int64_t>();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Canonical "p/q" form with q > 0 and gcd(p, q) = 1.
inline std::string to_string(const Rational& r) { return num(r).str() + "/" + den(r).str(); }

inline Rational parse_rational(std::string_view text)
{
    auto trim = [](std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
            s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
            s.remove_suffix(1);
        return s;
    };
    auto parse_int = [&](std::string_view s) {
        s = trim(s);
        if (s.empty())
            throw Error(ErrorCode::Parse, "empty integer in rational literal");
        std::size_t i = (s.front() == '-' || s.front() == '+') ? 1 : 0;
        if (i == s.size())
            throw Error(ErrorCode::Parse, "malformed integer '" + std::string(s) + "'");
        for (std::size_t k = i; k < s.size(); ++k)
            if (s[k] < '0' || s[k] > '9')
                throw Error(ErrorCode::Parse, "malformed integer '" + std::string(s) + "'");
        return Integer(std::string(s.front() == '+' ? s.substr(1) : s));
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos)
        return Rational(parse_int(text));
    Integer q = parse_int(text.substr(slash + 1));
    if (q == 0)
        throw Error(ErrorCode::Parse, "zero denominator in '" + std::string(text) + "'");
    return Rational(parse_int(text.substr(0, slash)), q);
}

} // namespace orbivert
