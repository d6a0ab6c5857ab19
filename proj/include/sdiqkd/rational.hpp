#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sdiqkd {

// Arbitrary-precision integers and rationals back everything that must be
// exact: deterministic tables, classical bounds, mixtures with rational
// weights, and the facet enumeration.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Canonical "p/q" text form; integers print without the denominator.
inline std::string to_fraction_string(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

/// Parses "p", "p/q", or a plain integer; q must be nonzero.
inline Rational parse_fraction(std::string_view text) {
    const std::string s(text);
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            return Rational(BigInt(s));
        }
        const BigInt num(s.substr(0, slash));
        const BigInt den(s.substr(slash + 1));
        if (den == 0) {
            throw std::invalid_argument("zero denominator");
        }
        return Rational(num, den);
    } catch (const std::exception&) {
        throw std::invalid_argument("parse_fraction: not a rational: '" + s + "'");
    }
}

}  // namespace sdiqkd
