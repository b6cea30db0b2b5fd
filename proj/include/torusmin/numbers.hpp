#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <stdexcept>
#include <string>

namespace torusmin {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

inline Int num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline Int int_pow(Int base, const Int& e) {
    if (e < 0) throw std::invalid_argument("int_pow: negative exponent");
    Int result = 1, b = base, k = e;
    while (k > 0) {
        if ((k & 1) != 0) result *= b;
        k >>= 1;
        if (k > 0) b *= b;
    }
    return result;
}

inline Rat rat_pow(const Rat& base, const Int& e) {
    if (e < 0) {
        if (base == 0) throw std::domain_error("rat_pow: 0^negative");
        return Rat(int_pow(den(base), -e), int_pow(num(base), -e));
    }
    return Rat(int_pow(num(base), e), int_pow(den(base), e));
}

inline Int factorial(unsigned n) {
    Int f = 1;
    for (unsigned k = 2; k <= n; ++k) f *= k;
    return f;
}

// x mod 1, result in [0, 1)
inline Rat mod1(const Rat& x) {
    Int n = num(x), d = den(x);
    Int q, r;
    boost::multiprecision::divide_qr(n, d, q, r);
    if (r < 0) r += d;
    return Rat(r, d);
}

// distance to the nearest integer, ||x||
inline Rat dist_to_int(const Rat& x) {
    Rat f = mod1(x);
    return f <= Rat(1, 2) ? f : 1 - f;
}

inline Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int n(s.substr(0, slash));
        Int d(s.substr(slash + 1));
        if (d == 0) throw std::invalid_argument("zero denominator");
        return Rat(n, d);
    } catch (const std::exception&) {
        throw std::invalid_argument("parse_rat: bad rational literal '" + s + "'");
    }
}

inline std::string rat_str(const Rat& r) {
    if (den(r) == 1) return num(r).str();
    return num(r).str() + "/" + den(r).str();
}

}  // namespace torusmin
