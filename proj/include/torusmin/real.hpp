#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <utility>

#include "torusmin/numbers.hpp"

namespace torusmin {

using Real = boost::multiprecision::mpfr_float;

inline unsigned bits_to_digits10(unsigned bits) {
    return static_cast<unsigned>(bits * 0.3010299957) + 3;
}

// Scoped default precision for mpfr temporaries, in bits.
class PrecisionGuard {
  public:
    explicit PrecisionGuard(unsigned bits)
        : saved_(Real::default_precision()) {
        Real::default_precision(bits_to_digits10(bits));
    }
    ~PrecisionGuard() { Real::default_precision(saved_); }
    PrecisionGuard(const PrecisionGuard&) = delete;
    PrecisionGuard& operator=(const PrecisionGuard&) = delete;

  private:
    unsigned saved_;
};

inline Real to_real(const Rat& r, unsigned bits) {
    Real n(num(r), bits_to_digits10(bits));
    Real d(den(r), bits_to_digits10(bits));
    return n / d;
}

inline Real to_real(const Int& i, unsigned bits) {
    return Real(i, bits_to_digits10(bits));
}

inline Real real_pi(unsigned bits) {
    PrecisionGuard g(bits);
    return boost::math::constants::pi<Real>();
}

// Complex number over mpfr reals. std::complex is not specified for
// user-defined scalar types, so we carry our own minimal arithmetic.
struct CNum {
    Real re, im;

    CNum() : re(0), im(0) {}
    CNum(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
    explicit CNum(Real r) : re(std::move(r)), im(0) {}

    CNum operator+(const CNum& o) const { return {re + o.re, im + o.im}; }
    CNum operator-(const CNum& o) const { return {re - o.re, im - o.im}; }
    CNum operator-() const { return {-re, -im}; }
    CNum operator*(const CNum& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    CNum operator/(const CNum& o) const {
        Real n = o.re * o.re + o.im * o.im;
        return {(re * o.re + im * o.im) / n, (im * o.re - re * o.im) / n};
    }
    CNum& operator+=(const CNum& o) { re += o.re; im += o.im; return *this; }
    CNum& operator-=(const CNum& o) { re -= o.re; im -= o.im; return *this; }
    CNum& operator*=(const CNum& o) { *this = *this * o; return *this; }

    CNum conj() const { return {re, -im}; }
    Real norm() const { return re * re + im * im; }
    Real abs() const { return sqrt(norm()); }
};

inline CNum operator*(const Real& s, const CNum& z) { return {s * z.re, s * z.im}; }

// e^{2 pi i t}
inline CNum exp2pii(const Real& t, unsigned bits) {
    PrecisionGuard g(bits);
    Real angle = 2 * boost::math::constants::pi<Real>() * t;
    Real s, c;
    s = sin(angle);
    c = cos(angle);
    return {c, s};
}

inline CNum exp2pii(const Rat& t, unsigned bits) {
    return exp2pii(to_real(mod1(t), bits), bits);
}

}  // namespace torusmin
