#pragma once

#include <stdexcept>

#include "torusmin/numbers.hpp"
#include "torusmin/real.hpp"

namespace torusmin {

inline long euler_phi(long d) {
    long result = d, n = d;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        result -= result / p;
    }
    if (n > 1) result -= result / n;
    return result;
}

// M(n) = lcm{ d : phi(d) <= n }. Any root of unity that is an eigenvalue of
// an n x n integer matrix has order d with phi(d) <= n, and phi(d) >= sqrt(d/2)
// bounds the search range by 2n^2.
inline Int cyclotomic_order_bound(int n) {
    Int m = 1;
    long limit = 2L * n * n + 1;
    for (long d = 1; d <= limit; ++d)
        if (euler_phi(d) <= n) m = boost::multiprecision::lcm(m, Int(d));
    return m;
}

// Exact arithmetic in Q(zeta_m) for m in {1,2,3,4,6}, where the field is Q
// or a quadratic extension: elements a + b*zeta_m.
class CycNum {
  public:
    CycNum() : m_(1), a_(0), b_(0) {}
    CycNum(int m, Rat a, Rat b) : m_(m), a_(std::move(a)), b_(std::move(b)) {
        check_order(m);
        reduce();
    }
    static CycNum zeta(int m) { return CycNum(m, 0, 1); }
    static CycNum rational(int m, const Rat& a) { return CycNum(m, a, 0); }

    int order() const { return m_; }
    const Rat& a() const { return a_; }
    const Rat& b() const { return b_; }
    bool is_zero() const { return a_ == 0 && b_ == 0; }

    CycNum operator+(const CycNum& o) const {
        check_compatible(o);
        return CycNum(m_, a_ + o.a_, b_ + o.b_);
    }
    CycNum operator-(const CycNum& o) const {
        check_compatible(o);
        return CycNum(m_, a_ - o.a_, b_ - o.b_);
    }
    CycNum operator*(const CycNum& o) const {
        check_compatible(o);
        // zeta^2 = p + q*zeta from the minimal polynomial of zeta_m
        auto [p, q] = zeta_sq(m_);
        Rat bb = b_ * o.b_;
        return CycNum(m_, a_ * o.a_ + bb * p, a_ * o.b_ + b_ * o.a_ + bb * q);
    }
    CycNum operator*(const Rat& s) const { return CycNum(m_, a_ * s, b_ * s); }

    bool operator==(const CycNum& o) const {
        return m_ == o.m_ && a_ == o.a_ && b_ == o.b_;
    }

    // complex conjugate: zeta -> zeta^{-1}
    CycNum conj() const {
        switch (m_) {
            case 1: return *this;
            case 2: return *this;
            case 3: return CycNum(3, a_ - b_, -b_);   // zeta^{-1} = -1 - zeta
            case 4: return CycNum(4, a_, -b_);        // zeta^{-1} = -zeta
            case 6: return CycNum(6, a_ + b_, -b_);   // zeta^{-1} = 1 - zeta
        }
        throw std::logic_error("CycNum: bad order");
    }

    CNum to_complex(unsigned bits) const {
        CNum z = exp2pii(Rat(1, m_), bits);
        Real ar = to_real(a_, bits), br = to_real(b_, bits);
        return CNum(ar + br * z.re, br * z.im);
    }

  private:
    static void check_order(int m) {
        if (m != 1 && m != 2 && m != 3 && m != 4 && m != 6)
            throw std::invalid_argument("CycNum: order must be 1, 2, 3, 4 or 6");
    }
    void check_compatible(const CycNum& o) const {
        if (m_ != o.m_) throw std::invalid_argument("CycNum: mixed cyclotomic orders");
    }
    // zeta^2 expressed as p + q*zeta
    static std::pair<Rat, Rat> zeta_sq(int m) {
        switch (m) {
            case 1: return {Rat(1), Rat(0)};
            case 2: return {Rat(1), Rat(0)};
            case 3: return {Rat(-1), Rat(-1)};  // x^2 + x + 1
            case 4: return {Rat(-1), Rat(0)};   // x^2 + 1
            case 6: return {Rat(-1), Rat(1)};   // x^2 - x + 1
        }
        throw std::logic_error("CycNum: bad order");
    }
    void reduce() {
        // zeta_1 = 1, zeta_2 = -1: fold into the rational part
        if (m_ == 1) { a_ += b_; b_ = 0; }
        if (m_ == 2) { a_ -= b_; b_ = 0; }
    }

    int m_;
    Rat a_, b_;
};

}  // namespace torusmin
