#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "torusmin/matrix.hpp"
#include "torusmin/numbers.hpp"

namespace torusmin {

// Polynomial over Q, coefficients ascending by degree. The zero polynomial
// has an empty coefficient vector and degree -1.
class RatPoly {
  public:
    RatPoly() = default;
    explicit RatPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }
    RatPoly(std::initializer_list<Rat> coeffs) : c_(coeffs) { trim(); }

    static RatPoly constant(const Rat& v) { return RatPoly({v}); }
    static RatPoly x() { return RatPoly({Rat(0), Rat(1)}); }
    // x^n - 1
    static RatPoly xn_minus_1(const Int& n) {
        std::vector<Rat> c(static_cast<size_t>(n) + 1, Rat(0));
        c[0] = -1;
        c.back() = 1;
        return RatPoly(std::move(c));
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
    const Rat& operator[](int i) const { return c_[i]; }
    const std::vector<Rat>& coeffs() const { return c_; }
    Rat leading() const { return c_.empty() ? Rat(0) : c_.back(); }

    bool is_monic() const { return !c_.empty() && c_.back() == 1; }
    bool has_integer_coeffs() const {
        for (const auto& v : c_)
            if (den(v) != 1) return false;
        return true;
    }

    bool operator==(const RatPoly& o) const { return c_ == o.c_; }

    RatPoly operator+(const RatPoly& o) const {
        std::vector<Rat> r(std::max(c_.size(), o.c_.size()), Rat(0));
        for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
        for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
        return RatPoly(std::move(r));
    }
    RatPoly operator-(const RatPoly& o) const {
        std::vector<Rat> r(std::max(c_.size(), o.c_.size()), Rat(0));
        for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
        for (size_t i = 0; i < o.c_.size(); ++i) r[i] -= o.c_[i];
        return RatPoly(std::move(r));
    }
    RatPoly operator*(const RatPoly& o) const {
        if (is_zero() || o.is_zero()) return RatPoly();
        std::vector<Rat> r(c_.size() + o.c_.size() - 1, Rat(0));
        for (size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
        }
        return RatPoly(std::move(r));
    }
    RatPoly operator*(const Rat& s) const {
        std::vector<Rat> r = c_;
        for (auto& v : r) v *= s;
        return RatPoly(std::move(r));
    }

    // Quotient and remainder; divisor must be nonzero.
    std::pair<RatPoly, RatPoly> divmod(const RatPoly& d) const {
        if (d.is_zero()) throw std::domain_error("RatPoly: division by zero");
        std::vector<Rat> rem = c_;
        int dd = d.degree();
        if (degree() < dd) return {RatPoly(), *this};
        std::vector<Rat> quot(c_.size() - d.c_.size() + 1, Rat(0));
        for (int i = static_cast<int>(rem.size()) - 1; i >= dd; --i) {
            if (rem[i] == 0) continue;
            Rat f = rem[i] / d.c_.back();
            quot[i - dd] = f;
            for (int j = 0; j <= dd; ++j) rem[i - dd + j] -= f * d.c_[j];
        }
        return {RatPoly(std::move(quot)), RatPoly(std::move(rem))};
    }
    RatPoly operator/(const RatPoly& d) const {
        auto [q, r] = divmod(d);
        if (!r.is_zero()) throw std::domain_error("RatPoly: inexact division");
        return q;
    }

    bool divides(const RatPoly& p) const { return p.divmod(*this).second.is_zero(); }

    RatPoly monic() const {
        if (is_zero()) return *this;
        return *this * (Rat(1) / c_.back());
    }

    RatPoly derivative() const {
        if (degree() < 1) return RatPoly();
        std::vector<Rat> r(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * Rat(static_cast<long>(i));
        return RatPoly(std::move(r));
    }

    // x^{deg} p(1/x)
    RatPoly reverse() const {
        std::vector<Rat> r(c_.rbegin(), c_.rend());
        return RatPoly(std::move(r));
    }

    Rat eval(const Rat& x) const {
        Rat v = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * x + *it;
        return v;
    }

    template <typename T>
    Mat<T> eval(const Mat<T>& m) const {
        if (!m.square()) throw std::invalid_argument("RatPoly: eval at non-square matrix");
        Mat<T> v(m.rows(), m.rows());
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            v = v * m;
            if (*it != 0) {
                T s = static_cast<T>(*it);
                for (int i = 0; i < m.rows(); ++i) v(i, i) += s;
            }
        }
        return v;
    }

    // p(x + shift)
    RatPoly shift(const Rat& s) const {
        RatPoly result;
        RatPoly lin({s, Rat(1)});
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            result = result * lin + RatPoly::constant(*it);
        return result;
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<Rat> c_;
};

// Monic gcd over Q (Euclid).
inline RatPoly poly_gcd(RatPoly a, RatPoly b) {
    while (!b.is_zero()) {
        RatPoly r = a.divmod(b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

inline RatPoly poly_lcm(const RatPoly& a, const RatPoly& b) {
    if (a.is_zero() || b.is_zero()) return RatPoly();
    return ((a * b) / poly_gcd(a, b)).monic();
}

// Squarefree part p / gcd(p, p').
inline RatPoly squarefree_part(const RatPoly& p) {
    if (p.degree() < 1) return p.monic();
    return (p / poly_gcd(p, p.derivative())).monic();
}

// Number of distinct real roots in the open interval (a, b) via Sturm chains.
// Requires a squarefree input.
inline int sturm_count_open(const RatPoly& p, const Rat& a, const Rat& b) {
    if (p.degree() < 1) return 0;
    std::vector<RatPoly> chain{p, p.derivative()};
    while (chain.back().degree() >= 1) {
        RatPoly r = chain[chain.size() - 2].divmod(chain.back()).second;
        if (r.is_zero()) break;
        chain.push_back(r * Rat(-1));
    }
    auto variations = [&chain](const Rat& x) {
        int v = 0, prev = 0;
        for (const auto& q : chain) {
            Rat val = q.eval(x);
            int s = val > 0 ? 1 : (val < 0 ? -1 : 0);
            if (s == 0) continue;
            if (prev != 0 && s != prev) ++v;
            prev = s;
        }
        return v;
    };
    int count = variations(a) - variations(b);
    // Sturm counts roots in (a, b]; drop b if it is a root.
    if (p.eval(b) == 0) --count;
    return count;
}

// Real roots in (a, b) counted with multiplicity. Peeling one gcd layer at a
// time counts each root of multiplicity m exactly m times.
inline int real_roots_in_open(const RatPoly& p, const Rat& a, const Rat& b) {
    RatPoly q = p.monic();
    int total = 0;
    while (q.degree() >= 1) {
        RatPoly g = poly_gcd(q, q.derivative());
        RatPoly sf = (q / g).monic();
        total += sturm_count_open(sf, a, b);
        q = g;
    }
    return total;
}

}  // namespace torusmin
