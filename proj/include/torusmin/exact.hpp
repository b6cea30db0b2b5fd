#pragma once

#include <stdexcept>
#include <vector>

#include "torusmin/matrix.hpp"
#include "torusmin/polynomial.hpp"

namespace torusmin {

// Characteristic polynomial det(xI - M) by Faddeev-LeVerrier; exact, monic,
// integer coefficients for integer input.
inline RatPoly char_poly(const IntMatrix& m) {
    if (!m.square()) throw std::invalid_argument("char_poly: non-square matrix");
    int n = m.rows();
    std::vector<Rat> c(static_cast<size_t>(n) + 1, Rat(0));
    c[n] = 1;
    RatMatrix a = m.cast<Rat>();
    RatMatrix mk = RatMatrix::identity(n);
    for (int k = 1; k <= n; ++k) {
        mk = a * mk;
        Rat tr = 0;
        for (int i = 0; i < n; ++i) tr += mk(i, i);
        Rat ck = -tr / k;
        c[n - k] = ck;
        for (int i = 0; i < n; ++i) mk(i, i) += ck;
    }
    return RatPoly(std::move(c));
}

namespace detail {
// Least-degree monic annihilator of the Krylov sequence v, Mv, M^2 v, ...
inline RatPoly krylov_annihilator(const IntMatrix& m, int start) {
    int n = m.rows();
    std::vector<std::vector<Rat>> krylov;  // vectors as rows
    std::vector<Rat> v(n, Rat(0));
    v[start] = 1;
    for (int d = 0; d <= n; ++d) {
        // Is v in the span of the previous vectors? Solve by elimination.
        RatMatrix sys(n, static_cast<int>(krylov.size()) + 1);
        for (size_t j = 0; j < krylov.size(); ++j)
            for (int i = 0; i < n; ++i) sys(i, static_cast<int>(j)) = krylov[j][i];
        for (int i = 0; i < n; ++i) sys(i, static_cast<int>(krylov.size())) = -v[i];
        RatMatrix ker = kernel_basis(sys);
        for (int j = 0; j < ker.cols(); ++j) {
            if (ker(static_cast<int>(krylov.size()), j) == 0) continue;
            // Dependency found: v = sum coeff_i * krylov_i.
            Rat scale = ker(static_cast<int>(krylov.size()), j);
            std::vector<Rat> coeffs(d + 1, Rat(0));
            for (int i = 0; i < d; ++i) coeffs[i] = -ker(i, j) / scale;
            coeffs[d] = 1;
            return RatPoly(std::move(coeffs));
        }
        krylov.push_back(v);
        std::vector<Rat> next(n, Rat(0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) next[i] += Rat(m(i, j)) * v[j];
        v = std::move(next);
    }
    throw std::logic_error("krylov_annihilator: no annihilator up to dimension");
}
}  // namespace detail

// Minimal polynomial via per-basis-vector Krylov annihilators and lcm.
inline RatPoly min_poly(const IntMatrix& m) {
    if (!m.square()) throw std::invalid_argument("min_poly: non-square matrix");
    int n = m.rows();
    if (n == 0) return RatPoly({Rat(1)});
    RatPoly result = RatPoly::constant(1);
    for (int i = 0; i < n; ++i) {
        result = poly_lcm(result, detail::krylov_annihilator(m, i));
        if (result.degree() == n) break;  // cannot exceed char poly degree
    }
    return result.monic();
}

}  // namespace torusmin
