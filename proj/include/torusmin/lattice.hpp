#pragma once

#include <stdexcept>
#include <vector>

#include "torusmin/matrix.hpp"

namespace torusmin {

struct NotSaturated : std::domain_error {
    explicit NotSaturated(const std::string& w) : std::domain_error(w) {}
};
struct RankDeficient : std::domain_error {
    explicit RankDeficient(const std::string& w) : std::domain_error(w) {}
};

// Left Hermite reduction: finds unimodular U with U*A = [H; 0], H upper
// triangular with positive diagonal. Returns {H_full (n x k), U (n x n)}.
struct RowHnf {
    IntMatrix h;  // n x k, rows >= k are zero when A has full column rank
    IntMatrix u;  // n x n unimodular
};

inline RowHnf row_hnf(const IntMatrix& a_in) {
    int n = a_in.rows(), k = a_in.cols();
    IntMatrix a = a_in;
    IntMatrix u = IntMatrix::identity(n);
    int r = 0;
    for (int c = 0; c < k && r < n; ++c) {
        // Euclid on column c below row r via row operations.
        while (true) {
            int piv = -1;
            for (int i = r; i < n; ++i)
                if (a(i, c) != 0 && (piv < 0 || abs(a(i, c)) < abs(a(piv, c)))) piv = i;
            if (piv < 0) break;
            if (piv != r) {
                for (int j = 0; j < k; ++j) std::swap(a(r, j), a(piv, j));
                for (int j = 0; j < n; ++j) std::swap(u(r, j), u(piv, j));
            }
            bool clean = true;
            for (int i = r + 1; i < n; ++i) {
                if (a(i, c) == 0) continue;
                Int q = a(i, c) / a(r, c);  // truncating division is fine for Euclid
                if (q != 0) {
                    for (int j = 0; j < k; ++j) a(i, j) -= q * a(r, j);
                    for (int j = 0; j < n; ++j) u(i, j) -= q * u(r, j);
                }
                if (a(i, c) != 0) clean = false;
            }
            if (clean) break;
        }
        if (a(r, c) != 0) {
            if (a(r, c) < 0) {
                for (int j = 0; j < k; ++j) a(r, j) = -a(r, j);
                for (int j = 0; j < n; ++j) u(r, j) = -u(r, j);
            }
            // reduce entries above the pivot
            for (int i = 0; i < r; ++i) {
                Int q = a(i, c) / a(r, c);
                if (a(i, c) % a(r, c) < 0) q -= 1;  // floor
                if (q != 0) {
                    for (int j = 0; j < k; ++j) a(i, j) -= q * a(r, j);
                    for (int j = 0; j < n; ++j) u(i, j) -= q * u(r, j);
                }
            }
            ++r;
        }
    }
    return {a, u};
}

inline int lattice_rank(const IntMatrix& a) {
    RowHnf f = row_hnf(a);
    int r = 0;
    for (int i = 0; i < f.h.rows(); ++i) {
        bool nz = false;
        for (int j = 0; j < f.h.cols(); ++j)
            if (f.h(i, j) != 0) { nz = true; break; }
        if (nz) ++r;
    }
    return r;
}

// Elementary divisors (Smith normal form diagonal) of an integer matrix.
inline std::vector<Int> elementary_divisors(const IntMatrix& a_in) {
    IntMatrix a = a_in;
    int n = a.rows(), k = a.cols();
    std::vector<Int> divisors;
    int top = 0;
    while (top < n && top < k) {
        // find a nonzero entry in the remaining block
        int pi = -1, pj = -1;
        for (int i = top; i < n; ++i)
            for (int j = top; j < k; ++j)
                if (a(i, j) != 0 && (pi < 0 || abs(a(i, j)) < abs(a(pi, pj)))) { pi = i; pj = j; }
        if (pi < 0) break;
        for (int j = 0; j < k; ++j) std::swap(a(top, j), a(pi, j));
        for (int i = 0; i < n; ++i) std::swap(a(i, top), a(i, pj));
        bool done = false;
        while (!done) {
            done = true;
            for (int i = top + 1; i < n; ++i) {
                if (a(i, top) == 0) continue;
                Int q = a(i, top) / a(top, top);
                for (int j = 0; j < k; ++j) a(i, j) -= q * a(top, j);
                if (a(i, top) != 0) {
                    for (int j = 0; j < k; ++j) std::swap(a(top, j), a(i, j));
                    done = false;
                }
            }
            for (int j = top + 1; j < k; ++j) {
                if (a(top, j) == 0) continue;
                Int q = a(top, j) / a(top, top);
                for (int i = 0; i < n; ++i) a(i, j) -= q * a(i, top);
                if (a(top, j) != 0) {
                    for (int i = 0; i < n; ++i) std::swap(a(i, top), a(i, j));
                    done = false;
                }
            }
            if (done) {
                // pivot must divide the rest of the block
                for (int i = top + 1; i < n && done; ++i)
                    for (int j = top + 1; j < k && done; ++j)
                        if (a(i, j) % a(top, top) != 0) {
                            for (int jj = 0; jj < k; ++jj) a(top, jj) += a(i, jj);
                            done = false;
                        }
            }
        }
        divisors.push_back(abs(a(top, top)));
        ++top;
    }
    return divisors;
}

// Completes a basis of a saturated sublattice of Z^n to a basis of Z^n.
// Input vectors are the columns of the result's leading columns.
inline IntMatrix hnf_complete(const std::vector<std::vector<Int>>& basis, int n) {
    int k = static_cast<int>(basis.size());
    if (k == 0) return IntMatrix::identity(n);
    IntMatrix a(n, k);
    for (int j = 0; j < k; ++j) {
        if (static_cast<int>(basis[j].size()) != n)
            throw std::invalid_argument("hnf_complete: vector dimension mismatch");
        for (int i = 0; i < n; ++i) a(i, j) = basis[j][i];
    }
    if (lattice_rank(a) < k) throw RankDeficient("hnf_complete: input vectors are dependent");
    std::vector<Int> divs = elementary_divisors(a);
    for (const Int& d : divs)
        if (d != 1)
            throw NotSaturated("hnf_complete: elementary divisor " + d.str() + " exceeds 1");
    RowHnf f = row_hnf(a);
    // U*A = [H; 0] with |det H| = 1, so W = U^{-1} is unimodular and its
    // first k columns (= A * H^{-1}) span the same sublattice as A.
    IntMatrix w = unimodular_inverse(f.u);
    IntMatrix h = f.h.block(0, 0, k, k);
    IntMatrix result(n, n);
    IntMatrix first = a * unimodular_inverse(h);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < k; ++j) result(i, j) = first(i, j);
        for (int j = k; j < n; ++j) result(i, j) = w(i, j);
    }
    if (!is_unimodular(result))
        throw std::logic_error("hnf_complete: completion is not unimodular");
    return result;
}

// Saturation of the lattice spanned by the given vectors: a basis of
// span_Q(vectors) intersected with Z^n.
inline std::vector<std::vector<Int>> saturate(const std::vector<std::vector<Int>>& vecs, int n) {
    int k = static_cast<int>(vecs.size());
    if (k == 0) return {};
    IntMatrix a(n, k);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < n; ++i) a(i, j) = vecs[j][i];
    int r = lattice_rank(a);
    RowHnf f = row_hnf(a);
    IntMatrix w = unimodular_inverse(f.u);
    // First r columns of W span the saturation (W unimodular, same Q-span).
    std::vector<std::vector<Int>> out;
    for (int j = 0; j < r; ++j) out.push_back(w.col(j));
    return out;
}

}  // namespace torusmin
