#pragma once

#include <stdexcept>
#include <vector>

#include "torusmin/polynomial.hpp"
#include "torusmin/real.hpp"

namespace torusmin {

struct PrecisionExhausted : std::runtime_error {
    explicit PrecisionExhausted(const std::string& w) : std::runtime_error(w) {}
};

struct RootDisk {
    CNum center;
    Real radius;     // certified inclusion radius
    int multiplicity = 1;
};

namespace detail {

inline CNum poly_eval_c(const std::vector<CNum>& coeffs, const CNum& z) {
    CNum v;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * z + *it;
    return v;
}

// Simultaneous Aberth-Ehrlich iteration on a squarefree monic polynomial.
inline std::vector<CNum> aberth_iterate(const RatPoly& p, unsigned bits) {
    PrecisionGuard guard(bits);
    int n = p.degree();
    std::vector<CNum> c(n + 1), dc(n);
    for (int i = 0; i <= n; ++i) c[i] = CNum(to_real(p[i], bits));
    RatPoly dp = p.derivative();
    for (int i = 0; i < n; ++i) dc[i] = CNum(to_real(dp[i], bits));

    Real bound(1);
    for (int i = 0; i < n; ++i) {
        Real m = abs(to_real(p[i], bits));
        if (m > bound) bound = m;
    }
    bound += 1;

    Real pi2 = 2 * boost::math::constants::pi<Real>();
    std::vector<CNum> z(n);
    for (int i = 0; i < n; ++i) {
        Real angle = pi2 * (Real(i) / n) + Real("0.3") / n + Real("0.19");
        z[i] = CNum(bound * cos(angle), bound * sin(angle));
    }

    Real tol = pow(Real(2), -static_cast<int>(bits) + 8);
    for (int iter = 0; iter < 400; ++iter) {
        Real max_step(0);
        for (int i = 0; i < n; ++i) {
            CNum pv = poly_eval_c(c, z[i]);
            CNum dv = poly_eval_c(dc, z[i]);
            if (dv.norm() == 0) { z[i].re += tol; continue; }
            CNum newton = pv / dv;
            CNum sum;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                sum += CNum(Real(1)) / (z[i] - z[j]);
            }
            CNum denom = CNum(Real(1)) - newton * sum;
            CNum step = denom.norm() == 0 ? newton : newton / denom;
            z[i] = z[i] - step;
            Real s = step.abs();
            if (s > max_step) max_step = s;
        }
        if (max_step < tol) break;
    }
    return z;
}

}  // namespace detail

// Certified root disks of a monic polynomial with rational coefficients.
// Roots of the squarefree part are located numerically; each disk
// D(z_i, r_i) with r_i = n|p(z_i)| / prod_{j != i} |z_i - z_j| contains at
// least one root, and when the disks are pairwise disjoint, exactly one.
// Multiplicities come from the exact gcd chain, not from numerics.
inline std::vector<RootDisk> certified_roots(const RatPoly& p_in, unsigned bits) {
    RatPoly p = p_in.monic();
    if (p.degree() < 1) return {};
    PrecisionGuard guard(bits);

    // exact multiplicity layers
    std::vector<RatPoly> layers;  // layers[i] has the roots of multiplicity > i
    RatPoly q = p;
    while (q.degree() >= 1) {
        layers.push_back(q);
        q = poly_gcd(q, q.derivative());
    }
    RatPoly sf = (layers[0] / (layers.size() > 1 ? layers[1] : RatPoly::constant(1))).monic();

    std::vector<CNum> z = detail::aberth_iterate(sf, bits);
    int n = sf.degree();
    std::vector<CNum> c(n + 1);
    for (int i = 0; i <= n; ++i) c[i] = CNum(to_real(sf[i], bits));

    std::vector<RootDisk> disks;
    for (int i = 0; i < n; ++i) {
        Real prod(1);
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            prod *= (z[i] - z[j]).abs();
        }
        Real pv = detail::poly_eval_c(c, z[i]).abs();
        Real radius = prod == 0 ? Real(1) : Real(n) * pv / prod;
        // multiplicity: the deepest layer still vanishing at (near) this root
        int mult = 1;
        for (size_t l = 1; l < layers.size(); ++l) {
            std::vector<CNum> lc(layers[l].degree() + 1);
            for (int k = 0; k <= layers[l].degree(); ++k)
                lc[k] = CNum(to_real(layers[l][k], bits));
            // layers[l] vanishes at this root iff the root has mult > l;
            // test against a scale-aware threshold
            CNum lv = detail::poly_eval_c(lc, z[i]);
            Real scale = pow(Real(2), -static_cast<int>(bits) / 2);
            if (lv.abs() < scale)
                mult = static_cast<int>(l) + 1;
            else
                break;
        }
        disks.push_back({z[i], radius, mult});
    }
    return disks;
}

}  // namespace torusmin
