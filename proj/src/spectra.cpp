#include "torusmin/spectra.hpp"

namespace torusmin {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::ExcludedLefschetz: return "ExcludedLefschetz";
        case Verdict::ExcludedSpectrum: return "ExcludedSpectrum";
        case Verdict::ConstructibleMinimal: return "ConstructibleMinimal";
        case Verdict::OpenProblem: return "OpenProblem";
    }
    return "?";
}

std::pair<bool, std::optional<Int>> quasi_unipotent_test(const IntMatrix& l) {
    if (!is_unimodular(l)) throw NotUnimodular("quasi_unipotent_test: |det| != 1");
    int n = l.rows();
    Int m_bound = cyclotomic_order_bound(n);
    IntMatrix id = IntMatrix::identity(n);
    auto nilpotent_at = [&](const Int& m) {
        IntMatrix d = l.pow(m) - id;
        return d.pow(n).is_zero();
    };
    if (!nilpotent_at(m_bound)) return {false, std::nullopt};
    // least divisor m of M(n) with (L^m - I)^n = 0
    std::vector<Int> divisors;
    for (Int d = 1; d * d <= m_bound; ++d) {
        if (m_bound % d != 0) continue;
        divisors.push_back(d);
        if (d * d != m_bound) divisors.push_back(m_bound / d);
    }
    std::sort(divisors.begin(), divisors.end());
    for (const Int& d : divisors)
        if (nilpotent_at(d)) return {true, d};
    return {true, m_bound};
}

std::pair<RatPoly, RatPoly> cyclotomic_split(const RatPoly& p, int n) {
    if (!p.is_monic()) throw NotMonic("cyclotomic_split: polynomial not monic");
    if (!p.has_integer_coeffs())
        throw NotIntegerCoefficients("cyclotomic_split: non-integer coefficients");
    Int m = cyclotomic_order_bound(n);
    RatPoly xm1 = RatPoly::xn_minus_1(m);
    RatPoly q = RatPoly::constant(1);
    RatPoly r = p;
    while (true) {
        RatPoly g = poly_gcd(r, xm1);
        if (g.degree() < 1) break;
        q = q * g;
        r = r / g;
    }
    return {q.monic(), r.monic()};
}

namespace {

// Palindromic u(z) of even degree 2d (u = reverse(u), u(0) != 0) collapses to
// q(w) of degree d under w = z + 1/z, using z^j + z^{-j} = T_j(w) with
// T_0 = 2, T_1 = w, T_j = w T_{j-1} - T_{j-2}.
RatPoly palindromic_to_w(const RatPoly& u) {
    int d2 = u.degree();
    if (d2 % 2 != 0) throw std::logic_error("palindromic_to_w: odd degree");
    int d = d2 / 2;
    RatPoly tj_prev({Rat(2)});        // T_0
    RatPoly tj = RatPoly::x();        // T_1
    RatPoly q = RatPoly::constant(u[d]);
    for (int j = 1; j <= d; ++j) {
        q = q + tj * u[d + j];
        RatPoly next = RatPoly::x() * tj - tj_prev;
        tj_prev = tj;
        tj = next;
    }
    return q;
}

}  // namespace

RootCensus root_census(const RatPoly& p_in, unsigned bits, unsigned max_bits) {
    if (!p_in.is_monic() || p_in.degree() < 1)
        throw NotMonic("root_census: need a monic polynomial of degree >= 1");
    if (!p_in.has_integer_coeffs())
        throw NotIntegerCoefficients("root_census: non-integer coefficients");

    RootCensus census;
    auto [q_cyc, r_rest] = cyclotomic_split(p_in, p_in.degree());
    census.n_roots_of_unity = q_cyc.degree();

    // Every root on |z| = 1 of a rational polynomial is also a root of the
    // reversed polynomial, so the unimodular ones all live in the
    // self-reciprocal factor; that factor is decided exactly.
    int unimodular = 0;
    if (r_rest.degree() >= 1) {
        RatPoly rev = r_rest.reverse().monic();
        RatPoly u = poly_gcd(r_rest, rev);
        if (u.degree() >= 1) {
            // r_rest has no roots of unity, hence no root at +-1, so u is
            // palindromic of even degree.
            if (!(u == u.reverse().monic()))
                throw std::logic_error("root_census: self-reciprocal factor not palindromic");
            RatPoly w_poly = palindromic_to_w(u);
            // multiplicity in r_rest, not just in u: count layer by layer
            RatPoly layer = r_rest;
            while (true) {
                RatPoly g = poly_gcd(layer, u);
                if (g.degree() < 1) break;
                RatPoly wg = palindromic_to_w(g);
                unimodular += 2 * real_roots_in_open(wg, Rat(-2), Rat(2));
                layer = layer / g;
            }
        }
    }
    census.n_unimodular_not_rou = unimodular;
    census.n_off_circle = p_in.degree() - census.n_roots_of_unity - unimodular;

    // Numerical witnesses with certified inclusion disks.
    unsigned b = bits;
    while (true) {
        census.witnesses.clear();
        std::vector<RootDisk> disks = certified_roots(p_in, b);
        int undecided = 0;
        for (const auto& d : disks) {
            Real dist = d.center.abs();
            RootClass cls;
            if (dist - d.radius > 1)
                cls = RootClass::OffCircle;
            else if (dist + d.radius < 1)
                cls = RootClass::OffCircle;
            else
                cls = RootClass::Undecided;  // straddles; may be on the circle
            census.witnesses.push_back({d.center, d.radius, d.multiplicity, cls});
            if (cls == RootClass::Undecided) undecided += d.multiplicity;
        }
        // The straddling disks must account exactly for the roots known to be
        // on the circle; then each of them is classified by the exact split.
        int on_circle = census.n_roots_of_unity + census.n_unimodular_not_rou;
        if (undecided == on_circle) {
            // Each straddling disk holds a root known exactly to be on the
            // circle; it is a root of unity iff it is a root of q_cyc.
            PrecisionGuard g(b);
            std::vector<CNum> qc(q_cyc.degree() + 1);
            for (int i = 0; i <= q_cyc.degree(); ++i) qc[i] = CNum(to_real(q_cyc[i], b));
            Real thresh = pow(Real(2), -static_cast<int>(b) / 2);
            for (auto& w : census.witnesses) {
                if (w.cls != RootClass::Undecided) continue;
                if (q_cyc.degree() >= 1 &&
                    detail::poly_eval_c(qc, w.approx).abs() < thresh)
                    w.cls = RootClass::RootOfUnity;
                else
                    w.cls = RootClass::UnimodularNotRou;
            }
            census.n_undecided = 0;
            return census;
        }
        if (b >= max_bits) {
            census.n_undecided = undecided - on_circle;
            throw PrecisionExhausted("root_census: disks straddle the unit circle at " +
                                     std::to_string(b) + " bits");
        }
        b *= 2;
    }
}

Int lefschetz_number(const IntMatrix& l) {
    if (!is_unimodular(l)) throw NotUnimodular("lefschetz_number: |det| != 1");
    return det(IntMatrix::identity(l.rows()) - l);
}

std::pair<bool, SpectralExclusionCertificate> spectral_exclusion(const IntMatrix& l) {
    if (!is_unimodular(l)) throw NotUnimodular("spectral_exclusion: |det| != 1");
    RatPoly mp = min_poly(l);
    auto [q, r] = cyclotomic_split(mp, l.rows());
    SpectralExclusionCertificate cert;
    cert.q = q;
    cert.r = r;
    if (r.degree() < 1) return {false, cert};
    cert.r_census = root_census(r);
    bool obstructed = cert.r_census.n_unimodular_not_rou == 0;
    return {obstructed, cert};
}

SpectralReport classify(const IntMatrix& l) {
    if (!is_unimodular(l)) throw NotUnimodular("classify: |det| != 1");
    SpectralReport rep;
    rep.char_p = char_poly(l);
    rep.min_p = min_poly(l);
    auto [qu, order] = quasi_unipotent_test(l);
    rep.quasi_unipotent = qu;
    rep.qu_order = order;
    rep.census = root_census(rep.char_p);
    rep.has_eigenvalue_one = rep.char_p.eval(Rat(1)) == 0;

    if (lefschetz_number(l) != 0) {
        rep.verdict = Verdict::ExcludedLefschetz;
        return rep;
    }
    auto [obstructed, cert] = spectral_exclusion(l);
    rep.spectrally_obstructed = obstructed;
    rep.spectral_certificate = cert;
    if (obstructed) {
        rep.verdict = Verdict::ExcludedSpectrum;
        return rep;
    }
    if (l.rows() <= 4 && rep.quasi_unipotent) {
        rep.verdict = Verdict::ConstructibleMinimal;
        return rep;
    }
    if (l.rows() <= 4)
        throw std::logic_error(
            "classify: n <= 4 matrix with eigenvalue 1, unobstructed, yet not "
            "quasi-unipotent; this contradicts the case analysis");
    rep.verdict = Verdict::OpenProblem;
    return rep;
}

}  // namespace torusmin
