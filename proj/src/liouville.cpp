#include "torusmin/liouville.hpp"

namespace torusmin {

LiouvilleDatum build_liouville(const std::vector<Rat>& targets, unsigned terms) {
    if (targets.empty()) throw BadTarget("build_liouville: no targets");
    if (terms < 1) throw BadTarget("build_liouville: need K >= 1");
    LiouvilleDatum d;
    d.q = 1;
    for (const Rat& t : targets) {
        if (!(t > 0 && t < 1)) throw BadTarget("build_liouville: target not in (0,1)");
        d.q *= den(t);
    }
    if (d.q < 2) throw BadTarget("build_liouville: base q must be at least 2");
    d.terms = terms;
    d.targets = targets;

    Int kfact = factorial(terms);           // K!
    Int denom = int_pow(d.q, kfact);        // q^{K!}
    Int numer = 0;
    for (unsigned k = 1; k <= terms; ++k)
        numer += int_pow(d.q, kfact - factorial(k));
    d.alpha = Rat(numer, denom);
    d.tail_bound = Rat(2, int_pow(d.q, factorial(terms + 1)));
    return d;
}

ApproxCertificate approx_sequence(const LiouvilleDatum& d, size_t s, unsigned j) {
    if (s >= d.targets.size()) throw BadTarget("approx_sequence: target index out of range");
    if (j < 1) throw BadTarget("approx_sequence: level j must be >= 1");
    const Rat& target = d.targets[s];
    ApproxCertificate cert;
    cert.s = s;
    cert.j = j;
    Int jfact = factorial(j);
    cert.k = num(target) * int_pow(d.q, jfact) / den(target);
    cert.phase = phase_mod1(cert.k, d.alpha, d.tail_bound);
    auto [lo, hi] = cert.phase.dist_to(target);
    cert.distance_lo = lo;
    cert.distance_hi = hi;
    cert.bound = Rat(2, int_pow(cert.k, j));
    cert.holds = cert.distance_hi < cert.bound;
    return cert;
}

namespace {
double small_ratio(const Int& numer, const Int& denom) {
    Real n(numer, 20), d(denom, 20);
    return (n / d).convert_to<double>();
}
}  // namespace

DiophantineScan diophantine_scan(const RatEnclosure& alpha, double constant, double exponent,
                                 const Int& q_max, unsigned bits) {
    (void)bits;
    if (q_max < 1) throw std::invalid_argument("diophantine_scan: empty range");
    double q_max_d = small_ratio(q_max, 1);
    double guard = constant / (4.0 * q_max_d * q_max_d);
    if (alpha.tail_bound != 0 && small_ratio(num(alpha.tail_bound), den(alpha.tail_bound)) >= guard)
        throw EnclosureTooWide("diophantine_scan: enclosure too wide for this range");

    Int a = num(alpha.value), b = den(alpha.value);
    Int a_mod = a % b;
    if (a_mod < 0) a_mod += b;

    DiophantineScan out;
    Int frac = 0;
    bool first = true;
    for (Int q = 1; q <= q_max; ++q) {
        frac += a_mod;
        if (frac >= b) frac -= b;
        Int dist_num = frac * 2 <= b ? frac : b - frac;
        double dist = small_ratio(dist_num, b);
        double quality = std::pow(small_ratio(q, 1), 1.0 + exponent) * dist;
        if (first || quality < out.min_quality) {
            out.min_quality = quality;
            out.minimizer = q;
            first = false;
        }
        if (!out.violator && quality < constant) out.violator = q;
    }
    return out;
}

RatEnclosure golden_mean_enclosure(unsigned bits) {
    Int threshold = int_pow(2, bits);
    Int f1 = 1, f2 = 1;
    while (f2 * (f1 + f2) <= threshold) {
        Int f3 = f1 + f2;
        f1 = f2;
        f2 = f3;
    }
    // consecutive convergents of (sqrt(5)-1)/2 bracket it
    Rat c1(f1, f2), c2(f2, f1 + f2);
    Rat lo = c1 < c2 ? c1 : c2;
    Rat hi = c1 < c2 ? c2 : c1;
    return {lo, hi - lo};
}

RatEnclosure sqrt2_frac_enclosure(unsigned bits) {
    Int threshold = int_pow(2, bits + 2);
    Int p = 1, q = 1;  // Pell convergents of sqrt(2)
    Rat prev(1);
    while (q * q <= threshold) {
        Int pn = p + 2 * q, qn = p + q;
        prev = Rat(p, q);
        p = pn;
        q = qn;
    }
    Rat cur(p, q);
    Rat lo = prev < cur ? prev : cur;
    Rat hi = prev < cur ? cur : prev;
    return {lo - 1, hi - lo};
}

RatEnclosure sqrt3_frac_enclosure(unsigned bits) {
    // continued fraction [1; 1, 2, 1, 2, ...]
    Int threshold = int_pow(2, bits + 2);
    Int p0 = 1, q0 = 1;  // [1]
    Int p1 = 2, q1 = 1;  // [1; 1]
    int digit = 2;
    while (q1 * q1 <= threshold) {
        Int p2 = digit * p1 + p0, q2 = digit * q1 + q0;
        p0 = p1; q0 = q1;
        p1 = p2; q1 = q2;
        digit = digit == 2 ? 1 : 2;
    }
    Rat c0(p0, q0), c1(p1, q1);
    Rat lo = c0 < c1 ? c0 : c1;
    Rat hi = c0 < c1 ? c1 : c0;
    return {lo - 1, hi - lo};
}

Real chord_length(const Rat& s, unsigned bits) {
    PrecisionGuard g(bits);
    Real angle = boost::math::constants::pi<Real>() * to_real(s, bits);
    return 2 * abs(sin(angle));
}

Rat chord_upper_factor() { return Rat(710, 113); }  // 710/113 > 2 pi

}  // namespace torusmin
