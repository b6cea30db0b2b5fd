#include "torusmin/fourier.hpp"

#include <algorithm>
#include <functional>

namespace torusmin {

namespace {

unsigned freq_bits(const std::vector<Int>& k) {
    unsigned b = 1;
    for (const Int& ki : k) {
        Int a = ki < 0 ? Int(-ki) : ki;
        if (a > 0) b = std::max<unsigned>(b, static_cast<unsigned>(msb(a)) + 1);
    }
    return b;
}

}  // namespace

unsigned SparseFourierSeries::required_bits() const {
    unsigned b = 1;
    for (const auto& t : terms) b = std::max(b, freq_bits(t.freq));
    return b + 64;
}

bool SparseFourierSeries::has_frequency(const std::vector<Int>& k) const {
    for (const auto& t : terms)
        if (t.freq == k) return true;
    return false;
}

void SparseFourierSeries::add_conjugate_pair(const std::vector<Int>& k,
                                             const std::vector<CNum>& c) {
    if (static_cast<int>(k.size()) != dim_domain ||
        static_cast<int>(c.size()) != dim_range)
        throw std::invalid_argument("SparseFourierSeries: dimension mismatch");
    if (has_frequency(k))
        throw std::invalid_argument("SparseFourierSeries: duplicate frequency");
    bool zero_freq = true;
    for (const Int& ki : k)
        if (ki != 0) { zero_freq = false; break; }
    if (zero_freq) {
        for (const auto& ci : c)
            if (ci.im != 0)
                throw std::invalid_argument("SparseFourierSeries: k=0 coefficient must be real");
        terms.push_back({k, c});
        return;
    }
    terms.push_back({k, c});
    std::vector<Int> nk(k.size());
    for (size_t i = 0; i < k.size(); ++i) nk[i] = -k[i];
    std::vector<CNum> cc(c.size());
    for (size_t i = 0; i < c.size(); ++i) cc[i] = c[i].conj();
    terms.push_back({std::move(nk), std::move(cc)});
}

namespace {

EvalResult evaluate_impl(const SparseFourierSeries& f,
                         const std::function<Real(const std::vector<Int>&)>& phase_of,
                         unsigned bits) {
    PrecisionGuard g(bits);
    EvalResult r;
    r.value.assign(f.dim_range, Real(0));
    std::vector<Real> imag(f.dim_range, Real(0));
    Real coeff_mass(0);
    for (const auto& t : f.terms) {
        Real ph = phase_of(t.freq);
        CNum e = exp2pii(ph, bits);
        for (int i = 0; i < f.dim_range; ++i) {
            CNum v = t.coeff[i] * e;
            r.value[i] += v.re;
            imag[i] += v.im;
            coeff_mass += t.coeff[i].abs();
        }
    }
    for (int i = 0; i < f.dim_range; ++i) {
        Real a = abs(imag[i]);
        if (a > r.imag_residual) r.imag_residual = a;
    }
    Real rounding = coeff_mass * pow(Real(2), -static_cast<int>(bits) + 8);
    r.error_bound = f.tail_bound + rounding;
    return r;
}

}  // namespace

EvalResult evaluate(const SparseFourierSeries& f, const std::vector<Real>& x, unsigned bits) {
    if (static_cast<int>(x.size()) != f.dim_domain)
        throw std::invalid_argument("evaluate: point dimension mismatch");
    if (bits < f.required_bits())
        throw PrecisionInsufficient("evaluate: need at least " +
                                    std::to_string(f.required_bits()) + " bits");
    return evaluate_impl(
        f,
        [&](const std::vector<Int>& k) {
            PrecisionGuard g(bits);
            Real ph(0);
            for (size_t i = 0; i < k.size(); ++i)
                if (k[i] != 0) ph += Real(k[i]) * x[i];
            // reduce mod 1
            Real fl = floor(ph);
            return Real(ph - fl);
        },
        bits);
}

EvalResult evaluate(const SparseFourierSeries& f, const std::vector<Rat>& x, unsigned bits) {
    if (static_cast<int>(x.size()) != f.dim_domain)
        throw std::invalid_argument("evaluate: point dimension mismatch");
    return evaluate_impl(
        f,
        [&](const std::vector<Int>& k) {
            Rat ph(0);
            for (size_t i = 0; i < k.size(); ++i)
                if (k[i] != 0) ph += Rat(k[i]) * x[i];
            return to_real(mod1(ph), bits);
        },
        bits);
}

namespace {

// eigenvector of the 2x2 integer matrix for the exact eigenvalue zeta_m
std::vector<CycNum> cyclotomic_eigenvector(const IntMatrix& b, int m) {
    if (b.rows() != 2 || b.cols() != 2)
        throw std::invalid_argument("cyclotomic_eigenvector: need a 2x2 block");
    CycNum zeta = CycNum::zeta(m);
    std::vector<CycNum> v;
    if (b(0, 1) != 0)
        v = {CycNum::rational(m, Rat(b(0, 1))), zeta - CycNum::rational(m, Rat(b(0, 0)))};
    else if (b(1, 0) != 0)
        v = {zeta - CycNum::rational(m, Rat(b(1, 1))), CycNum::rational(m, Rat(b(1, 0)))};
    else
        throw std::invalid_argument("cyclotomic_eigenvector: diagonal block has no zeta_m eigenvalue");
    // exact residual check (B - zeta I) v = 0
    for (int i = 0; i < 2; ++i) {
        CycNum acc = CycNum::rational(m, 0);
        for (int j = 0; j < 2; ++j)
            acc = acc + CycNum::rational(m, Rat(b(i, j))) * v[j];
        acc = acc - zeta * v[i];
        if (!acc.is_zero())
            throw std::logic_error("cyclotomic_eigenvector: residual not zero");
    }
    return v;
}

}  // namespace

SynthesizedSeries synthesize_case(FourierCase case_id, const LiouvilleDatum& d,
                                  size_t target_index, unsigned truncation,
                                  const SynthesisExtras& extras, unsigned bits) {
    SynthesizedSeries out;
    SparseFourierSeries& f = out.series;
    f.dim_domain = 1;
    f.prec_bits = bits;
    switch (case_id) {
        case FourierCase::OrderTwoFiber:
        case FourierCase::OrderTwoBase: f.dim_range = 1; break;
        case FourierCase::PeriodicFiber:
        case FourierCase::IrrationalPair: f.dim_range = 2; break;
        default: throw UnknownCase("synthesize_case: unknown case id");
    }
    if (truncation == 0) {
        f.tail_bound = Real(0);
        return out;
    }

    std::vector<CycNum> v_cyc;
    CNum v_irr_a, v_irr_b;
    if (case_id == FourierCase::PeriodicFiber) {
        if (extras.period != 3 && extras.period != 4 && extras.period != 6)
            throw UnknownCase("synthesize_case: PeriodicFiber needs period 3, 4 or 6");
        v_cyc = cyclotomic_eigenvector(extras.b, extras.period);
        out.eigenvector = v_cyc;
    }
    if (case_id == FourierCase::IrrationalPair) {
        auto mid = [&](const RatEnclosure& e) {
            return CNum(to_real(e.value + e.tail_bound / 2, bits));
        };
        v_irr_a = mid(extras.irrational_a);
        v_irr_b = mid(extras.irrational_b);
    }

    PrecisionGuard g(bits);
    Real pi = boost::math::constants::pi<Real>();
    for (unsigned j = 1; j <= truncation; ++j) {
        ApproxCertificate cert = approx_sequence(d, target_index, j);
        if (!cert.holds)
            throw std::logic_error("synthesize_case: level " + std::to_string(j) +
                                   " certificate does not hold");
        out.certificates.push_back(cert);
        // exact phase reduction before any trigonometry
        Rat phase = mod1(Rat(cert.k) * d.alpha);
        CNum e_pos = exp2pii(phase, bits);
        std::vector<CNum> c;
        switch (case_id) {
            case FourierCase::OrderTwoFiber:
            case FourierCase::OrderTwoBase:
                c = {CNum(Real(1)) + e_pos};
                break;
            case FourierCase::PeriodicFiber: {
                CNum zeta = exp2pii(Rat(1, extras.period), bits);
                CNum factor = e_pos - zeta;
                c = {factor * v_cyc[0].to_complex(bits), factor * v_cyc[1].to_complex(bits)};
                break;
            }
            case FourierCase::IrrationalPair: {
                CNum factor = e_pos + CNum(Real(1));
                c = {factor * v_irr_a, factor * v_irr_b};
                break;
            }
        }
        f.add_conjugate_pair({cert.k}, c);
    }

    // tail: sum_{j > J} 4 pi / k_j^j <= twice the first omitted term
    {
        ApproxCertificate next = approx_sequence(d, target_index, truncation + 1);
        Real omitted = 2 * pi * to_real(next.bound, bits);  // 4pi/k^{j} = 2pi * (2/k^j)
        Real vnorm(1);
        if (case_id == FourierCase::PeriodicFiber) {
            for (const auto& vc : v_cyc) {
                Real a = vc.to_complex(bits).abs();
                if (a > vnorm) vnorm = a;
            }
        } else if (case_id == FourierCase::IrrationalPair) {
            for (const CNum* vv : {&v_irr_a, &v_irr_b}) {
                Real a = vv->abs();
                if (a > vnorm) vnorm = a;
            }
        }
        f.tail_bound = 2 * omitted * vnorm;
    }
    return out;
}

}  // namespace torusmin
