#include <doctest.h>

#include "torusmin/fourier.hpp"

using namespace torusmin;

namespace {

bool close(const CNum& a, const CNum& b, int log2tol = -200) {
    return (a - b).abs() < pow(Real(2), log2tol);
}

}  // namespace

TEST_CASE("conjugate pairs synthesize real values") {
    SparseFourierSeries f;
    f.dim_domain = 1;
    f.dim_range = 2;
    f.add_conjugate_pair({Int(3)}, {CNum(Real(1), Real(2)), CNum(Real(0), Real(-1))});
    CHECK(f.terms.size() == 2);
    CHECK(f.has_frequency({Int(3)}));
    CHECK(f.has_frequency({Int(-3)}));
    EvalResult r = evaluate(f, std::vector<Rat>{Rat(1, 7)}, 256);
    CHECK(r.imag_residual < pow(Real(2), -200));
    CHECK(r.error_bound < pow(Real(2), -200));

    CHECK_THROWS(f.add_conjugate_pair({Int(3)}, {CNum(Real(1)), CNum(Real(1))}));
    SparseFourierSeries g;
    g.dim_domain = 1;
    g.dim_range = 1;
    CHECK_THROWS(g.add_conjugate_pair({Int(0)}, {CNum(Real(0), Real(1))}));
}

TEST_CASE("required bits grow with the frequencies") {
    SparseFourierSeries f;
    f.dim_domain = 1;
    f.dim_range = 1;
    f.add_conjugate_pair({Int(1)}, {CNum(Real(1))});
    unsigned small = f.required_bits();
    f.add_conjugate_pair({Int(1) << 20}, {CNum(Real(1))});
    CHECK(f.required_bits() >= small + 20);
    CHECK_THROWS_AS(evaluate(f, std::vector<Real>{Real(0.5)}, 64), PrecisionInsufficient);
}

TEST_CASE("order-two synthesis carries the 1 + e(k alpha) coefficients") {
    PrecisionGuard guard(256);
    LiouvilleDatum d = build_liouville({Rat(1, 2)}, 5);
    SynthesizedSeries s = synthesize_case(FourierCase::OrderTwoFiber, d, 0, 3, {}, 256);
    CHECK(s.series.terms.size() == 6);  // levels 1..3, conjugate pairs
    CHECK(s.certificates.size() == 3);
    for (const auto& cert : s.certificates) {
        CHECK(cert.holds);
        CNum e = exp2pii(mod1(Rat(cert.k) * d.alpha), 256);
        CNum expected = CNum(Real(1), Real(0)) + e;
        bool found = false;
        for (const auto& t : s.series.terms)
            if (t.freq[0] == cert.k) {
                found = true;
                CHECK(close(t.coeff[0], expected));
            }
        CHECK(found);
    }
    CHECK(s.series.tail_bound > 0);
}

TEST_CASE("periodic synthesis produces an exact cyclotomic eigenvector") {
    PrecisionGuard guard(256);
    LiouvilleDatum d = build_liouville({Rat(1, 3)}, 5);
    SynthesisExtras extras;
    extras.period = 3;
    extras.b = IntMatrix{{0, -1}, {1, -1}};
    SynthesizedSeries s = synthesize_case(FourierCase::PeriodicFiber, d, 0, 2, extras, 256);
    REQUIRE(s.eigenvector.size() == 2);
    // B V = zeta V over Q(zeta_3), checked exactly
    CycNum zeta = CycNum::zeta(3);
    for (int i = 0; i < 2; ++i) {
        CycNum lhs = s.eigenvector[0] * Rat(extras.b(i, 0)) +
                     s.eigenvector[1] * Rat(extras.b(i, 1));
        CycNum rhs = zeta * s.eigenvector[i];
        CHECK(lhs == rhs);
    }
    CHECK(!s.eigenvector[1].is_zero());
    // coefficients are (e - zeta) V at the probe frequencies
    for (const auto& cert : s.certificates) {
        CNum e = exp2pii(mod1(Rat(cert.k) * d.alpha), 256);
        CNum factor = e - zeta.to_complex(256);
        for (const auto& t : s.series.terms)
            if (t.freq[0] == cert.k)
                for (int i = 0; i < 2; ++i)
                    CHECK(close(t.coeff[i], factor * s.eigenvector[i].to_complex(256), -180));
    }
}

TEST_CASE("evaluation at rational and real points agree") {
    LiouvilleDatum d = build_liouville({Rat(1, 2)}, 4);
    SynthesizedSeries s = synthesize_case(FourierCase::OrderTwoFiber, d, 0, 2, {}, 256);
    std::vector<Rat> xq{Rat(5, 16)};
    std::vector<Real> xr{to_real(Rat(5, 16), 256)};
    EvalResult a = evaluate(s.series, xq, 256);
    EvalResult b = evaluate(s.series, xr, 256);
    CHECK(abs(a.value[0] - b.value[0]) < pow(Real(2), -200));
}
