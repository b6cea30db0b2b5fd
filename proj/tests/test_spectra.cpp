#include <doctest.h>

#include <random>

#include "torusmin/spectra.hpp"

using namespace torusmin;

namespace {

// companion matrix of a monic integer polynomial, ascending coefficients
IntMatrix companion(const RatPoly& p) {
    int n = p.degree();
    IntMatrix m(n, n);
    for (int i = 0; i + 1 < n; ++i) m(i + 1, i) = 1;
    for (int i = 0; i < n; ++i) m(i, n - 1) = -num(p[i]);
    return m;
}

}  // namespace

TEST_CASE("census separates Salem-like quartic into 2 unimodular + 2 off-circle") {
    RatPoly p({Rat(1), Rat(4), Rat(-6), Rat(4), Rat(1)});
    RootCensus c = root_census(p);
    CHECK(c.n_roots_of_unity == 0);
    CHECK(c.n_unimodular_not_rou == 2);
    CHECK(c.n_off_circle == 2);
    CHECK(c.n_undecided == 0);
}

TEST_CASE("census recognizes cyclotomic factors") {
    // (x^2+x+1)(x-2)
    RatPoly p = RatPoly({Rat(1), Rat(1), Rat(1)}) * RatPoly({Rat(-2), Rat(1)});
    RootCensus c = root_census(p);
    CHECK(c.n_roots_of_unity == 2);
    CHECK(c.n_off_circle == 1);
    CHECK(c.n_unimodular_not_rou == 0);
}

TEST_CASE("quasi-unipotence agrees with the nilpotency oracle on random matrices") {
    std::mt19937 rng(20260824);
    auto shear = [&](int n) {
        IntMatrix m = IntMatrix::identity(n);
        int i = static_cast<int>(rng() % n), j = static_cast<int>(rng() % n);
        if (i == j) j = (j + 1) % n;
        m(i, j) = static_cast<int>(rng() % 5) - 2;
        return m;
    };
    for (int trial = 0; trial < 120; ++trial) {
        int n = 2 + static_cast<int>(rng() % 3);
        IntMatrix l = IntMatrix::identity(n);
        for (int s = 0; s < 4; ++s) l = l * shear(n);
        if (rng() % 2) {  // mix in a sign flip to leave the unipotent class
            IntMatrix d = IntMatrix::identity(n);
            d(0, 0) = -1;
            l = l * d;
        }
        REQUIRE(is_unimodular(l));
        auto [qu, order] = quasi_unipotent_test(l);
        RootCensus c = root_census(char_poly(l));
        CHECK(qu == (c.n_roots_of_unity == n));
        if (qu) {
            REQUIRE(order.has_value());
            IntMatrix pw = l.pow(*order) - IntMatrix::identity(n);
            CHECK(pw.pow(n).is_zero());
        }
    }
}

TEST_CASE("classification verdicts on the landmark matrices") {
    IntMatrix cat{{2, 1}, {1, 1}};
    CHECK(classify(cat).verdict == Verdict::ExcludedLefschetz);
    CHECK(lefschetz_number(cat) == -1);

    // (x-1)(x^2-3x+1): eigenvalue 1 present, but the rest is not quasi-unipotent
    // and the invariant complement traps the construction
    RatPoly p = RatPoly({Rat(-1), Rat(1)}) * RatPoly({Rat(1), Rat(-3), Rat(1)});
    SpectralReport r = classify(companion(p));
    CHECK(r.verdict == Verdict::ExcludedSpectrum);
    CHECK(r.spectrally_obstructed);
    REQUIRE(r.spectral_certificate.has_value());
    CHECK(r.spectral_certificate->r_census.n_unimodular_not_rou == 0);

    IntMatrix good{{1, 0}, {3, -1}};
    CHECK(classify(good).verdict == Verdict::ConstructibleMinimal);

    // Salem-like quartic plus an eigenvalue 1: outside every settled case
    RatPoly pex({Rat(1), Rat(4), Rat(-6), Rat(4), Rat(1)});
    IntMatrix c4 = companion(pex);
    IntMatrix five(5, 5);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) five(i, j) = c4(i, j);
    five(4, 4) = 1;
    CHECK(classify(five).verdict == Verdict::OpenProblem);
}

TEST_CASE("Lefschetz number is det(I - L)") {
    IntMatrix l{{1, 0}, {3, -1}};
    CHECK(lefschetz_number(l) == det(IntMatrix::identity(2) - l));
    CHECK(lefschetz_number(l) == 0);
}
