#include <doctest.h>

#include "torusmin/liouville.hpp"

using namespace torusmin;

TEST_CASE("partial sums of the well-approximable base number") {
    LiouvilleDatum d = build_liouville({Rat(1, 2)}, 2);
    CHECK(d.q == 2);
    // alpha = 2^{-1} + 2^{-2} = 3/4 for K = 2
    CHECK(d.alpha == Rat(3, 4));
    CHECK(d.tail_bound == Rat(2, 64));  // 2 q^{-3!}

    LiouvilleDatum d2 = build_liouville({Rat(1, 2), Rat(1, 3)}, 3);
    CHECK(d2.q == 6);
    CHECK_THROWS_AS(build_liouville({Rat(3, 2)}, 3), BadTarget);
    CHECK_THROWS_AS(build_liouville({}, 3), BadTarget);
}

TEST_CASE("approximation certificates hold on every level") {
    for (const auto& targets :
         std::vector<std::vector<Rat>>{{Rat(1, 2)}, {Rat(1, 3)}, {Rat(1, 2), Rat(1, 3)}}) {
        LiouvilleDatum d = build_liouville(targets, 5);
        for (size_t s = 0; s < targets.size(); ++s)
            for (unsigned j = 1; j <= 5; ++j) {
                ApproxCertificate c = approx_sequence(d, s, j);
                CAPTURE(s);
                CAPTURE(j);
                CHECK(c.holds);
                CHECK(c.distance_hi < c.bound);
                CHECK(c.distance_lo <= c.distance_hi);
                CHECK(c.k > 0);
            }
    }
}

TEST_CASE("refining the partial sum narrows the certified distance interval") {
    LiouvilleDatum coarse = build_liouville({Rat(1, 2)}, 5);
    LiouvilleDatum fine = build_liouville({Rat(1, 2)}, 7);
    for (unsigned j = 1; j <= 5; ++j) {
        ApproxCertificate a = approx_sequence(coarse, 0, j);
        ApproxCertificate b = approx_sequence(fine, 0, j);
        CHECK(b.distance_lo >= a.distance_lo);
        CHECK(b.distance_hi <= a.distance_hi);
    }
}

TEST_CASE("Diophantine scan flags the base number and passes the golden mean") {
    LiouvilleDatum d = build_liouville({Rat(1, 2)}, 4);
    DiophantineScan bad = diophantine_scan(d.enclosure(), 0.05, 1.0, Int(1000), 128);
    CHECK(bad.violator.has_value());

    RatEnclosure golden = golden_mean_enclosure(256);
    DiophantineScan ok = diophantine_scan(golden, 0.05, 1.0, Int(10000), 128);
    CHECK(!ok.violator.has_value());
    // the golden mean attains liminf q^2 ||q alpha|| = 1/sqrt(5) ~ 0.447
    CHECK(ok.min_quality > 0.38);
    CHECK(ok.min_quality < 0.45);
}

TEST_CASE("quadratic irrational enclosures are tight and correctly placed") {
    for (unsigned bits : {64u, 128u, 256u}) {
        RatEnclosure g = golden_mean_enclosure(bits);
        CHECK(g.tail_bound > 0);
        CHECK(g.tail_bound < rat_pow(Rat(1, 2), bits));
        // (sqrt5 - 1)/2 satisfies x^2 + x - 1 = 0; check sign change on the enclosure
        Rat lo = g.value, hi = g.value + g.tail_bound;
        CHECK(lo * lo + lo - 1 < 0);
        CHECK(hi * hi + hi - 1 > 0);

        RatEnclosure s2 = sqrt2_frac_enclosure(bits);
        Rat l2 = s2.value + 1, h2 = s2.value + s2.tail_bound + 1;
        CHECK(l2 * l2 < 2);
        CHECK(h2 * h2 > 2);
        CHECK(s2.tail_bound < rat_pow(Rat(1, 2), bits));

        RatEnclosure s3 = sqrt3_frac_enclosure(bits);
        Rat l3 = s3.value + 1, h3 = s3.value + s3.tail_bound + 1;
        CHECK(l3 * l3 < 3);
        CHECK(h3 * h3 > 3);
        CHECK(s3.tail_bound < rat_pow(Rat(1, 2), bits));
    }
}

TEST_CASE("phase interval arithmetic") {
    PhaseInterval ph = phase_mod1(Int(3), Rat(1, 4), Rat(1, 100));
    CHECK(ph.lower == Rat(3, 4));
    CHECK(ph.width == Rat(3, 100));
    auto [lo, hi] = ph.dist_to(Rat(3, 4));
    CHECK(lo == 0);
    CHECK(hi == Rat(3, 100));

    // negative k flips the enclosure orientation but keeps containment
    PhaseInterval phn = phase_mod1(Int(-3), Rat(1, 4), Rat(1, 100));
    CHECK(phn.contains(Rat(1, 4)));

    CHECK_THROWS_AS(phase_mod1(Int(1000), Rat(1, 3), Rat(1, 100)), IntervalTooWide);
}

TEST_CASE("chord bounds sandwich the true chord length") {
    Rat s(1, 10);
    Real len = chord_length(s, 128);
    Real four_s = to_real(4 * s, 128);
    Real upper = to_real(chord_upper_factor() * s, 128);
    CHECK(len >= four_s);
    CHECK(len <= upper);
}
