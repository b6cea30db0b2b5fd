#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "torusmin/orbitlab.hpp"

using namespace torusmin;

namespace {

SkewProductSystem circle_rotation(RatEnclosure alpha) {
    SkewProductSystem sys;
    sys.n = 1;
    sys.p = 1;
    sys.a = IntMatrix::identity(1);
    sys.b = IntMatrix(0, 0);
    sys.c = IntMatrix(0, 1);
    sys.delta = {std::move(alpha)};
    sys.fiber_series.dim_domain = 1;
    sys.fiber_series.dim_range = 0;
    return sys;
}

}  // namespace

TEST_CASE("rational rotation fills exactly its cycle") {
    SkewProductSystem sys = circle_rotation({Rat(1, 4), Rat(0)});
    OrbitSimulator sim(sys, 1, {Rat(0)}, 128);
    Orbit orbit = collect(sim, 1000);
    CHECK(orbit.points.size() == 1000);
    OrbitDiagnostics d = diagnostics(orbit, 4, 8);
    CHECK(d.n == 1000);
    CHECK(d.coverage == doctest::Approx(0.5));
    // 4x is an integer along the orbit, so the k=4 Weyl sum has modulus 1
    CHECK(d.weyl.at({4L}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.weyl.at({1L}) < 1e-12);
}

TEST_CASE("irrational rotation equidistributes") {
    SkewProductSystem sys = circle_rotation(golden_mean_enclosure(200));
    OrbitSimulator sim(sys, 1, {Rat(0)}, 256);
    Orbit orbit = collect(sim, 2000);
    OrbitDiagnostics d = diagnostics(orbit, 3, 16);
    CHECK(d.coverage == doctest::Approx(1.0));
    for (const auto& [k, s] : d.weyl) {
        if (k == std::vector<long>{0L}) {
            CHECK(s == doctest::Approx(1.0));
        } else {
            CHECK(s < 0.05);
        }
    }
}

TEST_CASE("Weyl sums are independent of summation order") {
    SkewProductSystem sys = circle_rotation(golden_mean_enclosure(200));
    OrbitSimulator sim(sys, 1, {Rat(1, 7)}, 256);
    Orbit orbit = collect(sim, 500);
    Orbit reversed = orbit;
    std::reverse(reversed.points.begin(), reversed.points.end());
    OrbitDiagnostics a = diagnostics(orbit, 5, 8);
    OrbitDiagnostics b = diagnostics(reversed, 5, 8);
    REQUIRE(a.weyl.size() == b.weyl.size());
    for (const auto& [k, s] : a.weyl) CHECK(std::abs(s - b.weyl.at(k)) <= 1e-15);
}

TEST_CASE("k_max zero keeps only the trivial character") {
    SkewProductSystem sys = circle_rotation({Rat(1, 3), Rat(0)});
    OrbitSimulator sim(sys, 1, {Rat(0)}, 128);
    Orbit orbit = collect(sim, 10);
    OrbitDiagnostics d = diagnostics(orbit, 0, 4);
    CHECK(d.weyl.size() == 1);
    CHECK(d.weyl.at({0L}) == doctest::Approx(1.0));
}

TEST_CASE("precision accounting is enforced") {
    SkewProductSystem sys = circle_rotation(golden_mean_enclosure(200));
    CHECK_THROWS_AS(OrbitSimulator(sys, 1, {Rat(0)}, 64), PrecisionInsufficient);
    // a barely-sufficient mantissa exhausts the error budget immediately
    OrbitSimulator tight(sys, 1, {Rat(0)}, 70);
    CHECK_THROWS_AS(
        [&] {
            for (int i = 0; i < 10; ++i) tight.advance();
        }(),
        ErrorBudgetExhausted);
}

TEST_CASE("error bound grows additively and is reported with the orbit") {
    SkewProductSystem sys = testing::build_system(IntMatrix{{1, 0}, {3, -1}}, 2, 256);
    OrbitSimulator sim(sys, sys.m_power, {Rat(1, 3), Rat(2, 7)}, 256);
    Real e0 = sim.error_bound();
    sim.advance();
    Real e1 = sim.error_bound();
    sim.advance();
    Real e2 = sim.error_bound();
    CHECK(e0 == 0);
    CHECK(e1 > 0);
    CHECK(e2 - e1 == e1 - e0);
    CHECK(sim.steps() == 2);

    Orbit orbit = collect(sim, 50);
    CHECK(orbit.points.size() == 50);
    CHECK(orbit.precision_used == 256);
    CHECK(orbit.final_error > 0);
    for (const auto& pt : orbit.points) {
        REQUIRE(pt.size() == 2);
        for (double c : pt) {
            CHECK(c >= 0.0);
            CHECK(c < 1.0);
        }
    }
}
