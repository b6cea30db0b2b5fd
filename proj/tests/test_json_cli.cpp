#include <doctest.h>

#include "helpers.hpp"
#include "torusmin/json_io.hpp"

using namespace torusmin;

TEST_CASE("rational serialization round-trips") {
    for (const Rat& r : {Rat(0), Rat(7), Rat(-3), Rat(22, 7), Rat(-5, 9)}) {
        CHECK(rat_from_json(rat_to_json(r)) == r);
    }
    // integers stay JSON numbers, proper fractions become strings
    CHECK(rat_to_json(Rat(7)).is_number());
    CHECK(rat_to_json(Rat(22, 7)).is_string());
    CHECK_THROWS(rat_from_json(json::parse(R"("1/0")")));
    CHECK_THROWS(rat_from_json(json::parse(R"("abc")")));
}

TEST_CASE("matrix serialization round-trips") {
    IntMatrix m{{1, 0, 0}, {1, 0, -1}, {0, 1, -1}};
    json j = matrix_to_json(m);
    CHECK(j["n"] == 3);
    CHECK(matrix_from_json(j) == m);
    CHECK_THROWS(matrix_from_json(json::parse(R"({"n":2,"rows":[[1,2],[3]]})")));
}

TEST_CASE("polynomial serialization round-trips ascending coefficients") {
    RatPoly p({Rat(1), Rat(-3, 2), Rat(0), Rat(1)});
    json j = poly_to_json(p);
    CHECK(poly_from_json(j) == p);
    CHECK(poly_from_json(poly_to_json(RatPoly())) == RatPoly());
}

TEST_CASE("reports are valid JSON with stable top-level keys") {
    IntMatrix l{{1, 0}, {3, -1}};
    SpectralReport r = classify(l);
    json js = report_spectral(r);
    CHECK(js.contains("verdict"));
    CHECK(js["verdict"] == "ConstructibleMinimal");
    CHECK(js.contains("char_poly"));
    CHECK(js.contains("census"));

    BlockForm bf = block_form(l);
    json jb = report_blockform(bf);
    CHECK(matrix_from_json(jb["u"]) == bf.u);
    CHECK(jb["p"] == bf.p);

    SkewProductSystem sys = testing::build_system(l, 2);
    json jsys = report_system(sys);
    CHECK(jsys["case"] == "order2-fiber-n2");
    CHECK(jsys["m_power"] == sys.m_power);
    CHECK(jsys.contains("fiber_terms"));

    ObstructionWitness w = obstruction_witness(sys, {Int(1)}, 2);
    json jw = report_witness(w);
    CHECK(jw["verdict"] == "no-continuous-solution");
    CHECK(rat_from_json(jw["lower_bound"]) == w.lower_bound);
    CHECK(jw["probes"].size() == w.probes.size());
}

TEST_CASE("identical config serializes to identical bytes") {
    IntMatrix l{{1, 0}, {3, -1}};
    SkewProductSystem s1 = testing::build_system(l, 2);
    SkewProductSystem s2 = testing::build_system(l, 2);
    CHECK(report_system(s1).dump(2) == report_system(s2).dump(2));
}
