#include <doctest.h>

#include "torusmin/exact.hpp"
#include "torusmin/lattice.hpp"
#include "torusmin/matrix.hpp"
#include "torusmin/polynomial.hpp"

using namespace torusmin;

TEST_CASE("determinant and unimodular inverse") {
    IntMatrix cat{{2, 1}, {1, 1}};
    CHECK(det(cat) == 1);
    CHECK(is_unimodular(cat));
    IntMatrix inv = unimodular_inverse(cat);
    CHECK(cat * inv == IntMatrix::identity(2));

    IntMatrix sing{{1, 2}, {2, 4}};
    CHECK(det(sing) == 0);
    CHECK_THROWS(unimodular_inverse(sing));
}

TEST_CASE("matrix power against repeated multiplication") {
    IntMatrix m{{1, 1}, {0, 1}};
    IntMatrix acc = IntMatrix::identity(2);
    for (int i = 0; i < 13; ++i) acc = acc * m;
    CHECK(m.pow(13) == acc);
    CHECK(m.pow(0) == IntMatrix::identity(2));
}

TEST_CASE("kernel basis spans the right space") {
    RatMatrix m{{Rat(1), Rat(2), Rat(3)}, {Rat(2), Rat(4), Rat(6)}};
    RatMatrix k = kernel_basis(m);
    CHECK(k.cols() == 2);
    CHECK((m * k).is_zero());
}

TEST_CASE("characteristic and minimal polynomials") {
    IntMatrix cat{{2, 1}, {1, 1}};
    CHECK(char_poly(cat) == RatPoly({Rat(1), Rat(-3), Rat(1)}));
    CHECK(min_poly(cat) == char_poly(cat));

    // non-derogatory vs derogatory
    IntMatrix id3 = IntMatrix::identity(3);
    CHECK(min_poly(id3) == RatPoly({Rat(-1), Rat(1)}));
    CHECK(char_poly(id3).degree() == 3);

    // Cayley-Hamilton on a 4x4 sample
    IntMatrix m{{1, 0, 0, 0}, {1, -1, 0, 0}, {0, 1, -1, 0}, {0, 0, 1, -1}};
    RatPoly p = char_poly(m);
    CHECK(p.eval(m.cast<Rat>()).is_zero());
}

TEST_CASE("row Hermite form and elementary divisors") {
    IntMatrix a{{2, 4}, {0, 6}};
    auto divs = elementary_divisors(a);
    REQUIRE(divs.size() == 2);
    CHECK(divs[0] == 2);
    CHECK(divs[1] == 6);
    CHECK(lattice_rank(a) == 2);
}

TEST_CASE("saturation gives a primitive sublattice") {
    // span{(2,4)} saturates to span{(1,2)}
    auto sat = saturate({{Int(2), Int(4)}}, 2);
    REQUIRE(sat.size() == 1);
    CHECK(sat[0][0] == 1);
    CHECK(sat[0][1] == 2);
}

TEST_CASE("Sturm real root counting with multiplicity") {
    // (x-1)^2 (x+2)
    RatPoly p = RatPoly({Rat(-1), Rat(1)}) * RatPoly({Rat(-1), Rat(1)}) *
                RatPoly({Rat(2), Rat(1)});
    CHECK(real_roots_in_open(p, Rat(0), Rat(2)) == 2);
    CHECK(real_roots_in_open(p, Rat(-3), Rat(0)) == 1);
    CHECK(real_roots_in_open(p, Rat(-3), Rat(2)) == 3);
}

TEST_CASE("polynomial division and gcd") {
    RatPoly a = RatPoly({Rat(-1), Rat(0), Rat(1)});  // x^2 - 1
    RatPoly b = RatPoly({Rat(-1), Rat(1)});          // x - 1
    CHECK(b.divides(a));
    CHECK(poly_gcd(a, b) == b.monic());
    CHECK((a / b) == RatPoly({Rat(1), Rat(1)}));
}
