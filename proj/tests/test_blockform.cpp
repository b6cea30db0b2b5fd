#include <doctest.h>

#include "helpers.hpp"
#include "torusmin/blockform.hpp"

using namespace torusmin;

TEST_CASE("block form conjugates to lower block triangular with unipotent top") {
    for (const auto& [name, l] : testing::branch_matrices()) {
        CAPTURE(name);
        BlockForm bf = block_form(l);
        REQUIRE(is_unimodular(bf.u));
        int n = l.rows(), p = bf.p;
        REQUIRE(p >= 1);
        IntMatrix conj = bf.u * l * unimodular_inverse(bf.u);
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) CHECK(conj(i, j) == bf.a(i, j));
        for (int i = 0; i < p; ++i)
            for (int j = p; j < n; ++j) CHECK(conj(i, j) == 0);
        for (int i = p; i < n; ++i) {
            for (int j = 0; j < p; ++j) CHECK(conj(i, j) == bf.c(i - p, j));
            for (int j = p; j < n; ++j) CHECK(conj(i, j) == bf.b(i - p, j - p));
        }
        // A unipotent: (A - I)^p = 0
        IntMatrix am = bf.a - IntMatrix::identity(p);
        CHECK(am.pow(p).is_zero());
        // B has no eigenvalue 1
        if (n > p) CHECK(char_poly(bf.b).eval(Rat(1)) != 0);
    }
}

TEST_CASE("invariant sublattice is saturated and L-invariant") {
    IntMatrix l{{1, 0, 0}, {1, 0, -1}, {0, 1, -1}};
    RatPoly v({Rat(-1), Rat(1)});  // x - 1
    auto basis = invariant_sublattice(l, v);
    REQUIRE(basis.size() == 1);
    // v(L) kills the basis vectors
    IntMatrix vl = l - IntMatrix::identity(3);
    for (const auto& b : basis) {
        std::vector<Int> img = vl * b;
        for (const Int& x : img) CHECK(x == 0);
    }
}

TEST_CASE("block form rejects unusable matrices") {
    IntMatrix minus = IntMatrix::identity(2) * Int(-1);
    CHECK_THROWS_AS(block_form(minus), NoEigenvalueOne);
    IntMatrix cat{{2, 1}, {1, 1}};
    CHECK_THROWS_AS(block_form(cat), NotQuasiUnipotent);
}
