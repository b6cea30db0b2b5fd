#pragma once

#include <stdexcept>
#include <vector>

#include "torusmin/exact.hpp"
#include "torusmin/lattice.hpp"
#include "torusmin/matrix.hpp"
#include "torusmin/polynomial.hpp"

namespace torusmin {

struct NotADivisor : std::domain_error {
    explicit NotADivisor(const std::string& w) : std::domain_error(w) {}
};
struct NoEigenvalueOne : std::domain_error {
    explicit NoEigenvalueOne(const std::string& w) : std::domain_error(w) {}
};
struct NotQuasiUnipotent : std::domain_error {
    explicit NotQuasiUnipotent(const std::string& w) : std::domain_error(w) {}
};

// U L U^{-1} = [[A, 0], [C, B]] with A unipotent (the eigenvalue-1 primary
// block) and B free of eigenvalue 1.
struct BlockForm {
    IntMatrix u;
    int p = 0;
    IntMatrix a, b, c;
};

// Saturated basis of ker v(L) intersected with Z^n, v a divisor of min_poly(L).
std::vector<std::vector<Int>> invariant_sublattice(const IntMatrix& l, const RatPoly& v);

BlockForm block_form(const IntMatrix& l);

}  // namespace torusmin
