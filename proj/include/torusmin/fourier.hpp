#pragma once

#include <stdexcept>
#include <vector>

#include "torusmin/cyclotomic.hpp"
#include "torusmin/liouville.hpp"
#include "torusmin/matrix.hpp"
#include "torusmin/real.hpp"

namespace torusmin {

struct UnknownCase : std::invalid_argument {
    explicit UnknownCase(const std::string& w) : std::invalid_argument(w) {}
};
struct PrecisionInsufficient : std::runtime_error {
    explicit PrecisionInsufficient(const std::string& w) : std::runtime_error(w) {}
};

struct FourierTerm {
    std::vector<Int> freq;     // in Z^p
    std::vector<CNum> coeff;   // in C^d
};

// Finite frequency list with conjugate symmetry (real-valued synthesis) and a
// sup-norm bound on everything omitted.
struct SparseFourierSeries {
    int dim_domain = 1;
    int dim_range = 1;
    std::vector<FourierTerm> terms;
    Real tail_bound{0};
    unsigned prec_bits = 256;

    // bits needed so that reducing k*x mod 1 keeps a 64-bit guard
    unsigned required_bits() const;
    bool has_frequency(const std::vector<Int>& k) const;
    // adds (k, c) and (-k, conj c); k = 0 must have a real coefficient
    void add_conjugate_pair(const std::vector<Int>& k, const std::vector<CNum>& c);
};

struct EvalResult {
    std::vector<Real> value;
    Real error_bound{0};     // tail + rounding
    Real imag_residual{0};   // max |Im| before discarding
};

EvalResult evaluate(const SparseFourierSeries& f, const std::vector<Real>& x, unsigned bits);
EvalResult evaluate(const SparseFourierSeries& f, const std::vector<Rat>& x, unsigned bits);

enum class FourierCase { OrderTwoFiber, PeriodicFiber, OrderTwoBase, IrrationalPair };

struct SynthesisExtras {
    int period = 0;                  // m for PeriodicFiber
    IntMatrix b;                     // the periodic 2x2 block for PeriodicFiber
    RatEnclosure irrational_a{Rat(1), Rat(0)};  // a of the pair V=(a,b) for IrrationalPair
    RatEnclosure irrational_b;                  // b of the pair
};

struct SynthesizedSeries {
    SparseFourierSeries series;
    std::vector<ApproxCertificate> certificates;  // one per retained level j
    std::vector<CycNum> eigenvector;              // PeriodicFiber only
};

// Builds the single-frequency-tower series: frequencies +-k_j for
// j = 1..J, coefficients per case, every term certified against 4pi/k_j^j.
SynthesizedSeries synthesize_case(FourierCase case_id, const LiouvilleDatum& d,
                                  size_t target_index, unsigned truncation,
                                  const SynthesisExtras& extras, unsigned bits);

}  // namespace torusmin
