#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "torusmin/fourier.hpp"
#include "torusmin/liouville.hpp"
#include "torusmin/matrix.hpp"
#include "torusmin/skew.hpp"

namespace torusmin {

struct NotHyperbolic : std::domain_error {
    explicit NotHyperbolic(const std::string& w) : std::domain_error(w) {}
};
struct NoConvergence : std::runtime_error {
    explicit NoConvergence(const std::string& w) : std::runtime_error(w) {}
};
struct BranchMismatch : std::domain_error {
    explicit BranchMismatch(const std::string& w) : std::domain_error(w) {}
};
struct NotDiophantineCertified : std::domain_error {
    explicit NotDiophantineCertified(const std::string& w) : std::domain_error(w) {}
};
struct SingularDivisor : std::runtime_error {
    explicit SingularDivisor(const std::string& w) : std::runtime_error(w) {}
};

// ---------------------------------------------------------------------------
// Hyperbolic coboundary solver: given a matrix B with no eigenvalue on the
// unit circle and a map phi of T^p, find H with  B H(x) - H(phi x) = rhs(x).
// ---------------------------------------------------------------------------

using SampleFn = std::function<std::vector<double>(const std::vector<double>&)>;

// A self-map of T^p. When `translation` is set the solver runs a mode-diagonal
// fast path; otherwise `forward` (and `inverse`, whenever B has contracting
// spectrum) are sampled pointwise.
struct TorusSelfMap {
    SampleFn forward;
    SampleFn inverse;
    std::optional<std::vector<double>> translation;

    static TorusSelfMap translation_by(std::vector<double> tau);
};

// Trigonometric-polynomial solution sampled against a uniform grid.  The
// residual is measured on a shadow grid twice as fine, so it includes both the
// iteration error and everything the mode cap cannot represent.
struct SemiConjugacy {
    int domain_dim = 0;
    int range_dim = 0;
    int grid = 0;
    int mode_cap = 0;  // retained modes satisfy |k|_inf <= mode_cap
    int iterations = 0;
    double residual = 0;
    std::vector<std::vector<long>> freqs;
    std::vector<std::vector<std::complex<double>>> coeffs;  // per mode, length range_dim

    std::vector<double> operator()(const std::vector<double>& x) const;
};

SemiConjugacy solve_hyperbolic(const IntMatrix& b, const SampleFn& rhs,
                               const TorusSelfMap& phi, int domain_dim, int grid,
                               double tol, int max_iter = 200);

// ---------------------------------------------------------------------------
// Non-solvability witnesses for the reduced coboundary equations of the
// constructed systems: a fiber character that keeps Fourier coefficients of
// any candidate transfer function bounded away from zero along the
// approximation sequence, contradicting Riemann-Lebesgue decay.
// ---------------------------------------------------------------------------

enum class WitnessVerdict { NoContinuousSolution, Inconclusive };

std::string to_string(WitnessVerdict v);

struct ObstructionProbe {
    size_t target_index = 0;
    unsigned level = 0;   // j
    Int k;                // probe frequency along the first base coordinate
    CNum value;           // transfer coefficient forced at that frequency
    Rat divisor_floor;    // certified lower bound for the small divisor used
    std::string note;
};

struct ObstructionWitness {
    std::vector<Int> l_gamma;
    std::vector<ObstructionProbe> probes;
    Real liminf_estimate{0};
    // Exact lower bound c with |value| >= c for every certified probe (and,
    // for the branch's untruncated series, for every level beyond them).
    Rat lower_bound{0};
    // Set when non-solvability comes from an exact character-level mismatch
    // (a surviving linear term), in which case no probe sequence is needed
    // and lower_bound holds the nonzero integer coefficient.
    bool linear_mismatch = false;
    WitnessVerdict verdict = WitnessVerdict::Inconclusive;
    std::string rationale;
};

ObstructionWitness obstruction_witness(const SkewProductSystem& sys,
                                       const std::vector<Int>& l_gamma, unsigned levels);

// Exact test of the affine skeleton of the reduced equation for psi = phi^m:
// returns true when the character/affine parts of the two sides cannot match,
// which already rules out a continuous transfer function.
bool affine_mismatch_check(const SkewProductSystem& sys, int m, const std::vector<Int>& l,
                           const std::vector<Int>& l_gamma);

// ---------------------------------------------------------------------------
// Conjugacy to the affine model when the base translation is Diophantine.
// ---------------------------------------------------------------------------

struct DiophantineParams {
    double constant = 0.1;
    double exponent = 1.0;
    Int q_max = 100000;
};

struct SmoothConjugacy {
    SparseFourierSeries g;        // fiber shear, domain T^p, range R^{n-p}
    std::vector<Real> beta1;      // projection of the rhs mean onto ker(I-B)^t
    RatMatrix beta1_projector;    // the exact rational projector used
    Real residual{0};             // sup-norm defect of the conjugacy on a grid
    DiophantineScan scan;
    int grid = 0;
};

SmoothConjugacy solve_diophantine_conjugacy(const SkewProductSystem& sys,
                                            const DiophantineParams& params, int grid,
                                            unsigned bits = 256);

}  // namespace torusmin
