#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "torusmin/blockform.hpp"
#include "torusmin/fourier.hpp"
#include "torusmin/liouville.hpp"
#include "torusmin/matrix.hpp"
#include "torusmin/spectra.hpp"

namespace torusmin {

struct NotConstructible : std::domain_error {
    explicit NotConstructible(const std::string& w) : std::domain_error(w) {}
};
struct UnsupportedBranch : std::domain_error {
    explicit UnsupportedBranch(const std::string& w) : std::domain_error(w) {}
};

enum class CaseTag {
    AffineUnipotent,  // L unipotent: purely affine system, no perturbation
    Order2FiberN2,            // n=2, B=[-1]
    PeriodicFiberN3,          // n=3, periodic 2x2 B, m in {3,4,6}
    MinusIdentityN3,           // n=3, B=-I
    NestedN3,         // n=3, B=-I+s e21, s != 0; base is the n=2 system
    Order2AffineBaseN3,           // n=3, char (x-1)^2(x+1): affine 2-d base, B=[-1]
    SplitFiberN4,           // n=4, B=3x3 with simple -1 and periodic 2x2 part
    RegroupedTowerN4,          // n=4, B=-(I+N): regrouped 2+2 tower
    PeriodicFiberN4,            // n=4, char (x-1)^2 q2, periodic 2x2 B
    NestedN4,         // n=4, char (x-1)^2 q2, B=-I+s e21, s != 0
    Order2AffineBaseN4,          // n=4, char (x-1)^3(x+1)
};

std::string to_string(CaseTag t);

enum class WitnessFamily { ScalarShift, Resolvent, FiberIntegrated, NonPeriodicFiber };

struct WitnessProbe {
    WitnessFamily family;
    size_t target_index = 0;  // which approximation sequence drives the probe
    std::string description;
};

struct WitnessPlan {
    std::vector<WitnessProbe> probes;
};

// The constructed diffeomorphism, given on the covering by
//   z -> L' z + delta + E(z_1)
// where L' = [[A,0],[C,B]] in the adapted coordinates, delta is the affine
// translation, and the perturbation E depends on the first coordinate only
// (fiber_series always; base_series additionally for the tower branches).
struct SkewProductSystem {
    int n = 0, p = 0;
    IntMatrix a, b, c;
    std::vector<RatEnclosure> delta;       // length n; fiber part usually zero
    SparseFourierSeries fiber_series;      // domain T^p (freqs supported on x1), range R^{n-p}
    std::optional<SparseFourierSeries> base_series;  // domain T^1, range R^p (towers)
    CaseTag case_tag = CaseTag::AffineUnipotent;
    int m_power = 1;                       // psi = phi^m
    std::optional<LiouvilleDatum> datum;
    WitnessPlan plan;
    std::vector<CycNum> eigenvector;       // PeriodicFiber-style branches
    RatEnclosure pair_a{Rat(1), Rat(0)},
                 pair_b{Rat(1), Rat(0)};   // V=(a,b) for the irrational-pair branches
    std::shared_ptr<SkewProductSystem> nested;  // phi_0 of the s != 0 branches
    unsigned prec_bits = 256;

    IntMatrix linear_part() const;
    bool base_is_affine() const { return !base_series.has_value(); }
};

using Point = std::vector<Real>;

// one application of phi, mod 1
Point step(const SkewProductSystem& sys, const Point& z, unsigned bits);

// m-fold application by repeated stepping (the oracle path)
Point iterate_steps(const SkewProductSystem& sys, int m, const Point& z, unsigned bits);

struct IterateFormula {
    int m = 1;
    IntMatrix c_m;            // sum_j B^{m-j} C A^{j-1}
    IntMatrix b_m;            // B^m
    IntMatrix a_m;            // A^m
    std::vector<Real> alpha_m;  // affine accumulant in the fiber
    std::vector<Real> base_shift;  // sum_{i<m} A^i delta_base
};

IterateFormula iterate_formula(const SkewProductSystem& sys, int m, unsigned bits);

// closed-form phi^m via the iterate formula; requires an affine base
Point iterate_closed(const SkewProductSystem& sys, int m, const Point& z, unsigned bits);

// Exact-rational affine skeleton of the closed form (F dropped, enclosure
// lower endpoints): used to compare against exact matrix-power oracles.
std::vector<Rat> affine_skeleton_iterate(const SkewProductSystem& sys, int m,
                                         const std::vector<Rat>& z);

SkewProductSystem construct_minimal(const SpectralReport& report, const BlockForm& bf,
                                    unsigned truncation, unsigned bits = 256);

// max over samples and generators of dist(psi(h.z), h.psi(z))
Real h_action_check(const SkewProductSystem& sys, int m_power,
                    const std::vector<std::vector<Rat>>& h_generators, int samples,
                    unsigned bits, unsigned seed = 1);

}  // namespace torusmin
