#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "torusmin/numbers.hpp"
#include "torusmin/phase.hpp"
#include "torusmin/real.hpp"

namespace torusmin {

struct BadTarget : std::invalid_argument {
    explicit BadTarget(const std::string& w) : std::invalid_argument(w) {}
};
struct EnclosureTooWide : std::domain_error {
    explicit EnclosureTooWide(const std::string& w) : std::domain_error(w) {}
};

// Exact enclosure of a real number: value <= x <= value + tail_bound.
struct RatEnclosure {
    Rat value;
    Rat tail_bound;

    bool is_exact() const { return tail_bound == 0; }
};

// alpha = sum_{k=1}^{K} q^{-k!} with q the product of the target denominators;
// the true Liouville number adds a tail below 2 q^{-(K+1)!}.
struct LiouvilleDatum {
    Int q = 0;
    unsigned terms = 0;                 // K
    Rat alpha;                          // exact partial sum
    Rat tail_bound;                     // 2 q^{-(K+1)!}
    std::vector<Rat> targets;           // reduced p_s/q_s in (0,1)

    RatEnclosure enclosure() const { return {alpha, tail_bound}; }
};

struct ApproxCertificate {
    size_t s = 0;               // target index
    unsigned j = 0;             // level
    Int k;                      // k_j^s = p_s q^{j!} / q_s
    PhaseInterval phase;        // k * alpha mod 1
    Rat distance_lo, distance_hi;  // range of ||k alpha - p_s/q_s||
    Rat bound;                  // 2 / k^j
    bool holds = false;
};

LiouvilleDatum build_liouville(const std::vector<Rat>& targets, unsigned terms);

ApproxCertificate approx_sequence(const LiouvilleDatum& d, size_t s, unsigned j);

struct DiophantineScan {
    double min_quality = 0;     // min over 1 <= q <= Q of q^{1+r} ||q alpha||
    Int minimizer = 0;
    std::optional<Int> violator;  // least q with quality below the constant, if any
};

// Scans q = 1..Q; alpha given as an exact-rational enclosure.
DiophantineScan diophantine_scan(const RatEnclosure& alpha, double constant, double exponent,
                                 const Int& q_max, unsigned bits = 128);

// Exact-rational enclosure of the golden-mean rotation number (sqrt(5)-1)/2
// via Fibonacci convergents, with tail below 2^-bits.
RatEnclosure golden_mean_enclosure(unsigned bits);

// Enclosure of sqrt(2) - 1 (a convenient badly-approximable fractional part).
RatEnclosure sqrt2_frac_enclosure(unsigned bits);

// Enclosure of sqrt(3) - 1.
RatEnclosure sqrt3_frac_enclosure(unsigned bits);

// Chord/arc sandwich on [0, 1/2]: 4s <= |e^{2 pi i s} - 1| <= 2 pi s.
// Converts a ||k alpha - p/q|| bound into a bound on |e^{2 pi i k alpha} - xi|.
Real chord_length(const Rat& s, unsigned bits);  // |e^{2 pi i s} - 1|
Rat chord_upper_factor();                        // the 2 pi in 2*pi*s, as 71/11 >= 2 pi

}  // namespace torusmin
