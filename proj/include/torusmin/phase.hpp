#pragma once

#include <stdexcept>

#include "torusmin/numbers.hpp"

namespace torusmin {

struct IntervalTooWide : std::domain_error {
    explicit IntervalTooWide(const std::string& w) : std::domain_error(w) {}
};

// A short arc of the circle: { lower + t mod 1 : 0 <= t <= width } with
// lower in [0,1). Wraparound happens when lower + width >= 1.
struct PhaseInterval {
    Rat lower;
    Rat width;

    bool wraps() const { return lower + width >= 1; }

    // Exact range of ||x - target|| over the arc, as [lo, hi].
    // The circle distance d(x) = ||x - target|| is piecewise linear in x with
    // critical points at x = target (d=0) and x = target + 1/2 (d=1/2), so
    // extrema occur at those points or at the arc endpoints.
    std::pair<Rat, Rat> dist_to(const Rat& target) const {
        Rat d0 = dist_to_int(lower - target);
        Rat d1 = dist_to_int(lower + width - target);
        Rat lo = d0 < d1 ? d0 : d1;
        Rat hi = d0 < d1 ? d1 : d0;
        if (contains(mod1(target))) lo = 0;
        if (contains(mod1(target + Rat(1, 2)))) hi = Rat(1, 2);
        return {lo, hi};
    }

    bool contains(const Rat& point) const {
        // point in [0,1); arc may wrap
        Rat p = mod1(point);
        Rat offset = p - lower;
        if (offset < 0) offset += 1;
        return offset <= width;
    }
};

// Interval containing k * alpha_true mod 1 where alpha_true is known to lie
// in [alpha, alpha + tail_bound]. All arithmetic exact.
inline PhaseInterval phase_mod1(const Int& k, const Rat& alpha, const Rat& tail_bound) {
    if (tail_bound < 0) throw std::invalid_argument("phase_mod1: negative tail bound");
    Int ka = k < 0 ? Int(-k) : k;
    Rat width = Rat(ka) * tail_bound;
    if (width >= 1)
        throw IntervalTooWide("phase_mod1: width " + rat_str(width) +
                              " >= 1; extend the partial sum");
    Rat base = mod1(Rat(k) * alpha);
    if (k < 0) base = mod1(base - width);  // enclosure flips orientation
    return {base, width};
}

}  // namespace torusmin
