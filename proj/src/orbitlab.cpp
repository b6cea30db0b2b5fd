#include "torusmin/orbitlab.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace torusmin {

namespace {

Real series_mass(const SparseFourierSeries& s) {
    Real m(0);
    for (const auto& t : s.terms)
        for (const auto& c : t.coeff) m += c.abs();
    return m;
}

}  // namespace

OrbitSimulator::OrbitSimulator(const SkewProductSystem& sys, int m_power,
                               const std::vector<Rat>& z0, unsigned bits)
    : sys_(&sys), m_(m_power), bits_(bits) {
    if (m_power < 1) throw std::invalid_argument("OrbitSimulator: power must be positive");
    if (static_cast<int>(z0.size()) != sys.n)
        throw std::invalid_argument("OrbitSimulator: starting point dimension mismatch");
    unsigned needed = 65;  // one mod-1 reduction with a 64-bit guard
    if (!sys.fiber_series.terms.empty())
        needed = std::max(needed, sys.fiber_series.required_bits());
    if (sys.base_series && !sys.base_series->terms.empty())
        needed = std::max(needed, sys.base_series->required_bits());
    if (bits < needed)
        throw PrecisionInsufficient("OrbitSimulator: series frequencies need " +
                                    std::to_string(needed) + " bits");
    PrecisionGuard guard(bits);
    err_ = Real(0);
    z_.clear();
    for (const Rat& c : z0) z_.push_back(to_real(mod1(c), bits));
    Real mass = series_mass(sys.fiber_series) + Real(sys.n);
    if (sys.base_series) mass += series_mass(*sys.base_series);
    per_step_ = mass * pow(Real(2), static_cast<int>(needed) + 8 - static_cast<int>(bits));
}

const Point& OrbitSimulator::advance() {
    PrecisionGuard guard(bits_);
    for (int i = 0; i < m_; ++i) {
        z_ = step(*sys_, z_, bits_);
        err_ += per_step_;
    }
    ++steps_;
    if (err_ > pow(Real(2), -32))
        throw ErrorBudgetExhausted("orbit error bound exceeded 2^-32 after " +
                                   std::to_string(steps_) + " steps");
    return z_;
}

Orbit collect(OrbitSimulator& sim, unsigned long n) {
    Orbit orbit;
    orbit.precision_used = sim.precision();
    orbit.points.reserve(n);
    for (unsigned long i = 0; i < n; ++i) {
        if (i > 0) sim.advance();
        std::vector<double> pt;
        pt.reserve(sim.current().size());
        for (const Real& c : sim.current()) {
            double v = c.convert_to<double>();
            v -= std::floor(v);
            if (v >= 1.0) v -= 1.0;
            pt.push_back(v);
        }
        orbit.points.push_back(std::move(pt));
    }
    orbit.final_error = sim.error_bound();
    return orbit;
}

OrbitDiagnostics diagnostics(const Orbit& orbit, int k_max, int g) {
    if (k_max < 0 || g < 1) throw std::invalid_argument("diagnostics: bad parameters");
    OrbitDiagnostics out;
    out.n = orbit.points.size();
    out.precision_used = orbit.precision_used;
    if (orbit.points.empty()) return out;
    const int dim = static_cast<int>(orbit.points.front().size());

    long boxes = 1;
    for (int i = 0; i < dim; ++i) {
        boxes *= g;
        if (boxes > (1L << 22)) throw std::invalid_argument("diagnostics: more than 2^22 boxes");
    }
    std::vector<bool> visited(boxes, false);

    const int per_axis = 2 * k_max + 1;
    long chars = 1;
    for (int i = 0; i < dim; ++i) chars *= per_axis;

    PrecisionGuard guard(128);
    std::vector<Real> acc_re(chars, Real(0)), acc_im(chars, Real(0));
    std::vector<std::complex<double>> axis_pow(static_cast<size_t>(dim) * per_axis);

    for (const auto& pt : orbit.points) {
        long box = 0;
        for (int a = 0; a < dim; ++a) {
            int cell = static_cast<int>(pt[a] * g);
            if (cell >= g) cell = g - 1;
            box = box * g + cell;
        }
        visited[box] = true;
        if (chars == 1 && k_max == 0) continue;  // only k = 0 requested
        for (int a = 0; a < dim; ++a) {
            double ang = 2.0 * std::numbers::pi * pt[a];
            std::complex<double> base(std::cos(ang), std::sin(ang));
            std::complex<double> cur(1, 0);
            for (int k = 0; k <= k_max; ++k) {
                axis_pow[a * per_axis + k_max + k] = cur;
                axis_pow[a * per_axis + k_max - k] = std::conj(cur);
                cur *= base;
            }
        }
        for (long ci = 0; ci < chars; ++ci) {
            long rem = ci;
            std::complex<double> prod(1, 0);
            for (int a = dim - 1; a >= 0; --a) {
                prod *= axis_pow[a * per_axis + static_cast<int>(rem % per_axis)];
                rem /= per_axis;
            }
            acc_re[ci] += prod.real();
            acc_im[ci] += prod.imag();
        }
    }

    long seen = 0;
    for (bool b : visited) seen += b;
    out.coverage = double(seen) / double(boxes);

    Real nn(static_cast<double>(out.n));
    for (long ci = 0; ci < chars; ++ci) {
        std::vector<long> k(dim);
        long rem = ci;
        for (int a = dim - 1; a >= 0; --a) {
            k[a] = rem % per_axis - k_max;
            rem /= per_axis;
        }
        if (k_max == 0) {
            out.weyl[k] = 1.0;  // empty-product character: |S_N(0)| = 1 exactly
            continue;
        }
        Real mag = sqrt(acc_re[ci] * acc_re[ci] + acc_im[ci] * acc_im[ci]) / nn;
        out.weyl[k] = mag.convert_to<double>();
    }
    return out;
}

}  // namespace torusmin
