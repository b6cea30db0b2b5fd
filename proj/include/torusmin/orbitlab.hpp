#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "torusmin/skew.hpp"

namespace torusmin {

struct ErrorBudgetExhausted : std::runtime_error {
    explicit ErrorBudgetExhausted(const std::string& w) : std::runtime_error(w) {}
};

// Streams z_k = psi^k(z0) for psi = phi^m with additive per-step rounding
// bookkeeping. The truncated map is simulated as given, so the budget tracks
// rounding only, not shadowing: the bound says how far the computed point can
// be from the true orbit of the same map.
class OrbitSimulator {
  public:
    OrbitSimulator(const SkewProductSystem& sys, int m_power, const std::vector<Rat>& z0,
                   unsigned bits);

    const Point& current() const { return z_; }
    const Point& advance();  // one application of psi; throws ErrorBudgetExhausted
    const Real& error_bound() const { return err_; }
    unsigned long steps() const { return steps_; }
    unsigned precision() const { return bits_; }

  private:
    const SkewProductSystem* sys_;
    int m_;
    unsigned bits_;
    Point z_;
    Real err_{0};
    Real per_step_{0};
    unsigned long steps_ = 0;
};

struct Orbit {
    std::vector<std::vector<double>> points;  // coordinates mod 1
    unsigned precision_used = 0;
    Real final_error{0};
};

// materializes z_0 .. z_{n-1}
Orbit collect(OrbitSimulator& sim, unsigned long n);

struct OrbitDiagnostics {
    unsigned long n = 0;
    std::map<std::vector<long>, double> weyl;  // |S_N(k)| for |k|_inf <= k_max
    double coverage = 0;                       // visited fraction of the g^dim boxes
    unsigned precision_used = 0;
};

// Weyl sums are accumulated at a fixed 128 mantissa bits so that the result
// is independent of summation order well below the 1e-15 level.
OrbitDiagnostics diagnostics(const Orbit& orbit, int k_max, int g);

}  // namespace torusmin
