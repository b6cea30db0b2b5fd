#include "torusmin/cohomology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>

#include "torusmin/spectra.hpp"

namespace torusmin {

namespace {

using cd = std::complex<double>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// ----- small dense double-precision linear algebra ------------------------

using DMat = std::vector<std::vector<double>>;

DMat dmat_from(const IntMatrix& m) {
    DMat r(m.rows(), std::vector<double>(m.cols()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r[i][j] = m(i, j).convert_to<double>();
    return r;
}

DMat dmat_identity(int n) {
    DMat r(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) r[i][i] = 1.0;
    return r;
}

DMat dmat_mul(const DMat& a, const DMat& b) {
    int n = a.size(), m = b[0].size(), k = b.size();
    DMat r(n, std::vector<double>(m, 0.0));
    for (int i = 0; i < n; ++i)
        for (int t = 0; t < k; ++t)
            for (int j = 0; j < m; ++j) r[i][j] += a[i][t] * b[t][j];
    return r;
}

DMat dmat_add(const DMat& a, const DMat& b, double sb) {
    DMat r = a;
    for (size_t i = 0; i < r.size(); ++i)
        for (size_t j = 0; j < r[i].size(); ++j) r[i][j] += sb * b[i][j];
    return r;
}

DMat dmat_inverse(const DMat& m) {
    int n = m.size();
    DMat a = m, inv = dmat_identity(n);
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(a[i][k]) > std::fabs(a[p][k])) p = i;
        if (std::fabs(a[p][k]) < 1e-300) throw NoConvergence("matrix inversion hit a zero pivot");
        std::swap(a[k], a[p]);
        std::swap(inv[k], inv[p]);
        double piv = a[k][k];
        for (int j = 0; j < n; ++j) {
            a[k][j] /= piv;
            inv[k][j] /= piv;
        }
        for (int i = 0; i < n; ++i) {
            if (i == k) continue;
            double f = a[i][k];
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                a[i][j] -= f * a[k][j];
                inv[i][j] -= f * inv[k][j];
            }
        }
    }
    return inv;
}

std::vector<cd> dmat_apply(const DMat& m, const std::vector<cd>& v) {
    std::vector<cd> r(m.size(), cd(0, 0));
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j) r[i] += m[i][j] * v[j];
    return r;
}

double dmat_abs_sum(const DMat& m) {
    double s = 0;
    for (const auto& row : m)
        for (double v : row) s += std::fabs(v);
    return s;
}

// Spectral projector onto the expanding directions of a hyperbolic matrix:
// the Moebius map z -> (z-1)/(z+1) sends |z|>1 to the right half plane, and
// the matrix sign of the transformed matrix separates the two subspaces.
DMat unstable_projector(const DMat& b) {
    int n = b.size();
    DMat eye = dmat_identity(n);
    DMat m = dmat_mul(dmat_add(b, eye, -1.0), dmat_inverse(dmat_add(b, eye, 1.0)));
    DMat s = m;
    for (int it = 0; it < 60; ++it) {
        DMat sn = dmat_add(s, dmat_inverse(s), 1.0);
        for (auto& row : sn)
            for (double& v : row) v *= 0.5;
        double diff = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) diff = std::max(diff, std::fabs(sn[i][j] - s[i][j]));
        s = sn;
        if (diff < 1e-14) break;
    }
    DMat p = dmat_add(s, eye, 1.0);
    for (auto& row : p)
        for (double& v : row) v *= 0.5;
    return p;
}

// ----- mode bookkeeping ---------------------------------------------------

struct ModeGrid {
    int p, cap, per_axis, total;

    ModeGrid(int p_, int cap_) : p(p_), cap(cap_), per_axis(2 * cap_ + 1) {
        total = 1;
        for (int i = 0; i < p; ++i) total *= per_axis;
    }

    std::vector<long> decode(int idx) const {
        std::vector<long> k(p);
        for (int a = p - 1; a >= 0; --a) {
            k[a] = idx % per_axis - cap;
            idx /= per_axis;
        }
        return k;
    }
};

// One-axis linear transform of a flat tensor: applies `w` (rows x dims[axis])
// along `axis`; used for both analysis (grid -> modes) and synthesis.
std::vector<cd> axis_transform(const std::vector<cd>& in, std::vector<int>& dims, int axis,
                               const std::vector<std::vector<cd>>& w) {
    int rows = w.size(), old = dims[axis];
    int outer = 1, inner = 1;
    for (int a = 0; a < axis; ++a) outer *= dims[a];
    for (size_t a = axis + 1; a < dims.size(); ++a) inner *= dims[a];
    std::vector<cd> out(static_cast<size_t>(outer) * rows * inner, cd(0, 0));
    for (int o = 0; o < outer; ++o)
        for (int r = 0; r < rows; ++r) {
            const auto& wr = w[r];
            cd* dst = out.data() + (static_cast<size_t>(o) * rows + r) * inner;
            for (int t = 0; t < old; ++t) {
                cd c = wr[t];
                if (c == cd(0, 0)) continue;
                const cd* src = in.data() + (static_cast<size_t>(o) * old + t) * inner;
                for (int i = 0; i < inner; ++i) dst[i] += c * src[i];
            }
        }
    dims[axis] = rows;
    return out;
}

// grid samples (g^p, component-major caller loop) -> mode coefficients
std::vector<cd> analysis(const std::vector<cd>& samples, int p, int g, const ModeGrid& mg) {
    std::vector<std::vector<cd>> w(mg.per_axis, std::vector<cd>(g));
    for (int r = 0; r < mg.per_axis; ++r) {
        long k = r - mg.cap;
        for (int x = 0; x < g; ++x) {
            double ang = -kTwoPi * double(k) * double(x) / double(g);
            w[r][x] = cd(std::cos(ang), std::sin(ang)) / double(g);
        }
    }
    std::vector<cd> cur = samples;
    std::vector<int> dims(p, g);
    for (int a = 0; a < p; ++a) cur = axis_transform(cur, dims, a, w);
    return cur;
}

// mode coefficients -> samples on a uniform g-per-axis grid, optionally offset
std::vector<cd> synthesis_uniform(const std::vector<cd>& modes, int p, int g, const ModeGrid& mg,
                                  const std::vector<double>& offset) {
    std::vector<cd> cur = modes;
    std::vector<int> dims(p, mg.per_axis);
    for (int a = 0; a < p; ++a) {
        std::vector<std::vector<cd>> w(g, std::vector<cd>(mg.per_axis));
        for (int x = 0; x < g; ++x)
            for (int r = 0; r < mg.per_axis; ++r) {
                long k = r - mg.cap;
                double ang = kTwoPi * double(k) * (double(x) / double(g) + offset[a]);
                w[x][r] = cd(std::cos(ang), std::sin(ang));
            }
        cur = axis_transform(cur, dims, a, w);
    }
    return cur;
}

cd eval_modes_at(const std::vector<cd>& modes, const ModeGrid& mg,
                 const std::vector<double>& x) {
    cd acc(0, 0);
    for (int idx = 0; idx < mg.total; ++idx) {
        auto k = mg.decode(idx);
        double ang = 0;
        for (int a = 0; a < mg.p; ++a) ang += double(k[a]) * x[a];
        ang *= kTwoPi;
        acc += modes[idx] * cd(std::cos(ang), std::sin(ang));
    }
    return acc;
}

std::vector<double> wrap01(std::vector<double> x) {
    for (double& v : x) {
        v -= std::floor(v);
        if (v >= 1.0) v -= 1.0;
    }
    return x;
}

}  // namespace

TorusSelfMap TorusSelfMap::translation_by(std::vector<double> tau) {
    TorusSelfMap m;
    std::vector<double> t = tau;
    m.forward = [t](const std::vector<double>& x) {
        std::vector<double> y(x);
        for (size_t i = 0; i < y.size(); ++i) y[i] += t[i];
        return wrap01(y);
    };
    m.inverse = [t](const std::vector<double>& x) {
        std::vector<double> y(x);
        for (size_t i = 0; i < y.size(); ++i) y[i] -= t[i];
        return wrap01(y);
    };
    m.translation = std::move(tau);
    return m;
}

std::vector<double> SemiConjugacy::operator()(const std::vector<double>& x) const {
    std::vector<double> out(range_dim, 0.0);
    for (size_t m = 0; m < freqs.size(); ++m) {
        double ang = 0;
        for (int a = 0; a < domain_dim; ++a) ang += double(freqs[m][a]) * x[a];
        ang *= kTwoPi;
        cd ph(std::cos(ang), std::sin(ang));
        for (int c = 0; c < range_dim; ++c) out[c] += (coeffs[m][c] * ph).real();
    }
    return out;
}

SemiConjugacy solve_hyperbolic(const IntMatrix& b, const SampleFn& rhs,
                               const TorusSelfMap& phi, int domain_dim, int grid,
                               double tol, int max_iter) {
    if (!b.square() || b.rows() == 0) throw std::invalid_argument("solve_hyperbolic: bad matrix");
    if (domain_dim < 1 || grid < 4 || (grid & (grid - 1)) != 0)
        throw std::invalid_argument("solve_hyperbolic: grid must be a power of two >= 4");
    RootCensus census = root_census(char_poly(b));
    if (census.n_roots_of_unity + census.n_unimodular_not_rou + census.n_undecided > 0)
        throw NotHyperbolic("solve_hyperbolic: spectrum touches the unit circle");

    const int d = b.rows();
    const int p = domain_dim;
    DMat bd = dmat_from(b);
    DMat binv = dmat_inverse(bd);
    DMat pu = unstable_projector(bd);
    DMat ps = dmat_add(dmat_identity(d), pu, -1.0);
    bool has_stable = dmat_abs_sum(ps) > 1e-9;
    bool has_unstable = dmat_abs_sum(pu) > 1e-9;

    const int cap = std::max(2, grid / 8);
    ModeGrid mg(p, cap);

    // rhs modes from grid samples
    std::vector<std::vector<cd>> rhat(d, std::vector<cd>(mg.total));
    {
        long npts = 1;
        for (int a = 0; a < p; ++a) npts *= grid;
        std::vector<std::vector<cd>> samples(d, std::vector<cd>(npts));
        std::vector<double> x(p);
        for (long i = 0; i < npts; ++i) {
            long rem = i;
            for (int a = p - 1; a >= 0; --a) {
                x[a] = double(rem % grid) / double(grid);
                rem /= grid;
            }
            auto v = rhs(x);
            for (int c = 0; c < d; ++c) samples[c][i] = cd(v[c], 0);
        }
        for (int c = 0; c < d; ++c) rhat[c] = analysis(samples[c], p, grid, mg);
    }

    // per-mode coefficient vectors
    auto mode_vec = [&](const std::vector<std::vector<cd>>& field, int idx) {
        std::vector<cd> v(d);
        for (int c = 0; c < d; ++c) v[c] = field[c][idx];
        return v;
    };

    std::vector<std::vector<cd>> h(d, std::vector<cd>(mg.total, cd(0, 0)));
    int iters = 0;
    double prev_change = std::numeric_limits<double>::infinity();
    int bad_streak = 0;

    if (phi.translation) {
        const auto& tau = *phi.translation;
        std::vector<cd> ph(mg.total);
        for (int idx = 0; idx < mg.total; ++idx) {
            auto k = mg.decode(idx);
            double ang = 0;
            for (int a = 0; a < p; ++a) ang += double(k[a]) * tau[a];
            ang *= kTwoPi;
            ph[idx] = cd(std::cos(ang), std::sin(ang));
        }
        for (iters = 1; iters <= max_iter; ++iters) {
            double change = 0;
            for (int idx = 0; idx < mg.total; ++idx) {
                auto hv = mode_vec(h, idx);
                auto rv = mode_vec(rhat, idx);
                auto hu = dmat_apply(pu, hv);
                auto hs = dmat_apply(ps, hv);
                auto ru = dmat_apply(pu, rv);
                auto rs = dmat_apply(ps, rv);
                std::vector<cd> nv(d, cd(0, 0));
                for (int c = 0; c < d; ++c) hu[c] = ph[idx] * hu[c] + ru[c];
                auto up = dmat_apply(binv, hu);
                auto bs = dmat_apply(bd, hs);
                for (int c = 0; c < d; ++c)
                    nv[c] = up[c] + std::conj(ph[idx]) * (bs[c] - rs[c]);
                for (int c = 0; c < d; ++c) {
                    change += std::abs(nv[c] - h[c][idx]);
                    h[c][idx] = nv[c];
                }
            }
            if (change < tol * 1e-3) break;
            if (change > prev_change * (1.0 + 1e-12)) {
                if (++bad_streak >= 20)
                    throw NoConvergence("solve_hyperbolic: iteration is not contracting");
            } else {
                bad_streak = 0;
            }
            prev_change = change;
        }
    } else {
        if (has_stable && !phi.inverse)
            throw std::invalid_argument(
                "solve_hyperbolic: contracting spectrum needs the inverse map");
        long npts = 1;
        for (int a = 0; a < p; ++a) npts *= grid;
        std::vector<std::vector<double>> fwd_pts(npts), inv_pts(npts);
        std::vector<std::vector<std::vector<cd>>> rs_at_inv;  // (P^- rhs)(phi^{-1} x)
        std::vector<double> x(p);
        for (long i = 0; i < npts; ++i) {
            long rem = i;
            for (int a = p - 1; a >= 0; --a) {
                x[a] = double(rem % grid) / double(grid);
                rem /= grid;
            }
            fwd_pts[i] = wrap01(phi.forward(x));
            if (has_stable) inv_pts[i] = wrap01(phi.inverse(x));
        }
        std::vector<std::vector<cd>> ru(d, std::vector<cd>(npts)), rsi(d, std::vector<cd>(npts));
        {
            std::vector<double> x2(p);
            for (long i = 0; i < npts; ++i) {
                long rem = i;
                for (int a = p - 1; a >= 0; --a) {
                    x2[a] = double(rem % grid) / double(grid);
                    rem /= grid;
                }
                auto v = rhs(x2);
                std::vector<cd> vc(v.begin(), v.end());
                auto vpu = dmat_apply(pu, vc);
                for (int c = 0; c < d; ++c) ru[c][i] = vpu[c];
                if (has_stable) {
                    auto w = rhs(inv_pts[i]);
                    std::vector<cd> wc(w.begin(), w.end());
                    auto wps = dmat_apply(ps, wc);
                    for (int c = 0; c < d; ++c) rsi[c][i] = wps[c];
                }
            }
        }
        for (iters = 1; iters <= max_iter; ++iters) {
            std::vector<std::vector<cd>> next(d, std::vector<cd>(npts, cd(0, 0)));
            for (long i = 0; i < npts; ++i) {
                std::vector<cd> hf(d), hi(d, cd(0, 0));
                for (int c = 0; c < d; ++c) hf[c] = eval_modes_at(h[c], mg, fwd_pts[i]);
                auto hfu = dmat_apply(pu, hf);
                for (int c = 0; c < d; ++c) hfu[c] += ru[c][i];
                auto up = has_unstable ? dmat_apply(binv, hfu) : std::vector<cd>(d, cd(0, 0));
                std::vector<cd> down(d, cd(0, 0));
                if (has_stable) {
                    for (int c = 0; c < d; ++c) hi[c] = eval_modes_at(h[c], mg, inv_pts[i]);
                    auto his = dmat_apply(ps, hi);
                    auto bh = dmat_apply(bd, his);
                    for (int c = 0; c < d; ++c) down[c] = bh[c] - rsi[c][i];
                }
                for (int c = 0; c < d; ++c) next[c][i] = up[c] + down[c];
            }
            double change = 0;
            for (int c = 0; c < d; ++c) {
                auto modes = analysis(next[c], p, grid, mg);
                for (int idx = 0; idx < mg.total; ++idx) {
                    change += std::abs(modes[idx] - h[c][idx]);
                    h[c][idx] = modes[idx];
                }
            }
            if (change < tol * 1e-3) break;
            if (change > prev_change * (1.0 + 1e-12)) {
                if (++bad_streak >= 20)
                    throw NoConvergence("solve_hyperbolic: iteration is not contracting");
            } else {
                bad_streak = 0;
            }
            prev_change = change;
        }
    }
    if (iters > max_iter) iters = max_iter;

    SemiConjugacy out;
    out.domain_dim = p;
    out.range_dim = d;
    out.grid = grid;
    out.mode_cap = cap;
    out.iterations = iters;
    out.freqs.reserve(mg.total);
    out.coeffs.reserve(mg.total);
    for (int idx = 0; idx < mg.total; ++idx) {
        out.freqs.push_back(mg.decode(idx));
        std::vector<cd> v(d);
        for (int c = 0; c < d; ++c) v[c] = h[c][idx];
        out.coeffs.push_back(std::move(v));
    }

    // residual on a shadow grid twice as fine: sup |B H - H o phi - rhs|
    {
        int sg = 2 * grid;
        long npts = 1;
        for (int a = 0; a < p; ++a) npts *= sg;
        std::vector<std::vector<cd>> hs(d);
        for (int c = 0; c < d; ++c)
            hs[c] = synthesis_uniform(h[c], p, sg, mg, std::vector<double>(p, 0.0));
        std::vector<std::vector<cd>> hphi(d, std::vector<cd>(npts));
        if (phi.translation) {
            for (int c = 0; c < d; ++c)
                hphi[c] = synthesis_uniform(h[c], p, sg, mg, *phi.translation);
        } else {
            std::vector<double> x(p);
            for (long i = 0; i < npts; ++i) {
                long rem = i;
                for (int a = p - 1; a >= 0; --a) {
                    x[a] = double(rem % sg) / double(sg);
                    rem /= sg;
                }
                auto y = wrap01(phi.forward(x));
                for (int c = 0; c < d; ++c) hphi[c][i] = eval_modes_at(h[c], mg, y);
            }
        }
        double worst = 0;
        std::vector<double> x(p);
        for (long i = 0; i < npts; ++i) {
            long rem = i;
            for (int a = p - 1; a >= 0; --a) {
                x[a] = double(rem % sg) / double(sg);
                rem /= sg;
            }
            auto rv = rhs(x);
            for (int c = 0; c < d; ++c) {
                double bh = 0;
                for (int j = 0; j < d; ++j) bh += bd[c][j] * hs[j][i].real();
                worst = std::max(worst, std::fabs(bh - hphi[c][i].real() - rv[c]));
            }
        }
        out.residual = worst;
    }
    return out;
}

// ---------------------------------------------------------------------------
// obstruction witnesses
// ---------------------------------------------------------------------------

std::string to_string(WitnessVerdict v) {
    return v == WitnessVerdict::NoContinuousSolution ? "no-continuous-solution" : "inconclusive";
}

namespace {

CNum phase_at(const Int& k, const LiouvilleDatum& d, unsigned bits) {
    return exp2pii(mod1(Rat(k) * d.alpha), bits);
}

// certified lower bound for |e^{2 pi i k m alpha} - 1|
Rat divisor_floor(const Int& k, int m, const LiouvilleDatum& d) {
    PhaseInterval ph = phase_mod1(k * m, d.alpha, d.tail_bound);
    auto [lo, hi] = ph.dist_to(Rat(0));
    (void)hi;
    return Rat(4) * lo;
}

const FourierTerm* find_term(const SparseFourierSeries& s, const Int& k) {
    for (const auto& t : s.terms) {
        if (t.freq[0] != k) continue;
        bool rest = true;
        for (size_t i = 1; i < t.freq.size(); ++i)
            if (t.freq[i] != 0) rest = false;
        if (rest) return &t;
    }
    return nullptr;
}

bool cnum_close(const CNum& a, const CNum& b) {
    Real scale = 1 + a.abs() + b.abs();
    return (a - b).abs() < scale * pow(Real(2), -60);
}

Rat rat_sqrt_lower(Rat s) {
    if (s <= 0) return Rat(0);
    Int scale = 1;
    while (s * scale * scale < 1) scale *= 2;
    Int nd = num(s) * den(s) * scale * scale;
    Int r = boost::multiprecision::sqrt(nd);  // floor of the square root
    return Rat(r, den(s) * scale);
}

Rat rat_cos(int order) {
    switch (order) {
        case 3: return Rat(-1, 2);
        case 4: return Rat(0);
        case 6: return Rat(1, 2);
    }
    throw std::logic_error("unexpected cyclotomic order");
}

Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }
Int int_abs(const Int& r) { return r < 0 ? Int(-r) : r; }

struct ProbeContext {
    const SkewProductSystem& sys;
    const std::vector<Int>& lg;
    unsigned levels;
    unsigned bits;
};

// Generic numeric fallback when the stored series does not carry the
// certified coefficient pattern: evaluates the forced transfer coefficient
//   <l_gamma, (sum_i B^{m-i} e^{i-1}) F^(k)> / (e^m - 1)
// directly and reports Inconclusive unless the values stay visibly large.
ObstructionWitness generic_probes(const ProbeContext& ctx, size_t target,
                                  const std::string& why) {
    PrecisionGuard guard(ctx.bits);
    const auto& sys = ctx.sys;
    const auto& d = *sys.datum;
    int f = sys.n - sys.p;
    ObstructionWitness w;
    w.l_gamma = ctx.lg;
    w.rationale = "series deviates from the certified pattern (" + why +
                  "); numeric probe values only";
    bool first = true;
    for (unsigned j = 1; j <= ctx.levels; ++j) {
        ApproxCertificate cert = approx_sequence(d, target, j);
        const FourierTerm* term = find_term(sys.fiber_series, cert.k);
        if (!term) break;
        Rat floor_r = divisor_floor(cert.k, sys.m_power, d);
        if (floor_r == 0) continue;  // divisor not separated from zero at this level
        CNum e = phase_at(cert.k, d, ctx.bits);
        // S = sum_{i=1}^{m} B^{m-i} e^{i-1}, applied to the stored coefficient
        std::vector<CNum> acc(f, CNum(Real(0), Real(0)));
        CNum epow(Real(1), Real(0));
        for (int i = 1; i <= sys.m_power; ++i) {
            IntMatrix bp = sys.b.pow(sys.m_power - i);
            for (int r = 0; r < f; ++r)
                for (int c = 0; c < f; ++c)
                    acc[r] += to_real(Rat(bp(r, c)), ctx.bits) * (epow * term->coeff[c]);
            epow *= e;
        }
        CNum numer(Real(0), Real(0));
        for (int r = 0; r < f; ++r) numer += to_real(Rat(ctx.lg[r]), ctx.bits) * acc[r];
        CNum div = epow - CNum(Real(1), Real(0));  // epow == e^m here
        CNum val = numer / div;
        ObstructionProbe probe{target, j, cert.k, val, floor_r, "numeric"};
        Real a = val.abs();
        if (first || a < w.liminf_estimate) w.liminf_estimate = a;
        first = false;
        w.probes.push_back(std::move(probe));
    }
    w.verdict = WitnessVerdict::Inconclusive;
    return w;
}

// Constant-value families: the synthesized coefficients make the forced
// transfer coefficient cancel exactly to a j-independent value.
ObstructionWitness constant_probes(const ProbeContext& ctx, size_t target, const CNum& value,
                                   const Rat& lower, const std::string& closed_form,
                                   const std::function<bool(const FourierTerm&, const CNum&)>&
                                       pattern_ok) {
    PrecisionGuard guard(ctx.bits);
    const auto& sys = ctx.sys;
    const auto& d = *sys.datum;
    ObstructionWitness w;
    w.l_gamma = ctx.lg;
    for (unsigned j = 1; j <= ctx.levels; ++j) {
        ApproxCertificate cert = approx_sequence(d, target, j);
        const FourierTerm* term = find_term(sys.fiber_series, cert.k);
        if (!term) break;
        CNum e = phase_at(cert.k, d, ctx.bits);
        if (!pattern_ok(*term, e)) return generic_probes(ctx, target, closed_form);
        w.probes.push_back({target, j, cert.k, value, divisor_floor(cert.k, sys.m_power, d),
                            closed_form});
    }
    if (w.probes.empty()) return generic_probes(ctx, target, "no retained probe frequencies");
    w.liminf_estimate = value.abs();
    w.lower_bound = lower;
    w.verdict = lower > 0 ? WitnessVerdict::NoContinuousSolution : WitnessVerdict::Inconclusive;
    w.rationale = "transfer coefficient equals " + closed_form +
                  " at every retained probe frequency (and at every further level of the "
                  "untruncated series); nonvanishing coefficients along an infinite sequence "
                  "are incompatible with Riemann-Lebesgue decay";
    return w;
}

ObstructionWitness scalar_shift(const ProbeContext& ctx, size_t target) {
    CNum value(to_real(Rat(ctx.lg[0]), ctx.bits), Real(0));
    auto pattern = [&](const FourierTerm& t, const CNum& e) {
        CNum expected = CNum(Real(1), Real(0)) + e;
        if (!cnum_close(t.coeff[0], expected)) return false;
        for (size_t i = 1; i < t.coeff.size(); ++i)
            if (!cnum_close(t.coeff[i], CNum(Real(0), Real(0)))) return false;
        return true;
    };
    return constant_probes(ctx, target, value, rat_abs(Rat(ctx.lg[0])),
                           "the fiber character itself", pattern);
}

// <l_pair, V> for the exact cyclotomic eigenvector V of the periodic block;
// the eigenvector may sit at a component offset inside a larger fiber.
ObstructionWitness resolvent_cyc(const ProbeContext& ctx, size_t target, int comp_offset) {
    const auto& sys = ctx.sys;
    int order = sys.eigenvector.at(0).order();
    CycNum pairing = CycNum::rational(order, Rat(0));
    for (size_t i = 0; i < sys.eigenvector.size(); ++i)
        pairing = pairing + sys.eigenvector[i] * Rat(ctx.lg[comp_offset + i]);
    // |a + b zeta|^2 = a^2 + b^2 + 2 a b cos(2 pi / order), an exact rational
    Rat csq = pairing.a() * pairing.a() + pairing.b() * pairing.b() +
              2 * pairing.a() * pairing.b() * rat_cos(order);
    CNum value = pairing.to_complex(ctx.bits);
    CNum zeta = CycNum::zeta(order).to_complex(ctx.bits);
    auto pattern = [&, comp_offset](const FourierTerm& t, const CNum& e) {
        CNum factor = e - zeta;
        for (int i = 0; i < comp_offset; ++i)
            if (!cnum_close(t.coeff[i], CNum(Real(0), Real(0)))) return false;
        for (size_t i = 0; i < sys.eigenvector.size(); ++i)
            if (!cnum_close(t.coeff[comp_offset + i],
                            factor * sys.eigenvector[i].to_complex(ctx.bits)))
                return false;
        return true;
    };
    return constant_probes(ctx, target, value, rat_sqrt_lower(csq),
                           "the pairing with the periodic block's eigenvector", pattern);
}

// <l_pair, (a, b)> with (a, b) = (1, sqrt 2): bounded below through the
// quadratic norm |l1^2 - 2 l2^2| >= 1.
ObstructionWitness pair_probe(const ProbeContext& ctx, size_t target) {
    const auto& sys = ctx.sys;
    const Int& l1 = ctx.lg[0];
    const Int& l2 = ctx.lg[1];
    if (!(sys.pair_a.is_exact() && sys.pair_a.value == 1))
        return generic_probes(ctx, target, "unexpected irrational pair");
    Rat nrm = rat_abs(Rat(l1 * l1 - 2 * l2 * l2));
    Rat lower = nrm / (Rat(int_abs(l1)) + Rat(3, 2) * Rat(int_abs(l2)));
    PrecisionGuard guard(ctx.bits);
    Real bval = to_real(sys.pair_b.value, ctx.bits) + to_real(sys.pair_b.tail_bound, ctx.bits) / 2;
    CNum value(to_real(Rat(l1), ctx.bits) + to_real(Rat(l2), ctx.bits) * bval, Real(0));
    CNum av(to_real(sys.pair_a.value, ctx.bits), Real(0));
    CNum bv(bval, Real(0));
    auto pattern = [&](const FourierTerm& t, const CNum& e) {
        CNum factor = CNum(Real(1), Real(0)) + e;
        return cnum_close(t.coeff[0], factor * av) && cnum_close(t.coeff[1], factor * bv);
    };
    return constant_probes(ctx, target, value, lower,
                           "the pairing with the rationally independent pair", pattern);
}

ObstructionWitness mismatch_witness(const std::vector<Int>& lg, const Int& coeff,
                                    const std::string& why) {
    ObstructionWitness w;
    w.l_gamma = lg;
    w.linear_mismatch = true;
    w.lower_bound = Rat(int_abs(coeff));
    w.verdict = WitnessVerdict::NoContinuousSolution;
    w.rationale = why;
    return w;
}

// Base-averaged reduction of the regrouped four-dimensional tower: averaging
// the equation over the second base coordinate forces, at the probe
// frequencies, a coefficient converging to
//   l1 sqrt2 + l2 sqrt3 - R/2  (mod the integer base character),  R integer,
// whose distance to (R/2 + Z) is bounded below through the norm of
// Q(sqrt2, sqrt3).
ObstructionWitness fiber_integrated(const ProbeContext& ctx) {
    PrecisionGuard guard(ctx.bits);
    const auto& sys = ctx.sys;
    const auto& d = *sys.datum;
    const Int& l1 = ctx.lg[0];
    const Int& l2 = ctx.lg[1];
    Int s_coupling = sys.b(1, 0);
    if (l2 != 0 && s_coupling != 0)
        return mismatch_witness(ctx.lg, 2 * s_coupling * l2,
                                "a linear fiber term survives in the averaged equation");
    // linear base characters on the right-hand side must vanish
    IntMatrix m2 = sys.c * sys.a + sys.b * sys.c;
    for (int col = 0; col < 2; ++col) {
        Int coeff = ctx.lg[0] * m2(0, col) + ctx.lg[1] * m2(1, col);
        if (coeff != 0)
            return mismatch_witness(ctx.lg, coeff,
                                    "a linear base character survives in the averaged equation");
    }

    Int r_const = l1 * sys.c(0, 1) + l2 * sys.c(1, 1);
    Real sqrt2 =
        to_real(sys.pair_a.value, ctx.bits) + to_real(sys.pair_a.tail_bound, ctx.bits) / 2;
    Real sqrt3 =
        to_real(sys.pair_b.value, ctx.bits) + to_real(sys.pair_b.tail_bound, ctx.bits) / 2;
    Real u_limit = to_real(Rat(l1), ctx.bits) * sqrt2 + to_real(Rat(l2), ctx.bits) * sqrt3 -
                   to_real(Rat(r_const, 2), ctx.bits);

    // exact lower bound for |l1 sqrt2 + l2 sqrt3 - T| over T in R/2 + Z,
    // via the quartic norm of 2x and the two coset points nearest the value
    auto quartic_bound = [&](const Rat& t) {
        Int pp = 2 * l1, qq = 2 * l2;
        Rat tt = 2 * t;
        Rat nrm = rat_abs((Rat(2 * pp * pp) + tt * tt - Rat(3 * qq * qq)) *
                              (Rat(2 * pp * pp) + tt * tt - Rat(3 * qq * qq)) -
                          Rat(8 * pp * pp) * tt * tt);
        Rat m = Rat(3, 2) * Rat(int_abs(pp)) + Rat(7, 4) * Rat(int_abs(qq)) + rat_abs(tt);
        if (m == 0) return Rat(0);
        return Rat(nrm / (2 * m * m * m));
    };
    Real u_shift = u_limit + to_real(Rat(r_const, 2), ctx.bits);  // l1 sqrt2 + l2 sqrt3
    Int nearest = floor(u_limit + Real(1) / 2).convert_to<Int>();
    Rat t1 = Rat(r_const, 2) + nearest;
    Rat c_final = std::min(quartic_bound(t1 - 1), std::min(quartic_bound(t1), quartic_bound(t1 + 1)));

    ObstructionWitness w;
    w.l_gamma = ctx.lg;
    Rat best_dev(-1);
    bool first = true;
    for (unsigned j = 1; j <= ctx.levels; ++j) {
        ApproxCertificate cert = approx_sequence(d, 0, j);
        const FourierTerm* fterm = find_term(sys.fiber_series, cert.k);
        const FourierTerm* bterm =
            sys.base_series ? find_term(*sys.base_series, cert.k) : nullptr;
        if (!fterm || !bterm) break;
        CNum e = phase_at(cert.k, d, ctx.bits);
        CNum factor = CNum(Real(1), Real(0)) + e;
        if (!cnum_close(fterm->coeff[0], factor * CNum(sqrt2, Real(0))) ||
            !cnum_close(fterm->coeff[1], factor * CNum(sqrt3, Real(0))) ||
            !cnum_close(bterm->coeff[1], factor))
            return generic_probes(ctx, 0, "regrouped tower series");
        CNum rc(to_real(Rat(r_const), ctx.bits), Real(0));
        CNum value = CNum(u_shift, Real(0)) + rc / (e - CNum(Real(1), Real(0)));
        // deviation of the probe value from its limit:
        //   |R| |1/(e-1) + 1/2| <= |R| (2 pi dist) / (2 (2 - 2 pi dist))
        Rat dist = cert.distance_hi;
        Rat two_pi(710, 113);
        Rat dev(-1);
        if (two_pi * dist < Rat(3, 2))
            dev = Rat(int_abs(r_const)) * two_pi * dist / (2 * (2 - two_pi * dist));
        ObstructionProbe probe{0, j, cert.k, value, divisor_floor(cert.k, sys.m_power, d),
                               dev >= 0 ? "certified deviation " + rat_str(dev)
                                        : "level too coarse to certify"};
        Real a = abs(value.re - to_real(Rat(r_const, 2), ctx.bits));
        if (first || a < w.liminf_estimate) w.liminf_estimate = a;
        first = false;
        if (dev >= 0 && (best_dev < 0 || dev < best_dev)) best_dev = dev;
        w.probes.push_back(std::move(probe));
    }
    if (w.probes.empty()) return generic_probes(ctx, 0, "no retained probe frequencies");
    if (best_dev >= 0 && c_final - best_dev > 0) {
        w.lower_bound = c_final - best_dev;
        w.verdict = WitnessVerdict::NoContinuousSolution;
        w.rationale =
            "averaged transfer coefficients stay within a certified deviation of an "
            "irrational limit whose distance to the admissible half-integer coset is at "
            "least " +
            rat_str(c_final) + "; the bound is uniform over the base character";
    } else {
        w.verdict = WitnessVerdict::Inconclusive;
        w.rationale = "no probe level reached a certified deviation below the norm bound";
    }
    return w;
}

}  // namespace

ObstructionWitness obstruction_witness(const SkewProductSystem& sys,
                                       const std::vector<Int>& l_gamma, unsigned levels) {
    int f = sys.n - sys.p;
    if (static_cast<int>(l_gamma.size()) != f)
        throw BranchMismatch("obstruction_witness: character has wrong dimension");
    bool all_zero = true;
    for (const auto& v : l_gamma)
        if (v != 0) all_zero = false;
    if (all_zero) throw BranchMismatch("obstruction_witness: zero character");
    if (sys.plan.probes.empty())
        throw BranchMismatch("obstruction_witness: system carries no witness plan");
    if (!sys.datum) throw BranchMismatch("obstruction_witness: no approximation datum");
    ProbeContext ctx{sys, l_gamma, levels, sys.prec_bits};

    switch (sys.case_tag) {
        case CaseTag::Order2FiberN2:
        case CaseTag::Order2AffineBaseN3:
        case CaseTag::Order2AffineBaseN4:
            return scalar_shift(ctx, 0);
        case CaseTag::PeriodicFiberN3:
            return resolvent_cyc(ctx, 0, 0);
        case CaseTag::MinusIdentityN3:
            return pair_probe(ctx, 0);
        case CaseTag::PeriodicFiberN4:
            return sys.eigenvector.empty() ? pair_probe(ctx, 0) : resolvent_cyc(ctx, 0, 0);
        case CaseTag::SplitFiberN4: {
            if (l_gamma[1] != 0 || l_gamma[2] != 0) return resolvent_cyc(ctx, 1, 1);
            return scalar_shift(ctx, 0);
        }
        case CaseTag::NestedN3:
        case CaseTag::NestedN4: {
            Int s = sys.b(1, 0);
            if (l_gamma[1] != 0)
                return mismatch_witness(l_gamma, 2 * s * l_gamma[1],
                                        "a linear fiber term survives in the iterated "
                                        "right-hand side");
            if (!sys.nested)
                throw BranchMismatch("obstruction_witness: missing nested subsystem");
            ObstructionWitness w = obstruction_witness(*sys.nested, {l_gamma[0]}, levels);
            w.l_gamma = l_gamma;
            w.rationale = "character lives on the minimal sub-tower; " + w.rationale;
            return w;
        }
        case CaseTag::RegroupedTowerN4:
            return fiber_integrated(ctx);
        case CaseTag::AffineUnipotent:
            throw BranchMismatch("obstruction_witness: affine system has no witness plan");
    }
    throw BranchMismatch("obstruction_witness: unhandled branch");
}

// ---------------------------------------------------------------------------
// affine mismatch test
// ---------------------------------------------------------------------------

namespace {

// affine constant tracked as (rational part) + (rational coefficients of the
// inexact translation slots, which are treated as jointly irrational)
struct SymVal {
    Rat cst;
    std::vector<Rat> sym;

    explicit SymVal(size_t slots) : sym(slots, Rat(0)) {}
};

SymVal sym_from_enclosure(const RatEnclosure& e, size_t slot, size_t slots) {
    SymVal v(slots);
    if (e.is_exact())
        v.cst = e.value;
    else
        v.sym[slot] = 1;
    return v;
}

void add_scaled(SymVal& acc, const SymVal& v, const Rat& s) {
    acc.cst += s * v.cst;
    for (size_t i = 0; i < acc.sym.size(); ++i) acc.sym[i] += s * v.sym[i];
}

}  // namespace

bool affine_mismatch_check(const SkewProductSystem& sys, int m, const std::vector<Int>& l,
                           const std::vector<Int>& l_gamma) {
    int p = sys.p, f = sys.n - p;
    if (static_cast<int>(l.size()) != p || static_cast<int>(l_gamma.size()) != f)
        throw std::invalid_argument("affine_mismatch_check: character dimensions");
    if (m < 1) throw std::invalid_argument("affine_mismatch_check: power must be positive");

    IntMatrix a_m = sys.a.pow(m), b_m = sys.b.pow(m);

    // fiber characters: l_gamma must be fixed by the transposed fiber block
    for (int cjj = 0; cjj < f; ++cjj) {
        Int acc = 0;
        for (int i = 0; i < f; ++i) acc += l_gamma[i] * b_m(i, cjj);
        if (acc != l_gamma[cjj]) return true;
    }

    // linear base characters: l^t (A^m - I) must equal l_gamma^t C_m
    IntMatrix c_m(f, p), a_pow = IntMatrix::identity(p);
    for (int j = 0; j < m; ++j) {
        c_m = sys.b * c_m + sys.c * a_pow;
        a_pow = a_pow * sys.a;
    }
    for (int cjj = 0; cjj < p; ++cjj) {
        Int lhs = 0, rhs = 0;
        for (int i = 0; i < p; ++i) lhs += l[i] * (a_m(i, cjj) - (i == cjj ? 1 : 0));
        for (int i = 0; i < f; ++i) rhs += l_gamma[i] * c_m(i, cjj);
        if (lhs != rhs) return true;
    }

    // constants, with the inexact translation entries as formal symbols
    size_t slots = sys.delta.size();
    std::vector<SymVal> db, df;
    for (int i = 0; i < p; ++i) db.push_back(sym_from_enclosure(sys.delta[i], i, slots));
    for (int i = 0; i < f; ++i) df.push_back(sym_from_enclosure(sys.delta[p + i], p + i, slots));

    // partial sums S_j = sum_{i<j} A^i and the accumulated fiber constant
    std::vector<SymVal> base_const(p, SymVal(slots)), fiber_const(f, SymVal(slots));
    std::vector<SymVal> s_delta(p, SymVal(slots));  // S_{j-1} applied to the base translation
    a_pow = IntMatrix::identity(p);
    for (int j = 1; j <= m; ++j) {
        IntMatrix b_pow = sys.b.pow(m - j);
        std::vector<SymVal> inner(f, SymVal(slots));
        for (int i = 0; i < f; ++i) {
            for (int t = 0; t < p; ++t) add_scaled(inner[i], s_delta[t], Rat(sys.c(i, t)));
            add_scaled(inner[i], df[i], Rat(1));
        }
        for (int i = 0; i < f; ++i)
            for (int t = 0; t < f; ++t) add_scaled(fiber_const[i], inner[t], Rat(b_pow(i, t)));
        // advance S_j delta_b by A^{j-1} delta_b
        for (int i = 0; i < p; ++i)
            for (int t = 0; t < p; ++t) add_scaled(s_delta[i], db[t], Rat(a_pow(i, t)));
        a_pow = a_pow * sys.a;
    }
    base_const = s_delta;  // S_m delta_b

    SymVal lhs(slots), rhs(slots);
    for (int i = 0; i < p; ++i) add_scaled(lhs, base_const[i], Rat(l[i]));
    for (int i = 0; i < f; ++i) add_scaled(rhs, fiber_const[i], Rat(l_gamma[i]));
    for (size_t i = 0; i < slots; ++i)
        if (lhs.sym[i] != rhs.sym[i]) return true;
    Rat diff = lhs.cst - rhs.cst;
    return den(diff) != 1;  // must agree modulo the integers
}

// ---------------------------------------------------------------------------
// conjugacy to the affine model
// ---------------------------------------------------------------------------

namespace {

// solves (e I - B) g = c over CNum by Gaussian elimination
std::vector<CNum> cnum_solve(const CNum& e, const RatMatrix& b, const std::vector<CNum>& c,
                             unsigned bits, Real& min_pivot) {
    int n = b.rows();
    std::vector<std::vector<CNum>> a(n, std::vector<CNum>(n + 1, CNum(Real(0), Real(0))));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a[i][j] = CNum(-to_real(b(i, j), bits), Real(0));
        a[i][i] += e;
        a[i][n] = c[i];
    }
    min_pivot = -1;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (a[i][k].abs() > a[piv][k].abs()) piv = i;
        std::swap(a[k], a[piv]);
        Real mag = a[k][k].abs();
        if (min_pivot < 0 || mag < min_pivot) min_pivot = mag;
        if (mag == 0) throw SingularDivisor("resolvent solve hit a zero pivot");
        for (int i = k + 1; i < n; ++i) {
            CNum fct = a[i][k] / a[k][k];
            for (int j = k; j <= n; ++j) a[i][j] -= fct * a[k][j];
        }
    }
    std::vector<CNum> g(n, CNum(Real(0), Real(0)));
    for (int i = n - 1; i >= 0; --i) {
        CNum acc = a[i][n];
        for (int j = i + 1; j < n; ++j) acc -= a[i][j] * g[j];
        g[i] = acc / a[i][i];
    }
    return g;
}

}  // namespace

SmoothConjugacy solve_diophantine_conjugacy(const SkewProductSystem& sys,
                                            const DiophantineParams& params, int grid,
                                            unsigned bits) {
    PrecisionGuard guard(bits);
    int p = sys.p, f = sys.n - p;
    if (f == 0) throw std::invalid_argument("solve_diophantine_conjugacy: no fiber");
    if (!(sys.a == IntMatrix::identity(p)) || sys.base_series)
        throw std::invalid_argument(
            "solve_diophantine_conjugacy: base must be a pure translation");
    if (!quasi_unipotent_test(sys.b).first)
        throw std::invalid_argument(
            "solve_diophantine_conjugacy: fiber block must be quasi-unipotent");

    // certify the translation vector
    SmoothConjugacy out;
    if (p == 1) {
        const RatEnclosure& alpha = sys.delta[0];
        if (alpha.is_exact())
            throw NotDiophantineCertified("translation is exactly rational");
        out.scan = diophantine_scan(alpha, params.constant, params.exponent, params.q_max, bits);
        if (out.scan.violator)
            throw NotDiophantineCertified("scan found q = " + out.scan.violator->str() +
                                          " below the Diophantine threshold");
    } else {
        // multi-dimensional translations: scan the characters |k|_inf <= Q
        Int q_cap = params.q_max < 64 ? params.q_max : Int(64);
        long q = q_cap.convert_to<long>();
        bool first = true;
        std::vector<long> k(p, -q);
        while (true) {
            bool zero = std::all_of(k.begin(), k.end(), [](long v) { return v == 0; });
            if (!zero) {
                Rat dot(0);
                Rat width(0);
                long norm = 0;
                for (int i = 0; i < p; ++i) {
                    dot += Rat(k[i]) * sys.delta[i].value;
                    width += Rat(std::labs(k[i])) * sys.delta[i].tail_bound;
                    norm = std::max(norm, std::labs(k[i]));
                }
                Rat dist = dist_to_int(dot);
                Rat lo = dist - width;
                double quality =
                    std::pow(double(norm), 1.0 + params.exponent) *
                    (lo > 0 ? (num(lo).convert_to<double>() / den(lo).convert_to<double>()) : 0.0);
                if (first || quality < out.scan.min_quality) {
                    out.scan.min_quality = quality;
                    out.scan.minimizer = norm;
                    first = false;
                }
                if (quality < params.constant) {
                    out.scan.violator = Int(norm);
                    throw NotDiophantineCertified("character below the Diophantine threshold");
                }
            }
            int axis = p - 1;
            while (axis >= 0 && ++k[axis] > q) k[axis--] = -q;
            if (axis < 0) break;
        }
    }

    std::vector<Real> alpha_r(p);
    for (int i = 0; i < p; ++i)
        alpha_r[i] = to_real(sys.delta[i].value, bits) + to_real(sys.delta[i].tail_bound, bits) / 2;

    // mean of the right-hand side and its projection onto ker(I-B)^t
    std::vector<Real> beta(f, Real(0));
    for (const auto& t : sys.fiber_series.terms) {
        bool zero = std::all_of(t.freq.begin(), t.freq.end(), [](const Int& v) { return v == 0; });
        if (zero)
            for (int i = 0; i < f; ++i) beta[i] += t.coeff[i].re;
    }
    RatMatrix imb(f, f);
    for (int i = 0; i < f; ++i)
        for (int j = 0; j < f; ++j) imb(i, j) = Rat((i == j ? 1 : 0) - sys.b(i, j));
    RatMatrix kerb = kernel_basis(imb.transpose());
    out.beta1_projector = RatMatrix(f, f);
    if (kerb.cols() > 0) {
        RatMatrix gram = kerb.transpose() * kerb;
        out.beta1_projector = kerb * inverse(gram) * kerb.transpose();
    }
    out.beta1.assign(f, Real(0));
    for (int i = 0; i < f; ++i)
        for (int j = 0; j < f; ++j)
            out.beta1[i] += to_real(out.beta1_projector(i, j), bits) * beta[j];

    // (I - B) g0 = beta - beta1: rational elimination, numeric right-hand side
    std::vector<CNum> g0(f, CNum(Real(0), Real(0)));
    {
        RatMatrix a = imb;
        std::vector<Real> rhs(f);
        for (int i = 0; i < f; ++i) rhs[i] = beta[i] - out.beta1[i];
        std::vector<int> pivot_col;
        int r = 0;
        for (int c = 0; c < f && r < f; ++c) {
            int piv = -1;
            for (int i = r; i < f; ++i)
                if (a(i, c) != 0) { piv = i; break; }
            if (piv < 0) continue;
            if (piv != r) {
                for (int j = 0; j < f; ++j) std::swap(a(r, j), a(piv, j));
                std::swap(rhs[r], rhs[piv]);
            }
            Rat pv = a(r, c);
            for (int j = 0; j < f; ++j) a(r, j) /= pv;
            rhs[r] /= to_real(pv, bits);
            for (int i = 0; i < f; ++i) {
                if (i == r || a(i, c) == 0) continue;
                Rat fc = a(i, c);
                for (int j = 0; j < f; ++j) a(i, j) -= fc * a(r, j);
                rhs[i] -= to_real(fc, bits) * rhs[r];
            }
            pivot_col.push_back(c);
            ++r;
        }
        for (int i = r; i < f; ++i)
            if (abs(rhs[i]) > pow(Real(2), -int(bits) / 2))
                throw SingularDivisor("mean equation is inconsistent beyond rounding");
        for (int i = 0; i < r; ++i) g0[pivot_col[i]] = CNum(rhs[i], Real(0));
    }

    // resolvent solve per retained nonzero frequency
    out.g.dim_domain = p;
    out.g.dim_range = f;
    out.g.prec_bits = bits;
    out.g.terms.push_back({std::vector<Int>(p, 0), g0});
    RatMatrix b_rat = sys.b.cast<Rat>();
    for (const auto& t : sys.fiber_series.terms) {
        bool zero = std::all_of(t.freq.begin(), t.freq.end(), [](const Int& v) { return v == 0; });
        if (zero) continue;
        Real dot(0);
        for (int i = 0; i < p; ++i) dot += to_real(Rat(t.freq[i]), bits) * alpha_r[i];
        CNum e = exp2pii(dot - floor(dot), bits);
        Real min_pivot;
        std::vector<CNum> g = cnum_solve(e, b_rat, t.coeff, bits, min_pivot);
        if (min_pivot < pow(Real(2), -int(bits) + 64)) {
            PrecisionGuard retry(2 * bits);
            CNum e2 = exp2pii(dot - floor(dot), 2 * bits);
            g = cnum_solve(e2, b_rat, t.coeff, 2 * bits, min_pivot);
            if (min_pivot < pow(Real(2), -2 * int(bits) + 64))
                throw SingularDivisor("small divisor within enclosure of an eigenvalue");
        }
        out.g.terms.push_back({t.freq, std::move(g)});
    }

    // conjugacy defect: sup | beta1 + G(x + alpha) - B G(x) - F(x) |
    out.grid = grid;
    Real worst(0);
    long npts = 1;
    for (int i = 0; i < p; ++i) npts *= grid;
    std::vector<Real> x(p), xa(p);
    for (long idx = 0; idx < npts; ++idx) {
        long rem = idx;
        for (int a2 = p - 1; a2 >= 0; --a2) {
            x[a2] = to_real(Rat(rem % grid, grid), bits);
            rem /= grid;
        }
        for (int i = 0; i < p; ++i) {
            xa[i] = x[i] + alpha_r[i];
            if (xa[i] >= 1) xa[i] -= 1;
        }
        auto gx = evaluate(out.g, x, bits);
        auto gxa = evaluate(out.g, xa, bits);
        auto fx = evaluate(sys.fiber_series, x, bits);
        for (int i = 0; i < f; ++i) {
            Real acc = out.beta1[i] + gxa.value[i] - fx.value[i];
            for (int j = 0; j < f; ++j) acc -= to_real(b_rat(i, j), bits) * gx.value[j];
            if (abs(acc) > worst) worst = abs(acc);
        }
    }
    out.residual = worst;
    return out;
}

}  // namespace torusmin
