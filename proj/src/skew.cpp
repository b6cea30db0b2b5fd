#include "torusmin/skew.hpp"

#include <random>

#include "torusmin/exact.hpp"
#include "torusmin/lattice.hpp"

namespace torusmin {

std::string to_string(CaseTag t) {
    switch (t) {
        case CaseTag::AffineUnipotent: return "affine-unipotent";
        case CaseTag::Order2FiberN2: return "order2-fiber-n2";
        case CaseTag::PeriodicFiberN3: return "periodic-fiber-n3";
        case CaseTag::MinusIdentityN3: return "minus-identity-fiber-n3";
        case CaseTag::NestedN3: return "nested-order2-n3";
        case CaseTag::Order2AffineBaseN3: return "order2-fiber-affine-base-n3";
        case CaseTag::SplitFiberN4: return "split-fiber-n4";
        case CaseTag::RegroupedTowerN4: return "regrouped-tower-n4";
        case CaseTag::PeriodicFiberN4: return "periodic-fiber-n4";
        case CaseTag::NestedN4: return "nested-order2-n4";
        case CaseTag::Order2AffineBaseN4: return "order2-fiber-affine-base-n4";
    }
    return "?";
}

IntMatrix SkewProductSystem::linear_part() const {
    IntMatrix l(n, n);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) l(i, j) = a(i, j);
    int f = n - p;
    for (int i = 0; i < f; ++i) {
        for (int j = 0; j < p; ++j) l(p + i, j) = c(i, j);
        for (int j = 0; j < f; ++j) l(p + i, p + j) = b(i, j);
    }
    return l;
}

namespace {

Real enc_mid(const RatEnclosure& e, unsigned bits) {
    return to_real(e.value + e.tail_bound / 2, bits);
}

Real real_mod1(const Real& x) { return x - floor(x); }

std::vector<Real> int_matvec(const IntMatrix& m, const std::vector<Real>& v) {
    std::vector<Real> r(m.rows(), Real(0));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0) r[i] += Real(m(i, j)) * v[j];
    return r;
}

// Solve m x = v over Q; m must have full column rank and the system must be
// consistent.
std::vector<Rat> solve_exact(const RatMatrix& m, const std::vector<Rat>& v) {
    int rows = m.rows(), cols = m.cols();
    RatMatrix a(rows, cols + 1);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) a(i, j) = m(i, j);
        a(i, cols) = v[i];
    }
    int r = 0;
    std::vector<int> pivot_row(cols, -1);
    for (int c = 0; c < cols && r < rows; ++c) {
        int p = -1;
        for (int i = r; i < rows; ++i)
            if (a(i, c) != 0) { p = i; break; }
        if (p < 0) continue;
        if (p != r)
            for (int j = 0; j <= cols; ++j) std::swap(a(r, j), a(p, j));
        Rat piv = a(r, c);
        for (int j = 0; j <= cols; ++j) a(r, j) /= piv;
        for (int i = 0; i < rows; ++i) {
            if (i == r || a(i, c) == 0) continue;
            Rat f = a(i, c);
            for (int j = 0; j <= cols; ++j) a(i, j) -= f * a(r, j);
        }
        pivot_row[c] = r;
        ++r;
    }
    for (int i = r; i < rows; ++i)
        if (a(i, cols) != 0) throw std::domain_error("solve_exact: inconsistent system");
    std::vector<Rat> x(cols, Rat(0));
    for (int c = 0; c < cols; ++c) {
        if (pivot_row[c] < 0) throw std::domain_error("solve_exact: rank-deficient system");
        x[c] = a(pivot_row[c], cols);
    }
    return x;
}

// Saturated integer basis of ker(m) over Q, as column vectors.
std::vector<std::vector<Int>> integer_kernel(const IntMatrix& m) {
    RatMatrix ker = kernel_basis(m.cast<Rat>());
    std::vector<std::vector<Int>> vecs;
    for (int j = 0; j < ker.cols(); ++j) {
        Int lcm_den = 1;
        for (int i = 0; i < ker.rows(); ++i)
            lcm_den = boost::multiprecision::lcm(lcm_den, den(ker(i, j)));
        std::vector<Int> v(ker.rows());
        for (int i = 0; i < ker.rows(); ++i) v[i] = num(ker(i, j) * lcm_den);
        vecs.push_back(std::move(v));
    }
    return saturate(vecs, m.cols());
}

// Unimodular P such that P^{-1} N P is strictly lower triangular, built from
// a basis adapted to the flag ker N <= ker N^2 <= ... (deepest level placed
// first, then reversed).
IntMatrix nilpotent_triangularize(const IntMatrix& n_mat) {
    int p = n_mat.rows();
    IntMatrix id = IntMatrix::identity(p);
    if (p == 0 || n_mat.is_zero()) return id;

    std::vector<std::vector<Int>> flag;  // basis of the current flag level
    IntMatrix power = id;
    while (static_cast<int>(flag.size()) < p) {
        power = power * n_mat;
        std::vector<std::vector<Int>> level = integer_kernel(power);
        if (power.is_zero()) {
            level.clear();
            for (int j = 0; j < p; ++j) level.push_back(id.col(j));
        }
        if (flag.empty()) {
            flag = std::move(level);
            continue;
        }
        int r = static_cast<int>(level.size());
        RatMatrix basis(p, r);
        for (int j = 0; j < r; ++j)
            for (int i = 0; i < p; ++i) basis(i, j) = Rat(level[j][i]);
        // coordinates of the previous flag level in this level's basis
        std::vector<std::vector<Int>> coords;
        for (const auto& fv : flag) {
            std::vector<Rat> rhs(p);
            for (int i = 0; i < p; ++i) rhs[i] = Rat(fv[i]);
            std::vector<Rat> x = solve_exact(basis, rhs);
            std::vector<Int> xi(r);
            for (int i = 0; i < r; ++i) {
                if (den(x[i]) != 1)
                    throw std::logic_error("nilpotent_triangularize: non-integral flag coordinates");
                xi[i] = num(x[i]);
            }
            coords.push_back(std::move(xi));
        }
        IntMatrix t = hnf_complete(coords, r);
        std::vector<std::vector<Int>> extended;
        for (int j = 0; j < r; ++j) {
            std::vector<Int> v(p, Int(0));
            for (int i = 0; i < p; ++i)
                for (int k = 0; k < r; ++k) v[i] += level[k][i] * t(k, j);
            extended.push_back(std::move(v));
        }
        flag = std::move(extended);
    }

    IntMatrix result(p, p);
    for (int j = 0; j < p; ++j)
        for (int i = 0; i < p; ++i) result(i, j) = flag[p - 1 - j][i];
    if (!is_unimodular(result))
        throw std::logic_error("nilpotent_triangularize: basis is not unimodular");
    IntMatrix check = unimodular_inverse(result) * n_mat * result;
    for (int i = 0; i < p; ++i)
        for (int j = i; j < p; ++j)
            if (check(i, j) != 0)
                throw std::logic_error("nilpotent_triangularize: result not strictly lower");
    return result;
}

// Embed a one-variable series into dim_domain coordinates (frequency on the
// first) and dim_range components starting at comp_offset.
void embed_series(SparseFourierSeries& target, const SparseFourierSeries& src,
                  int comp_offset) {
    for (const auto& t : src.terms) {
        std::vector<Int> k(target.dim_domain, Int(0));
        k[0] = t.freq[0];
        std::vector<CNum> c(target.dim_range, CNum(Real(0)));
        for (int i = 0; i < src.dim_range; ++i) c[comp_offset + i] = t.coeff[i];
        target.terms.push_back({std::move(k), std::move(c)});
    }
    target.tail_bound += src.tail_bound;
}

RatPoly cyclotomic_poly_m(int m) {
    switch (m) {
        case 3: return RatPoly({Rat(1), Rat(1), Rat(1)});
        case 4: return RatPoly({Rat(1), Rat(0), Rat(1)});
        case 6: return RatPoly({Rat(1), Rat(-1), Rat(1)});
    }
    throw std::logic_error("cyclotomic_poly_m: unsupported order");
}

// delta entries for a triangular unipotent base: coordinate 1 rotates by
// alpha; an uncoupled lower row needs a fresh irrational, a coupled one does
// not (the coupling itself drives equidistribution).
std::vector<RatEnclosure> base_translation(const IntMatrix& a_t,
                                           const RatEnclosure& alpha, unsigned bits) {
    int p = a_t.rows();
    std::vector<RatEnclosure> d(p, RatEnclosure{Rat(0), Rat(0)});
    if (p == 0) return d;
    d[0] = alpha;
    std::vector<RatEnclosure> pool = {sqrt2_frac_enclosure(bits), sqrt3_frac_enclosure(bits),
                                      golden_mean_enclosure(bits)};
    size_t next = 0;
    for (int i = 1; i < p; ++i) {
        bool coupled = false;
        for (int j = 0; j < i; ++j)
            if (a_t(i, j) != 0) { coupled = true; break; }
        if (!coupled) {
            if (next >= pool.size())
                throw std::logic_error("base_translation: irrational pool exhausted");
            d[i] = pool[next++];
        }
    }
    return d;
}

}  // namespace

Point step(const SkewProductSystem& sys, const Point& z, unsigned bits) {
    if (static_cast<int>(z.size()) != sys.n)
        throw std::invalid_argument("step: point dimension mismatch");
    PrecisionGuard g(bits);
    int p = sys.p, f = sys.n - p;
    std::vector<Real> base(z.begin(), z.begin() + p);
    std::vector<Real> fiber(z.begin() + p, z.end());

    std::vector<Real> nb = int_matvec(sys.a, base);
    for (int i = 0; i < p; ++i) nb[i] += enc_mid(sys.delta[i], bits);
    if (sys.base_series) {
        EvalResult e = evaluate(*sys.base_series, std::vector<Real>{z[0]}, bits);
        for (int i = 0; i < p; ++i) nb[i] += e.value[i];
    }

    std::vector<Real> nf = int_matvec(sys.b, fiber);
    std::vector<Real> cx = int_matvec(sys.c, base);
    for (int i = 0; i < f; ++i) nf[i] += cx[i] + enc_mid(sys.delta[p + i], bits);
    if (f > 0 && !sys.fiber_series.terms.empty()) {
        EvalResult e = evaluate(sys.fiber_series, base, bits);
        for (int i = 0; i < f; ++i) nf[i] += e.value[i];
    }

    Point out(sys.n);
    for (int i = 0; i < p; ++i) out[i] = real_mod1(nb[i]);
    for (int i = 0; i < f; ++i) out[p + i] = real_mod1(nf[i]);
    return out;
}

Point iterate_steps(const SkewProductSystem& sys, int m, const Point& z, unsigned bits) {
    Point cur = z;
    for (int i = 0; i < m; ++i) cur = step(sys, cur, bits);
    return cur;
}

IterateFormula iterate_formula(const SkewProductSystem& sys, int m, unsigned bits) {
    if (m < 0) throw std::invalid_argument("iterate_formula: negative power");
    PrecisionGuard g(bits);
    int p = sys.p, f = sys.n - p;
    IterateFormula out;
    out.m = m;
    out.a_m = sys.a.pow(m);
    out.b_m = sys.b.pow(m);

    std::vector<Real> db(p), df(f);
    for (int i = 0; i < p; ++i) db[i] = enc_mid(sys.delta[i], bits);
    for (int i = 0; i < f; ++i) df[i] = enc_mid(sys.delta[p + i], bits);

    // C_{j+1} = B C_j + C A^j, alpha accumulates B^{m-j} (C S_{j-1} db + df)
    IntMatrix c_j(f, p);           // C_0 = 0
    IntMatrix s_j(p, p);           // S_0 = 0
    IntMatrix a_pow = IntMatrix::identity(p);
    std::vector<Real> acc(f, Real(0));
    for (int j = 1; j <= m; ++j) {
        // contribution of step j: B^{m-j} (C S_{j-1} db + df)
        std::vector<Real> inner = int_matvec(sys.c, int_matvec(s_j, db));
        for (int i = 0; i < f; ++i) inner[i] += df[i];
        std::vector<Real> shifted = int_matvec(sys.b.pow(m - j), inner);
        for (int i = 0; i < f; ++i) acc[i] += shifted[i];
        c_j = sys.b * c_j + sys.c * a_pow;
        s_j = s_j + a_pow;
        a_pow = a_pow * sys.a;
    }
    out.c_m = c_j;
    out.alpha_m = std::move(acc);
    out.base_shift = int_matvec(s_j, db);
    return out;
}

Point iterate_closed(const SkewProductSystem& sys, int m, const Point& z, unsigned bits) {
    if (!sys.base_is_affine())
        throw std::invalid_argument("iterate_closed: base is not affine");
    PrecisionGuard g(bits);
    int p = sys.p, f = sys.n - p;
    IterateFormula fm = iterate_formula(sys, m, bits);

    std::vector<Real> base(z.begin(), z.begin() + p);
    std::vector<Real> fiber(z.begin() + p, z.end());

    std::vector<Real> nb = int_matvec(fm.a_m, base);
    for (int i = 0; i < p; ++i) nb[i] += fm.base_shift[i];

    std::vector<Real> nf = int_matvec(fm.c_m, base);
    std::vector<Real> by = int_matvec(fm.b_m, fiber);
    for (int i = 0; i < f; ++i) nf[i] += by[i] + fm.alpha_m[i];

    // perturbation sum: B^{m-j} F(a^{j-1}(X)) along the affine base orbit
    if (f > 0 && !sys.fiber_series.terms.empty()) {
        std::vector<Real> db(p);
        for (int i = 0; i < p; ++i) db[i] = enc_mid(sys.delta[i], bits);
        std::vector<Real> orbit = base;
        for (int j = 1; j <= m; ++j) {
            EvalResult e = evaluate(sys.fiber_series, orbit, bits);
            std::vector<Real> shifted = int_matvec(sys.b.pow(m - j), e.value);
            for (int i = 0; i < f; ++i) nf[i] += shifted[i];
            orbit = int_matvec(sys.a, orbit);
            for (int i = 0; i < p; ++i) orbit[i] = real_mod1(orbit[i] + db[i]);
        }
    }

    Point out(sys.n);
    for (int i = 0; i < p; ++i) out[i] = real_mod1(nb[i]);
    for (int i = 0; i < f; ++i) out[p + i] = real_mod1(nf[i]);
    return out;
}

std::vector<Rat> affine_skeleton_iterate(const SkewProductSystem& sys, int m,
                                         const std::vector<Rat>& z) {
    int p = sys.p, f = sys.n - p;
    std::vector<Rat> db(p), df(f);
    for (int i = 0; i < p; ++i) db[i] = sys.delta[i].value;
    for (int i = 0; i < f; ++i) df[i] = sys.delta[p + i].value;

    RatMatrix a = sys.a.cast<Rat>(), b = sys.b.cast<Rat>(), c = sys.c.cast<Rat>();
    std::vector<Rat> base(z.begin(), z.begin() + p);
    std::vector<Rat> fiber(z.begin() + p, z.end());
    for (int j = 0; j < m; ++j) {
        std::vector<Rat> nb = a * base;
        for (int i = 0; i < p; ++i) nb[i] = mod1(nb[i] + db[i]);
        std::vector<Rat> nf = b * fiber;
        std::vector<Rat> cx = c * base;
        for (int i = 0; i < f; ++i) nf[i] = mod1(nf[i] + cx[i] + df[i]);
        base = std::move(nb);
        fiber = std::move(nf);
    }
    std::vector<Rat> out;
    out.insert(out.end(), base.begin(), base.end());
    out.insert(out.end(), fiber.begin(), fiber.end());
    return out;
}

namespace {

SkewProductSystem assemble_common(int n, int p, IntMatrix a, IntMatrix b, IntMatrix c,
                                  LiouvilleDatum datum, unsigned bits) {
    SkewProductSystem sys;
    sys.n = n;
    sys.p = p;
    sys.a = std::move(a);
    sys.b = std::move(b);
    sys.c = std::move(c);
    sys.prec_bits = bits;
    sys.delta.assign(n, RatEnclosure{Rat(0), Rat(0)});
    auto base_d = base_translation(sys.a, datum.enclosure(), bits);
    for (int i = 0; i < p; ++i) sys.delta[i] = base_d[i];
    sys.datum = std::move(datum);
    sys.fiber_series.dim_domain = p;
    sys.fiber_series.dim_range = n - p;
    sys.fiber_series.prec_bits = bits;
    return sys;
}

}  // namespace

SkewProductSystem construct_minimal(const SpectralReport& report, const BlockForm& bf,
                                    unsigned truncation, unsigned bits) {
    if (report.verdict != Verdict::ConstructibleMinimal)
        throw NotConstructible("construct_minimal: verdict is " + to_string(report.verdict));
    int p = bf.p;
    int n = p + bf.b.rows();
    int f = n - p;
    unsigned terms = truncation + 2;  // K = J + 2

    // triangular form for the unipotent base block
    IntMatrix a_t = bf.a, c_adj = bf.c;
    if (p > 1) {
        IntMatrix n_part(p, p);
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) n_part(i, j) = bf.a(i, j) - (i == j ? 1 : 0);
        IntMatrix pmat = nilpotent_triangularize(n_part);
        a_t = unimodular_inverse(pmat) * bf.a * pmat;
        c_adj = bf.c * pmat;
    }

    if (f == 0) {
        LiouvilleDatum d = build_liouville({Rat(1, 2)}, terms);
        SkewProductSystem sys = assemble_common(n, p, a_t, IntMatrix(0, 0), IntMatrix(0, p),
                                                std::move(d), bits);
        sys.case_tag = CaseTag::AffineUnipotent;
        sys.m_power = 1;
        return sys;
    }

    if (f == 1) {
        if (bf.b(0, 0) != -1)
            throw std::logic_error("construct_minimal: 1x1 fiber block must be -1");
        LiouvilleDatum d = build_liouville({Rat(1, 2)}, terms);
        SynthesizedSeries s = synthesize_case(FourierCase::OrderTwoFiber, d, 0, truncation, {}, bits);
        SkewProductSystem sys = assemble_common(n, p, a_t, bf.b, c_adj, std::move(d), bits);
        sys.fiber_series.tail_bound = s.series.tail_bound;
        embed_series(sys.fiber_series, s.series, 0);
        sys.fiber_series.tail_bound = s.series.tail_bound;
        sys.case_tag = p == 1 ? CaseTag::Order2FiberN2 : (p == 2 ? CaseTag::Order2AffineBaseN3 : CaseTag::Order2AffineBaseN4);
        sys.m_power = 2;
        sys.plan.probes.push_back({WitnessFamily::ScalarShift, 0,
                                   "shifted-rotation coboundary values along the k_j sequence"});
        return sys;
    }

    if (f == 2) {
        IntMatrix b2 = bf.b;
        IntMatrix id2 = IntMatrix::identity(2);
        bool minus_id = (b2 + id2).is_zero();
        int period = 0;
        for (int m : {3, 4, 6})
            if (b2.pow(m) == id2 && !minus_id) { period = m; break; }

        if (minus_id || period != 0) {
            Rat target = minus_id ? Rat(1, 2) : Rat(1, period);
            LiouvilleDatum d = build_liouville({target}, terms);
            SynthesisExtras extras;
            SynthesizedSeries s;
            if (minus_id) {
                extras.irrational_a = RatEnclosure{Rat(1), Rat(0)};
                RatEnclosure r2 = sqrt2_frac_enclosure(bits);
                extras.irrational_b = RatEnclosure{r2.value + 1, r2.tail_bound};
                s = synthesize_case(FourierCase::IrrationalPair, d, 0, truncation, extras, bits);
            } else {
                extras.period = period;
                extras.b = b2;
                s = synthesize_case(FourierCase::PeriodicFiber, d, 0, truncation, extras, bits);
            }
            SkewProductSystem sys = assemble_common(n, p, a_t, b2, c_adj, std::move(d), bits);
            embed_series(sys.fiber_series, s.series, 0);
            sys.fiber_series.tail_bound = s.series.tail_bound;
            sys.eigenvector = s.eigenvector;
            if (minus_id) {
                sys.pair_a = extras.irrational_a;
                sys.pair_b = extras.irrational_b;
            }
            sys.case_tag = p == 1 ? (minus_id ? CaseTag::MinusIdentityN3 : CaseTag::PeriodicFiberN3)
                                  : CaseTag::PeriodicFiberN4;
            sys.m_power = minus_id ? 2 : period;
            sys.plan.probes.push_back({WitnessFamily::Resolvent, 0,
                                       "resolvent values of the fiber block along the k_j sequence"});
            return sys;
        }

        // order-2 non-semisimple block: normalize to [[-1,0],[s,-1]], s != 0
        IntMatrix npart = b2 + id2;
        if (!(npart * npart).is_zero())
            throw UnsupportedBranch("construct_minimal: unrecognized 2x2 fiber block");
        IntMatrix w = nilpotent_triangularize(npart);
        IntMatrix b_norm = unimodular_inverse(w) * b2 * w;
        IntMatrix c_norm = unimodular_inverse(w) * c_adj;
        if (b_norm(0, 0) != -1 || b_norm(0, 1) != 0 || b_norm(1, 1) != -1 || b_norm(1, 0) == 0)
            throw std::logic_error("construct_minimal: order-2 normalization failed");

        LiouvilleDatum d = build_liouville({Rat(1, 2)}, terms);
        SynthesizedSeries s = synthesize_case(FourierCase::OrderTwoFiber, d, 0, truncation, {}, bits);
        SkewProductSystem sys = assemble_common(n, p, a_t, b_norm, c_norm, d, bits);
        embed_series(sys.fiber_series, s.series, 0);  // second fiber component unperturbed
        sys.fiber_series.tail_bound = s.series.tail_bound;
        sys.case_tag = p == 1 ? CaseTag::NestedN3 : CaseTag::NestedN4;
        sys.m_power = 2;
        sys.plan.probes.push_back({WitnessFamily::NonPeriodicFiber, 0,
                                   "linear fiber term survives in the iterated right-hand side"});

        // the sub-system on the first p+1 coordinates is itself minimal
        auto sub = std::make_shared<SkewProductSystem>();
        IntMatrix sub_b(1, 1), sub_c(1, p);
        sub_b(0, 0) = -1;
        for (int j = 0; j < p; ++j) sub_c(0, j) = c_norm(0, j);
        *sub = assemble_common(p + 1, p, a_t, sub_b, sub_c, std::move(d), bits);
        embed_series(sub->fiber_series, s.series, 0);
        sub->fiber_series.tail_bound = s.series.tail_bound;
        sub->case_tag = p == 1 ? CaseTag::Order2FiberN2 : CaseTag::Order2AffineBaseN3;
        sub->m_power = 2;
        sub->plan.probes.push_back({WitnessFamily::ScalarShift, 0,
                                    "shifted-rotation coboundary values along the k_j sequence"});
        sys.nested = std::move(sub);
        return sys;
    }

    // f == 3, p == 1
    IntMatrix b3 = bf.b;
    IntMatrix id3 = IntMatrix::identity(3);
    IntMatrix npart = b3 + id3;
    bool order_two = (npart * npart * npart).is_zero();

    if (order_two) {
        // regroup 1+3 as 2+2: the -1-direction joins the base, which becomes
        // the two-dimensional minimal skew product; the remaining pair keeps
        // the coupling s from the triangularized block.
        IntMatrix w = nilpotent_triangularize(npart);
        IntMatrix b_norm = unimodular_inverse(w) * b3 * w;
        IntMatrix c_norm = unimodular_inverse(w) * c_adj;  // 3 x 1
        LiouvilleDatum d = build_liouville({Rat(1, 2)}, terms);

        SynthesizedSeries s1 = synthesize_case(FourierCase::OrderTwoBase, d, 0, truncation, {}, bits);
        SynthesisExtras extras;
        RatEnclosure r2 = sqrt2_frac_enclosure(bits), r3 = sqrt3_frac_enclosure(bits);
        extras.irrational_a = RatEnclosure{r2.value + 1, r2.tail_bound};
        extras.irrational_b = RatEnclosure{r3.value + 1, r3.tail_bound};
        SynthesizedSeries s2 = synthesize_case(FourierCase::IrrationalPair, d, 0, truncation, extras, bits);

        IntMatrix a_new(2, 2), b_new(2, 2), c_new(2, 2);
        a_new(0, 0) = 1;
        a_new(1, 0) = c_norm(0, 0);
        a_new(1, 1) = -1;
        b_new(0, 0) = -1;
        b_new(1, 0) = b_norm(2, 1);
        b_new(1, 1) = -1;
        c_new(0, 0) = c_norm(1, 0);
        c_new(0, 1) = b_norm(1, 0);
        c_new(1, 0) = c_norm(2, 0);
        c_new(1, 1) = b_norm(2, 0);

        SkewProductSystem sys = assemble_common(4, 2, a_new, b_new, c_new, std::move(d), bits);
        sys.delta[1] = RatEnclosure{Rat(0), Rat(0)};  // base is series-driven, not affine
        SparseFourierSeries base_s;
        base_s.dim_domain = 1;
        base_s.dim_range = 2;
        base_s.prec_bits = bits;
        embed_series(base_s, s1.series, 1);
        base_s.tail_bound = s1.series.tail_bound;
        sys.base_series = std::move(base_s);
        embed_series(sys.fiber_series, s2.series, 0);
        sys.fiber_series.tail_bound = s2.series.tail_bound;
        sys.pair_a = extras.irrational_a;
        sys.pair_b = extras.irrational_b;
        sys.case_tag = CaseTag::RegroupedTowerN4;
        sys.m_power = 2;
        sys.plan.probes.push_back({WitnessFamily::FiberIntegrated, 0,
                                   "base-averaged coboundary values along the k_j sequence"});
        return sys;
    }

    // simple -1 eigenvalue plus a periodic pair
    RatPoly chi = char_poly(b3);
    int period = 0;
    for (int m : {3, 4, 6})
        if (cyclotomic_poly_m(m).divides(chi)) { period = m; break; }
    if (period == 0)
        throw UnsupportedBranch("construct_minimal: unrecognized 3x3 fiber block");
    auto gamma2 = invariant_sublattice(b3, cyclotomic_poly_m(period));
    if (gamma2.size() != 2)
        throw std::logic_error("construct_minimal: periodic sublattice has wrong rank");
    IntMatrix lead = hnf_complete(gamma2, 3);
    IntMatrix w(3, 3);  // completion vector first, invariant pair trailing
    for (int i = 0; i < 3; ++i) {
        w(i, 0) = lead(i, 2);
        w(i, 1) = lead(i, 0);
        w(i, 2) = lead(i, 1);
    }
    IntMatrix b_norm = unimodular_inverse(w) * b3 * w;
    IntMatrix c_norm = unimodular_inverse(w) * c_adj;
    if (b_norm(0, 0) != -1 || b_norm(0, 1) != 0 || b_norm(0, 2) != 0)
        throw std::logic_error("construct_minimal: 3x3 splitting failed");
    IntMatrix b0 = b_norm.block(1, 1, 2, 2);
    if (!(b0.pow(period) == IntMatrix::identity(2)))
        throw std::logic_error("construct_minimal: trailing pair is not periodic");

    LiouvilleDatum d = build_liouville({Rat(1, 2), Rat(1, period)}, terms);
    SynthesizedSeries s1 = synthesize_case(FourierCase::OrderTwoBase, d, 0, truncation, {}, bits);
    SynthesisExtras extras;
    extras.period = period;
    extras.b = b0;
    SynthesizedSeries s2 = synthesize_case(FourierCase::PeriodicFiber, d, 1, truncation, extras, bits);

    SkewProductSystem sys = assemble_common(4, 1, a_t, b_norm, c_norm, std::move(d), bits);
    embed_series(sys.fiber_series, s1.series, 0);
    embed_series(sys.fiber_series, s2.series, 1);
    sys.fiber_series.tail_bound = s1.series.tail_bound + s2.series.tail_bound;
    sys.eigenvector = s2.eigenvector;
    sys.case_tag = CaseTag::SplitFiberN4;
    sys.m_power = 2 * period / (period % 2 == 0 ? 2 : 1);  // lcm(2, period)
    sys.plan.probes.push_back({WitnessFamily::Resolvent, 0,
                               "resolvent values along the half-target sequence"});
    sys.plan.probes.push_back({WitnessFamily::Resolvent, 1,
                               "resolvent values along the periodic-target sequence"});
    return sys;
}

Real h_action_check(const SkewProductSystem& sys, int m_power,
                    const std::vector<std::vector<Rat>>& h_generators, int samples,
                    unsigned bits, unsigned seed) {
    PrecisionGuard g(bits);
    int p = sys.p, f = sys.n - p;
    std::mt19937_64 rng(seed);
    Real two64 = pow(Real(2), 64);
    auto torus_dist = [](const Real& x, const Real& y) {
        Real d = x - y;
        d -= floor(d);
        if (d > Real(1) / 2) d = 1 - d;
        return d;
    };
    Real worst(0);
    for (int s = 0; s < samples; ++s) {
        Point z(sys.n);
        for (int i = 0; i < sys.n; ++i) z[i] = Real(Int(rng())) / two64;
        Point psi_z = iterate_steps(sys, m_power, z, bits);
        for (const auto& h : h_generators) {
            if (static_cast<int>(h.size()) != f)
                throw std::invalid_argument("h_action_check: generator dimension mismatch");
            Point hz = z;
            for (int i = 0; i < f; ++i)
                hz[p + i] = real_mod1(hz[p + i] + to_real(h[i], bits));
            Point psi_hz = iterate_steps(sys, m_power, hz, bits);
            for (int i = 0; i < sys.n; ++i) {
                Real expect = i < p ? psi_z[i]
                                    : real_mod1(psi_z[i] + to_real(h[i - p], bits));
                Real dd = torus_dist(psi_hz[i], expect);
                if (dd > worst) worst = dd;
            }
        }
    }
    return worst;
}

}  // namespace torusmin
