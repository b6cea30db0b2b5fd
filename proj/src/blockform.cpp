#include "torusmin/blockform.hpp"

#include "torusmin/spectra.hpp"

namespace torusmin {

std::vector<std::vector<Int>> invariant_sublattice(const IntMatrix& l, const RatPoly& v) {
    RatPoly mp = min_poly(l);
    if (v.is_zero() || !v.monic().divides(mp))
        throw NotADivisor("invariant_sublattice: v does not divide the minimal polynomial");
    if (v.degree() < 1) return {};
    int n = l.rows();
    RatMatrix vl = v.eval(l.cast<Rat>());
    RatMatrix ker = kernel_basis(vl);
    std::vector<std::vector<Int>> vecs;
    for (int j = 0; j < ker.cols(); ++j) {
        Int common_den = 1;
        for (int i = 0; i < n; ++i)
            common_den = boost::multiprecision::lcm(common_den, den(ker(i, j)));
        std::vector<Int> w(n);
        for (int i = 0; i < n; ++i) {
            Rat scaled = ker(i, j) * Rat(common_den);
            w[i] = num(scaled);
        }
        vecs.push_back(std::move(w));
    }
    return saturate(vecs, n);
}

BlockForm block_form(const IntMatrix& l) {
    if (!is_unimodular(l)) throw NotUnimodular("block_form: |det| != 1");
    auto [qu, order] = quasi_unipotent_test(l);
    if (!qu) throw NotQuasiUnipotent("block_form: matrix is not quasi-unipotent");
    int n = l.rows();

    RatPoly mp = min_poly(l);
    RatPoly xm1({Rat(-1), Rat(1)});
    RatPoly v = mp;
    int e = 0;
    while (v.degree() >= 1 && v.eval(Rat(1)) == 0) {
        v = v / xm1;
        ++e;
    }
    if (e == 0) throw NoEigenvalueOne("block_form: 1 is not an eigenvalue");

    BlockForm bf;
    if (v.degree() < 1) {
        // unipotent: the whole space is the eigenvalue-1 block
        bf.u = IntMatrix::identity(n);
        bf.p = n;
        bf.a = l;
        bf.b = IntMatrix(0, 0);
        bf.c = IntMatrix(0, n);
        return bf;
    }

    std::vector<std::vector<Int>> gamma = invariant_sublattice(l, v);
    int k = static_cast<int>(gamma.size());
    int p = n - k;
    IntMatrix w0 = hnf_complete(gamma, n);
    // Put the invariant sublattice basis in the trailing coordinates.
    IntMatrix w(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < p; ++j) w(i, j) = w0(i, k + j);
        for (int j = 0; j < k; ++j) w(i, p + j) = w0(i, j);
    }
    IntMatrix u = unimodular_inverse(w);
    IntMatrix m = u * l * w;

    for (int i = 0; i < p; ++i)
        for (int j = p; j < n; ++j)
            if (m(i, j) != 0)
                throw std::logic_error("block_form: conjugate is not block lower triangular");

    bf.u = u;
    bf.p = p;
    bf.a = m.block(0, 0, p, p);
    bf.b = m.block(p, p, k, k);
    bf.c = m.block(p, 0, k, p);

    IntMatrix ai = bf.a - IntMatrix::identity(p);
    if (!ai.pow(p).is_zero())
        throw std::logic_error("block_form: top block is not unipotent");
    if (k > 0 && det(IntMatrix::identity(k) - bf.b) == 0)
        throw std::logic_error("block_form: bottom block has eigenvalue 1");
    return bf;
}

}  // namespace torusmin
