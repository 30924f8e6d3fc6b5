#pragma once

#include <stdexcept>
#include <vector>

#include "lbd/root_jet.hpp"

namespace lbd {

// Below this scale the CE terms carry no signal at all (a constant root's
// derivatives are pure rounding noise, making value/scale meaningless);
// honest nonzero derivatives keep the largest term far above it.
inline constexpr double kCeScaleFloor = 1e-30;

// CE value together with the magnitude of its largest summed term; "zero"
// always means |value|/scale below a relative threshold, since the raw
// terms are high-degree derivative products.
template <class R>
struct CeResult {
    Cplx<R> value;
    R scale;

    R relative() const { return scale > R(kCeScaleFloor) ? lbd::abs(value) / scale : R(0); }
};

namespace detail {

template <class R>
CeResult<R> sum_terms(const std::vector<Cplx<R>>& terms) {
    Cplx<R> v{};
    R scale(0);
    for (const auto& t : terms) {
        v += t;
        R m = lbd::abs(t);
        if (m > scale) scale = m;
    }
    return {v, scale};
}

template <class R>
std::vector<Cplx<R>> derivatives(const Jet<R>& jet, int upto) {
    if (jet.order() < upto) throw std::invalid_argument("jet order insufficient for this CE");
    std::vector<Cplx<R>> d(static_cast<size_t>(upto) + 1);
    for (int k = 0; k <= upto; ++k) d[static_cast<size_t>(k)] = jet.derivative(k);
    return d;
}

template <class R>
Cplx<R> cpow(const Cplx<R>& z, int e) {
    Cplx<R> r(R(1));
    for (int i = 0; i < e; ++i) r *= z;
    return r;
}

}  // namespace detail

// Expanded 2x3 CE for beta roots; eight terms, each of weight 12 under
// b^(k) -> lambda^k b^(k).
template <class R>
CeResult<R> ce23_beta(const Jet<R>& jet) {
    using detail::cpow;
    auto d = detail::derivatives(jet, 5);
    std::vector<Cplx<R>> t = {
        Cplx<R>(R(-135)) * cpow(d[2], 6),
        Cplx<R>(R(80)) * cpow(d[1], 3) * cpow(d[3], 3),
        Cplx<R>(R(15)) * cpow(d[1], 4) * cpow(d[4], 2),
        Cplx<R>(R(-60)) * cpow(d[1], 3) * d[2] * d[3] * d[4],
        Cplx<R>(R(-12)) * cpow(d[1], 4) * d[3] * d[5],
        Cplx<R>(R(18)) * cpow(d[1], 3) * cpow(d[2], 2) * d[5],
        Cplx<R>(R(270)) * d[1] * cpow(d[2], 4) * d[3],
        Cplx<R>(R(-180)) * cpow(d[1], 2) * cpow(d[2], 2) * cpow(d[3], 2),
    };
    return detail::sum_terms(t);
}

// Expanded 2x3 CE for gamma roots; five terms of weight 9.
template <class R>
CeResult<R> ce23_gamma(const Jet<R>& jet) {
    using detail::cpow;
    auto d = detail::derivatives(jet, 5);
    std::vector<Cplx<R>> t = {
        Cplx<R>(R(-40)) * cpow(d[3], 3),
        Cplx<R>(R(60)) * d[2] * d[3] * d[4],
        Cplx<R>(R(-15)) * d[1] * cpow(d[4], 2),
        Cplx<R>(R(-18)) * cpow(d[2], 2) * d[5],
        Cplx<R>(R(12)) * d[1] * d[3] * d[5],
    };
    return detail::sum_terms(t);
}

template <class R>
struct GeneratorMatrix {
    int m = 0;
    int n = 0;
    std::vector<Cplx<R>> entries;  // row-major, mn x mn

    Cplx<R> at(int row, int col) const { return entries[static_cast<size_t>(row) * (m * n) + col]; }
};

// Rows k = 0..ab-1: k-th derivative (k! * jet coefficient) of each monomial
// anchor^p root^q, columns (p,q) lexicographic with p major. The anchor jet
// describes the path the anchor variable follows; tests drive it along the
// angular path as well.
template <class R>
GeneratorMatrix<R> generator_matrix_from_jets(int a, int b, const Jet<R>& anchor_jet,
                                              const Jet<R>& root_jet) {
    const int dim = a * b;
    if (anchor_jet.order() < dim - 1 || root_jet.order() < dim - 1)
        throw std::invalid_argument("jet order insufficient for generator matrix");
    std::vector<Jet<R>> apow, rpow;
    apow.reserve(static_cast<size_t>(a));
    rpow.reserve(static_cast<size_t>(b));
    for (int p = 0; p < a; ++p) apow.push_back(jet_pow(anchor_jet, p));
    for (int q = 0; q < b; ++q) rpow.push_back(jet_pow(root_jet, q));

    std::vector<Jet<R>> cols;
    cols.reserve(static_cast<size_t>(dim));
    for (int p = 0; p < a; ++p)
        for (int q = 0; q < b; ++q)
            cols.push_back(apow[static_cast<size_t>(p)] * rpow[static_cast<size_t>(q)]);

    GeneratorMatrix<R> gm;
    gm.m = a;
    gm.n = b;
    gm.entries.resize(static_cast<size_t>(dim) * dim);
    R kfact(1);
    for (int k = 0; k < dim; ++k) {
        if (k > 1) kfact *= R(k);
        for (int col = 0; col < dim; ++col)
            gm.entries[static_cast<size_t>(k) * dim + col] = cols[static_cast<size_t>(col)][k] * kfact;
    }
    return gm;
}

// Generator matrix for an m x n blur at a beta-type root: monomials u^x b^y,
// differentiated 0..mn-1 times along the radial path u(rho0+t) = (rho0+t)e^{-i phi}.
template <class R>
GeneratorMatrix<R> generator_matrix(int m, int n, const CirclePoint<R>& anchor,
                                    const Jet<R>& jet) {
    const int K = jet.order();
    Jet<R> ujet(K);
    ujet[0] = anchor.value();
    if (K >= 1) ujet[1] = lbd::polar(R(1), -anchor.phi);
    return generator_matrix_from_jets(m, n, ujet, jet);
}

// Determinant by LU with partial pivoting; the matrices are small (mn x mn).
template <class R>
Cplx<R> determinant(const GeneratorMatrix<R>& gm) {
    const int dim = gm.m * gm.n;
    std::vector<Cplx<R>> a = gm.entries;
    Cplx<R> det(R(1));
    for (int col = 0; col < dim; ++col) {
        int piv = col;
        R best = lbd::abs(a[static_cast<size_t>(col) * dim + col]);
        for (int r = col + 1; r < dim; ++r) {
            R v = lbd::abs(a[static_cast<size_t>(r) * dim + col]);
            if (v > best) { best = v; piv = r; }
        }
        if (best == R(0)) return Cplx<R>{};
        if (piv != col) {
            for (int c = 0; c < dim; ++c)
                std::swap(a[static_cast<size_t>(piv) * dim + c], a[static_cast<size_t>(col) * dim + c]);
            det = -det;
        }
        Cplx<R> p = a[static_cast<size_t>(col) * dim + col];
        det *= p;
        for (int r = col + 1; r < dim; ++r) {
            Cplx<R> f = a[static_cast<size_t>(r) * dim + col] / p;
            if (f == Cplx<R>{}) continue;
            for (int c = col; c < dim; ++c)
                a[static_cast<size_t>(r) * dim + c] -= f * a[static_cast<size_t>(col) * dim + c];
        }
    }
    return det;
}

// Hadamard bound (product of row norms); a cheap upper bound on |det|.
template <class R>
R hadamard_bound(const GeneratorMatrix<R>& gm) {
    using std::sqrt;
    const int dim = gm.m * gm.n;
    R prod(1);
    for (int r = 0; r < dim; ++r) {
        R s(0);
        for (int c = 0; c < dim; ++c) s += lbd::norm(gm.at(r, c));
        prod *= sqrt(s);
    }
    return prod;
}

namespace detail {

template <class R>
void max_perm_dfs(const std::vector<R>& mag, const std::vector<R>& row_max, int dim, int row,
                  unsigned used, const R& acc, R& best) {
    if (row == dim) {
        if (acc > best) best = acc;
        return;
    }
    // bound: finishing with every remaining row at its max cannot beat best
    R bound = acc;
    for (int r = row; r < dim; ++r) bound *= row_max[static_cast<size_t>(r)];
    if (!(bound > best)) return;
    for (int c = 0; c < dim; ++c) {
        if (used & (1u << c)) continue;
        R v = mag[static_cast<size_t>(row) * dim + c];
        if (v == R(0)) continue;
        max_perm_dfs(mag, row_max, dim, row + 1, used | (1u << c), acc * v, best);
    }
}

// Largest |term| of the determinant's permutation expansion; the determinant
// analog of "max absolute value of the summed terms". Falls back to the
// Hadamard bound for dimensions where enumeration would explode.
template <class R>
R max_permutation_product(const GeneratorMatrix<R>& gm) {
    const int dim = gm.m * gm.n;
    if (dim > 10) return hadamard_bound(gm);
    std::vector<R> mag(static_cast<size_t>(dim) * dim);
    std::vector<R> row_max(static_cast<size_t>(dim), R(0));
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) {
            R v = lbd::abs(gm.at(r, c));
            mag[static_cast<size_t>(r) * dim + c] = v;
            if (v > row_max[static_cast<size_t>(r)]) row_max[static_cast<size_t>(r)] = v;
        }
    R best(0);
    max_perm_dfs(mag, row_max, dim, 0, 0u, R(1), best);
    return best;
}

}  // namespace detail

// |C| = 0 condition for an m x n blur; production path for arbitrary sizes.
// For the gamma axis call with (n, m) swapped per the x <-> y replacement rule.
template <class R>
CeResult<R> ce_general(int m, int n, const CirclePoint<R>& anchor, const Jet<R>& jet) {
    GeneratorMatrix<R> gm = generator_matrix(m, n, anchor, jet);
    return {determinant(gm), detail::max_permutation_product(gm)};
}

}  // namespace lbd
