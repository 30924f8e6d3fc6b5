#pragma once

#include <stdexcept>
#include <vector>

#include "lbd/aberth.hpp"
#include "lbd/ztransform.hpp"

namespace lbd {

enum class Axis { Beta, Gamma };  // Beta: roots in v at fixed u; Gamma: roots in u at fixed v

struct degenerate_root_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A slice root with its derivative jet in the radial variable (rho_u for
// beta, rho_v for gamma).
template <class R>
struct RootJet {
    Axis axis;
    CirclePoint<R> anchor;
    Cplx<R> value;
    Jet<R> jet;      // jet.coeffs()[0] == value
    R margin;        // |dP/droot| at the root, the simple-root margin
};

template <class R>
struct JetOptions {
    R tau_root = R(1e-10);      // acceptance bound for root0, relative to sum|coeffs|
    R delta_simple = R(1e-8);   // simple-root margin threshold, relative to sum|coeffs|
};

template <class R>
std::vector<Cplx<R>> roots_v(const Image& g, const CirclePoint<R>& u,
                             const RootOptions<R>& opt = {}) {
    return poly_roots(v_slice(g, u), opt);
}

template <class R>
std::vector<Cplx<R>> roots_u(const Image& g, const CirclePoint<R>& v,
                             const RootOptions<R>& opt = {}) {
    return poly_roots(u_slice(g, v), opt);
}

namespace detail {

// Order-k Taylor coefficient of P(rho0+t, B(t)) = sum_y A_y(t) B(t)^y,
// evaluated by Horner in jet arithmetic.
template <class R>
Cplx<R> composite_coeff(const std::vector<Jet<R>>& A, const Jet<R>& B, int k) {
    Jet<R> acc = A.back();
    for (size_t y = A.size() - 1; y-- > 0;) acc = acc * B + A[y];
    return acc[k];
}

}  // namespace detail

// Derivative jet of a slice root by implicit differentiation: the order-k
// coefficient of P(rho0+t, B(t)) must vanish, and it is linear in b_k with
// slope dP/dv at the root. Uses only the observed image via the exact
// coefficient jets.
template <class R>
RootJet<R> radial_jet(const Image& g, Axis axis, const CirclePoint<R>& anchor,
                      const Cplx<R>& root0, int K, const JetOptions<R>& opt = {}) {
    std::vector<Jet<R>> A = (axis == Axis::Beta)
                                ? v_slice_coeff_jets(g, anchor.phi, anchor.rho, K)
                                : u_slice_coeff_jets(g, anchor.phi, anchor.rho, K);

    R coeff_sum(0);
    R eval_scale(0);
    const R rmag = lbd::abs(root0);
    const R m = rmag > R(1) ? rmag : R(1);
    for (size_t y = A.size(); y-- > 0;) eval_scale = eval_scale * m + lbd::abs(A[y][0]);
    for (const auto& a : A) coeff_sum += lbd::abs(a[0]);

    // P(rho0, root0) and dP/dv(rho0, root0)
    Cplx<R> p{}, dp{};
    for (size_t y = A.size(); y-- > 0;) {
        dp = dp * root0 + p;
        p = p * root0 + A[y][0];
    }
    if (lbd::abs(p) > opt.tau_root * eval_scale)
        throw std::invalid_argument("radial_jet: value is not a root of the slice within tolerance");
    R margin = lbd::abs(dp);
    if (K >= 1 && margin <= opt.delta_simple * coeff_sum)
        throw degenerate_root_error("radial_jet: degenerate (near-multiple) root, derivatives undefined");

    Jet<R> B(K);
    B[0] = root0;
    for (int k = 1; k <= K; ++k) {
        Cplx<R> residual = detail::composite_coeff(A, B, k);  // with b_k still zero
        B[k] = -(residual / dp);
    }
    return RootJet<R>{axis, anchor, root0, B, margin};
}

// Jet of the root as a function of phi at fixed rho: convert radial
// derivatives to u-derivatives (B^(k) = e^{ik phi} b^(k)) and compose with
// u(phi) = rho e^{-i phi}.
template <class R>
Jet<R> angular_jet_from_radial(const RootJet<R>& rj) {
    const int K = rj.jet.order();
    const Cplx<R> eiphi = lbd::polar(R(1), rj.anchor.phi);  // e^{+i phi}
    const Cplx<R> u0 = rj.anchor.value();

    // Taylor coefficients of B about u0
    Jet<R> bu(K);
    Cplx<R> phase(R(1));
    for (int k = 0; k <= K; ++k) {
        bu[k] = rj.jet[k] * phase;
        phase *= eiphi;
    }

    // delta-u jet of u(phi0 + s) - u0 = u0 (e^{-is} - 1): coefficients u0 (-i)^k / k!
    Jet<R> du(K);
    Cplx<R> mik(R(1));  // (-i)^k
    R kfact(1);
    for (int k = 1; k <= K; ++k) {
        mik = Cplx<R>(mik.im, -mik.re);  // multiply by -i
        kfact *= R(k);
        du[k] = u0 * mik / Cplx<R>(kfact);
    }

    Jet<R> acc = Jet<R>::constant(bu[K], K);
    for (int k = K - 1; k >= 0; --k) {
        acc = acc * du;
        acc[0] += bu[k];
    }
    return acc;
}

}  // namespace lbd
