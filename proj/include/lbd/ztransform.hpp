#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "lbd/image.hpp"
#include "lbd/jet.hpp"
#include "lbd/poly.hpp"

namespace lbd {

// Point u = rho * e^{-i*phi} on the evaluation circle (project-wide sign
// convention).
template <class R>
struct CirclePoint {
    R rho;
    R phi;

    CirclePoint(R r, R p) : rho(std::move(r)), phi(std::move(p)) {
        if (!(rho > R(0))) throw std::invalid_argument("circle radius must be > 0");
    }

    Cplx<R> value() const { return lbd::polar(rho, -phi); }
};

struct degenerate_slice_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// A slice whose largest coefficient is rounding noise relative to the image
// (the anchor sits on a blur zero) has no usable roots.
template <class R>
void check_slice_scale(const Poly<R>& p, const Image& g, const char* what) {
    R img_scale(0);
    for (double v : g.samples()) {
        using std::fabs;
        img_scale += R(fabs(v));
    }
    if (p.coeff_abs_max() <= R(1e-12) * img_scale) throw degenerate_slice_error(what);
}

}  // namespace detail

// G(u, .) as a polynomial in v: coefficients a_y = sum_x g(x,y) u^x.
template <class R>
Poly<R> v_slice(const Image& g, const CirclePoint<R>& u) {
    const Cplx<R> uv = u.value();
    std::vector<Cplx<R>> c(static_cast<size_t>(g.height()));
    for (int y = 0; y < g.height(); ++y) {
        Cplx<R> acc{};
        for (int x = g.width(); x-- > 0;) acc = acc * uv + Cplx<R>(R(g.at(x, y)));
        c[static_cast<size_t>(y)] = acc;
    }
    Poly<R> p(std::move(c));
    detail::check_slice_scale(p, g, "v-slice coefficients vanish at this anchor");
    return trim(p);
}

// Mirror of v_slice with the roles of x and y swapped.
template <class R>
Poly<R> u_slice(const Image& g, const CirclePoint<R>& v) {
    const Cplx<R> vv = v.value();
    std::vector<Cplx<R>> c(static_cast<size_t>(g.width()));
    for (int x = 0; x < g.width(); ++x) {
        Cplx<R> acc{};
        for (int y = g.height(); y-- > 0;) acc = acc * vv + Cplx<R>(R(g.at(x, y)));
        c[static_cast<size_t>(x)] = acc;
    }
    Poly<R> p(std::move(c));
    detail::check_slice_scale(p, g, "u-slice coefficients vanish at this anchor");
    return trim(p);
}

namespace detail {

// Exact Taylor expansion about rho0 of a_(index)(rho) = sum_e w_e phasor^e rho^e,
// where e runs along one axis and w are the image samples on the other.
// Coefficient of t^k: sum_{e>=k} w_e phasor^e C(e,k) rho0^{e-k}.
template <class R>
std::vector<Jet<R>> slice_coeff_jets(const Image& g, const R& phi, const R& rho0, int K,
                                     bool along_x) {
    if (K < 0) throw std::invalid_argument("jet order must be >= 0");
    const int E = along_x ? g.width() : g.height();    // expansion axis extent
    const int L = along_x ? g.height() : g.width();    // number of coefficients
    // phasor^e and rho0^{e-k} tables
    std::vector<Cplx<R>> phasor(static_cast<size_t>(E));
    std::vector<R> rpow(static_cast<size_t>(E));
    const Cplx<R> w = lbd::polar(R(1), -phi);
    Cplx<R> pacc(R(1));
    R racc(1);
    for (int e = 0; e < E; ++e) {
        phasor[static_cast<size_t>(e)] = pacc;
        rpow[static_cast<size_t>(e)] = racc;
        pacc *= w;
        racc *= rho0;
    }
    // binomials C(e,k) for e < E, k <= K
    std::vector<std::vector<R>> binom(static_cast<size_t>(E), std::vector<R>(static_cast<size_t>(K) + 1, R(0)));
    for (int e = 0; e < E; ++e) {
        binom[static_cast<size_t>(e)][0] = R(1);
        for (int k = 1; k <= K && k <= e; ++k) {
            binom[static_cast<size_t>(e)][static_cast<size_t>(k)] =
                (e - 1 >= 0 ? binom[static_cast<size_t>(e - 1)][static_cast<size_t>(k - 1)] : R(0)) +
                (e - 1 >= 0 ? binom[static_cast<size_t>(e - 1)][static_cast<size_t>(k)] : R(0));
        }
    }
    std::vector<Jet<R>> jets;
    jets.reserve(static_cast<size_t>(L));
    for (int l = 0; l < L; ++l) {
        Jet<R> j(K);
        for (int k = 0; k <= K; ++k) {
            Cplx<R> s{};
            for (int e = k; e < E; ++e) {
                const double sample = along_x ? g.at(e, l) : g.at(l, e);
                if (sample == 0.0) continue;
                s += phasor[static_cast<size_t>(e)] *
                     (binom[static_cast<size_t>(e)][static_cast<size_t>(k)] * rpow[static_cast<size_t>(e - k)] * R(sample));
            }
            j[k] = s;
        }
        jets.push_back(std::move(j));
    }
    return jets;
}

}  // namespace detail

// Jets (in rho_u about rho0) of the v-slice coefficients a_y.
template <class R>
std::vector<Jet<R>> v_slice_coeff_jets(const Image& g, const R& phi_u, const R& rho0, int K) {
    return detail::slice_coeff_jets(g, phi_u, rho0, K, /*along_x=*/true);
}

// Jets (in rho_v about rho0) of the u-slice coefficients a_x.
template <class R>
std::vector<Jet<R>> u_slice_coeff_jets(const Image& g, const R& phi_v, const R& rho0, int K) {
    return detail::slice_coeff_jets(g, phi_v, rho0, K, /*along_x=*/false);
}

// ---- DFT-style grid evaluation (double precision; restoration path) ----

struct ComplexGrid {
    int P = 0;  // angle count in u
    int Q = 0;  // angle count in v
    std::vector<std::complex<double>> v;  // row-major, index j*Q + k

    std::complex<double>& at(int j, int k) { return v[static_cast<size_t>(j) * Q + k]; }
    std::complex<double> at(int j, int k) const { return v[static_cast<size_t>(j) * Q + k]; }
};

// Values G(rho_u e^{-2pi i j/P}, rho_v e^{-2pi i k/Q}).
ComplexGrid grid_eval(const Image& g, double rho_u, double rho_v, int P, int Q);

struct GridInvertResult {
    Image image;               // P x Q, radius weighting removed
    double max_imag_residue;   // largest |imag| discarded, relative to max|real|
};

// Inverse DFT of the grid followed by division by rho_u^x rho_v^y.
GridInvertResult grid_invert(const ComplexGrid& grid, double rho_u, double rho_v);

}  // namespace lbd
