#pragma once

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

#include "lbd/poly.hpp"

namespace lbd {

struct root_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class R>
struct RootOptions {
    R tau_root = R(1e-10);       // residual bound, relative to sum|coeffs|
    R trim_rel = R(1e-12);       // leading-coefficient trim threshold
    int max_iter = 400;
    std::vector<Cplx<R>> initial;  // warm start (e.g. roots from a lower precision)
};

namespace detail {

template <class R>
std::vector<Cplx<R>> initial_circle(const Poly<R>& p) {
    using std::pow;
    int d = p.degree();
    Cplx<R> lead = p.c.back();
    // Fujiwara-style bound keeps every root inside radius 2*rf.
    R rf(0);
    for (int k = 0; k < d; ++k) {
        R m = lbd::abs(p.c[static_cast<size_t>(k)] / lead);
        if (m > R(0)) {
            R cand = pow(m, R(1) / R(d - k));
            if (cand > rf) rf = cand;
        }
    }
    if (rf == R(0)) rf = R(1);
    std::vector<Cplx<R>> z(static_cast<size_t>(d));
    const R two_pi = R(2) * R(3.14159265358979323846L);
    for (int k = 0; k < d; ++k) {
        // irrational angle offset so no start coincides with an axis or a peer
        R theta = two_pi * R(k) / R(d) + R(0.39996322972865332);
        z[static_cast<size_t>(k)] = lbd::polar(rf, theta);
    }
    return z;
}

}  // namespace detail

// Simultaneous (Aberth-Ehrlich) iteration. Contract is the residual bound:
// every returned root r satisfies |p(r)| <= tau_root * sum|coeffs|.
template <class R>
std::vector<Cplx<R>> poly_roots(const Poly<R>& input, const RootOptions<R>& opt = {}) {
    Poly<R> p = trim(input, opt.trim_rel);
    if (p.coeff_abs_max() == R(0)) throw root_error("zero polynomial has no defined roots");
    int d = p.degree();
    if (d < 1) throw root_error("constant polynomial has no roots");


    std::vector<Cplx<R>> z;
    if (!opt.initial.empty()) {
        z = opt.initial;
        if (static_cast<int>(z.size()) != d) z.clear();
    }
    if (z.empty()) z = detail::initial_circle(p);

    std::vector<bool> done(static_cast<size_t>(d), false);
    const R tiny = R(1e-30);
    const R step_tol = R(4) * std::numeric_limits<R>::epsilon();
    for (int iter = 0; iter < opt.max_iter; ++iter) {
        int active = 0;
        for (int k = 0; k < d; ++k) {
            if (done[static_cast<size_t>(k)]) continue;
            Cplx<R> pv, dpv;
            p.eval_with_derivative(z[static_cast<size_t>(k)], pv, dpv);
            if (lbd::abs(pv) == R(0)) {
                done[static_cast<size_t>(k)] = true;
                continue;
            }
            ++active;
            if (lbd::abs(dpv) == R(0)) {
                // sitting on a critical point; nudge off it
                z[static_cast<size_t>(k)] += Cplx<R>(R(1e-6), R(1e-6));
                continue;
            }
            Cplx<R> newton = pv / dpv;
            Cplx<R> repulsion{};
            for (int j = 0; j < d; ++j) {
                if (j == k) continue;
                Cplx<R> diff = z[static_cast<size_t>(k)] - z[static_cast<size_t>(j)];
                if (lbd::abs(diff) < tiny) diff = Cplx<R>(tiny, tiny);
                repulsion += Cplx<R>(R(1)) / diff;
            }
            Cplx<R> denom = Cplx<R>(R(1)) - newton * repulsion;
            Cplx<R> step = (lbd::abs(denom) == R(0)) ? newton : newton / denom;
            z[static_cast<size_t>(k)] -= step;
            if (lbd::abs(step) <= step_tol * (R(1) + lbd::abs(z[static_cast<size_t>(k)])))
                done[static_cast<size_t>(k)] = true;
        }
        if (active == 0) break;
    }

    // Newton polish sharpens residuals after the cluster dynamics settle.
    for (auto& r : z) {
        for (int it = 0; it < 3; ++it) {
            Cplx<R> pv, dpv;
            p.eval_with_derivative(r, pv, dpv);
            if (lbd::abs(pv) == R(0) || lbd::abs(dpv) == R(0)) break;
            Cplx<R> step = pv / dpv;
            Cplx<R> cand = r - step;
            if (lbd::abs(input.eval(cand)) < lbd::abs(input.eval(r))) r = cand;
            else break;
        }
    }

    for (const auto& r : z) {
        if (lbd::abs(input.eval(r)) > opt.tau_root * input.eval_scale(lbd::abs(r)))
            throw root_error("root iteration did not converge to the residual bound");
    }

    std::sort(z.begin(), z.end(), [](const Cplx<R>& a, const Cplx<R>& b) {
        return a.re != b.re ? a.re < b.re : a.im < b.im;
    });
    return z;
}

}  // namespace lbd
