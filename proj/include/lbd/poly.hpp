#pragma once

#include <stdexcept>
#include <vector>

#include "lbd/complex.hpp"

namespace lbd {

// Univariate complex polynomial, coefficients in ascending degree order.
template <class R>
struct Poly {
    std::vector<Cplx<R>> c;

    Poly() = default;
    explicit Poly(std::vector<Cplx<R>> coeffs) : c(std::move(coeffs)) {}

    int degree() const { return static_cast<int>(c.size()) - 1; }

    Cplx<R> eval(const Cplx<R>& z) const {
        Cplx<R> acc{};
        for (size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
        return acc;
    }

    // p(z) and p'(z) in one Horner pass.
    void eval_with_derivative(const Cplx<R>& z, Cplx<R>& p, Cplx<R>& dp) const {
        p = Cplx<R>{};
        dp = Cplx<R>{};
        for (size_t i = c.size(); i-- > 0;) {
            dp = dp * z + p;
            p = p * z + c[i];
        }
    }

    R coeff_abs_sum() const {
        R s(0);
        for (const auto& a : c) s += lbd::abs(a);
        return s;
    }

    // sum_k |c_k| max(1,|z|)^k: the magnitude scale of evaluating at z, and
    // the tightest residual scale a backward-stable solver can honor for
    // roots outside the unit disk.
    R eval_scale(const R& zabs) const {
        R m = zabs > R(1) ? zabs : R(1);
        R s(0);
        for (size_t i = c.size(); i-- > 0;) s = s * m + lbd::abs(c[i]);
        return s;
    }

    R coeff_abs_max() const {
        R m(0);
        for (const auto& a : c) {
            R v = lbd::abs(a);
            if (v > m) m = v;
        }
        return m;
    }
};

// Drop leading coefficients with magnitude < rel * max|coeffs|. Mirrors the
// degree drop the slice polynomials can exhibit (n' <= n-1).
template <class R>
Poly<R> trim(Poly<R> p, const R& rel = R(1e-12)) {
    R thresh = rel * p.coeff_abs_max();
    while (p.c.size() > 1 && lbd::abs(p.c.back()) < thresh) p.c.pop_back();
    return p;
}

template <class R>
struct DeflateResult {
    Poly<R> quotient;
    R remainder_abs;
};

// Synthetic division by (z - r). r must be a root within tau_rel * sum|coeffs|.
template <class R>
DeflateResult<R> poly_deflate(const Poly<R>& p, const Cplx<R>& r, const R& tau_rel = R(1e-10)) {
    if (p.degree() < 1) throw std::invalid_argument("cannot deflate a constant polynomial");
    R bound = tau_rel * p.eval_scale(lbd::abs(r));
    Cplx<R> rem = p.eval(r);
    if (lbd::abs(rem) > bound) throw std::invalid_argument("deflation point is not a root within tolerance");
    std::vector<Cplx<R>> q(p.c.size() - 1);
    Cplx<R> b = p.c.back();
    for (size_t i = q.size(); i-- > 0;) {
        q[i] = b;
        b = p.c[i] + b * r;
    }
    return {Poly<R>(std::move(q)), lbd::abs(b)};
}

}  // namespace lbd
