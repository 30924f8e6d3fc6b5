#pragma once

#include <stdexcept>
#include <vector>

#include "lbd/complex.hpp"

namespace lbd {

// Truncated Taylor expansion of a complex-valued function of one real
// variable: f(t0 + t) = sum_k c_k t^k, k = 0..K. Derivative values are
// recovered as f^(k)(t0) = k! * c_k.
template <class R>
class Jet {
  public:
    explicit Jet(int order) : c_(static_cast<size_t>(order) + 1) {
        if (order < 0) throw std::invalid_argument("jet order must be >= 0");
    }
    Jet(int order, std::vector<Cplx<R>> coeffs) : c_(std::move(coeffs)) {
        if (order < 0 || c_.size() != static_cast<size_t>(order) + 1)
            throw std::invalid_argument("jet coefficient count does not match order");
    }

    static Jet constant(const Cplx<R>& v, int order) {
        Jet j(order);
        j.c_[0] = v;
        return j;
    }
    static Jet one(int order) { return constant(Cplx<R>(R(1)), order); }

    int order() const { return static_cast<int>(c_.size()) - 1; }
    const Cplx<R>& operator[](int k) const { return c_[static_cast<size_t>(k)]; }
    Cplx<R>& operator[](int k) { return c_[static_cast<size_t>(k)]; }
    const std::vector<Cplx<R>>& coeffs() const { return c_; }

    Cplx<R> value() const { return c_[0]; }

    // k-th derivative value, k! * c_k.
    Cplx<R> derivative(int k) const {
        R f(1);
        for (int i = 2; i <= k; ++i) f *= R(i);
        return c_[static_cast<size_t>(k)] * f;
    }

  private:
    std::vector<Cplx<R>> c_;
};

namespace detail {
template <class R>
void require_same_order(const Jet<R>& a, const Jet<R>& b) {
    if (a.order() != b.order()) throw std::invalid_argument("jet order mismatch");
}
}  // namespace detail

template <class R>
Jet<R> operator+(const Jet<R>& a, const Jet<R>& b) {
    detail::require_same_order(a, b);
    Jet<R> out(a.order());
    for (int k = 0; k <= a.order(); ++k) out[k] = a[k] + b[k];
    return out;
}

template <class R>
Jet<R> operator-(const Jet<R>& a, const Jet<R>& b) {
    detail::require_same_order(a, b);
    Jet<R> out(a.order());
    for (int k = 0; k <= a.order(); ++k) out[k] = a[k] - b[k];
    return out;
}

// Truncated Cauchy product; the Leibniz rule in coefficient form.
template <class R>
Jet<R> operator*(const Jet<R>& a, const Jet<R>& b) {
    detail::require_same_order(a, b);
    Jet<R> out(a.order());
    for (int k = 0; k <= a.order(); ++k) {
        Cplx<R> s{};
        for (int j = 0; j <= k; ++j) s += a[j] * b[k - j];
        out[k] = s;
    }
    return out;
}

template <class R>
Jet<R> operator*(const Jet<R>& a, const Cplx<R>& s) {
    Jet<R> out(a.order());
    for (int k = 0; k <= a.order(); ++k) out[k] = a[k] * s;
    return out;
}

template <class R>
Jet<R> jet_pow(const Jet<R>& a, int e) {
    if (e < 0) throw std::invalid_argument("jet_pow exponent must be >= 0");
    Jet<R> out = Jet<R>::one(a.order());
    for (int i = 0; i < e; ++i) out = out * a;
    return out;
}

// sum_k c_k eps^k; used for re-anchoring checks.
template <class R>
Cplx<R> jet_eval(const Jet<R>& a, const R& eps) {
    Cplx<R> acc{};
    for (int k = a.order(); k >= 0; --k) acc = acc * Cplx<R>(eps) + a[k];
    return acc;
}

}  // namespace lbd
