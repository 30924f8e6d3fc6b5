#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace lbd {

// Complex value over an arbitrary real scalar R (double, long double,
// boost::multiprecision floats). std::complex<R> is only specified for
// builtin floats, so we carry our own minimal type and route the real
// math functions through ADL.
template <class R>
struct Cplx {
    R re{};
    R im{};

    Cplx() = default;
    Cplx(R r) : re(std::move(r)) {}
    Cplx(R r, R i) : re(std::move(r)), im(std::move(i)) {}

    friend Cplx operator+(const Cplx& a, const Cplx& b) { return {a.re + b.re, a.im + b.im}; }
    friend Cplx operator-(const Cplx& a, const Cplx& b) { return {a.re - b.re, a.im - b.im}; }
    friend Cplx operator-(const Cplx& a) { return {-a.re, -a.im}; }
    friend Cplx operator*(const Cplx& a, const Cplx& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Cplx operator*(const Cplx& a, const R& s) { return {a.re * s, a.im * s}; }
    friend Cplx operator*(const R& s, const Cplx& a) { return a * s; }

    // Smith's division; avoids overflow for the wide dynamic ranges the
    // high-order derivative rows produce.
    friend Cplx operator/(const Cplx& a, const Cplx& b) {
        using std::fabs;
        if (fabs(b.re) >= fabs(b.im)) {
            R r = b.im / b.re;
            R d = b.re + b.im * r;
            return {(a.re + a.im * r) / d, (a.im - a.re * r) / d};
        }
        R r = b.re / b.im;
        R d = b.im + b.re * r;
        return {(a.re * r + a.im) / d, (a.im * r - a.re) / d};
    }
    friend Cplx operator/(const Cplx& a, const R& s) { return {a.re / s, a.im / s}; }

    Cplx& operator+=(const Cplx& o) { re += o.re; im += o.im; return *this; }
    Cplx& operator-=(const Cplx& o) { re -= o.re; im -= o.im; return *this; }
    Cplx& operator*=(const Cplx& o) { *this = *this * o; return *this; }
    Cplx& operator/=(const Cplx& o) { *this = *this / o; return *this; }

    friend bool operator==(const Cplx& a, const Cplx& b) { return a.re == b.re && a.im == b.im; }
};

template <class R>
R abs(const Cplx<R>& z) {
    using std::fabs;
    using std::sqrt;
    R ar = fabs(z.re), ai = fabs(z.im);
    R m = ar > ai ? ar : ai;
    if (m == R(0)) return R(0);
    R x = z.re / m, y = z.im / m;
    return m * sqrt(x * x + y * y);
}

template <class R>
R norm(const Cplx<R>& z) { return z.re * z.re + z.im * z.im; }

template <class R>
Cplx<R> conj(const Cplx<R>& z) { return {z.re, -z.im}; }

// rho * e^{i*theta}; callers pass -phi for the project-wide e^{-i*phi} convention.
template <class R>
Cplx<R> polar(const R& rho, const R& theta) {
    using std::cos;
    using std::sin;
    return {rho * cos(theta), rho * sin(theta)};
}

template <class R>
bool isfinite(const Cplx<R>& z) {
    using std::isfinite;
    return isfinite(z.re) && isfinite(z.im);
}

template <class R>
std::complex<double> to_std(const Cplx<R>& z) {
    return {static_cast<double>(z.re), static_cast<double>(z.im)};
}

template <class R>
Cplx<R> from_std(const std::complex<double>& z) {
    return {R(z.real()), R(z.imag())};
}

using c64 = Cplx<double>;

}  // namespace lbd
