#include "lbd/ztransform.hpp"

#include <cmath>

namespace lbd {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// e^{-2pi i (a*b mod n)/n}; keeping the angle reduced preserves accuracy for
// large index products.
std::complex<double> twiddle(long long a, long long b, int n) {
    long long m = (a % n) * (b % n) % n;
    double ang = -kTwoPi * static_cast<double>(m) / static_cast<double>(n);
    return {std::cos(ang), std::sin(ang)};
}

}  // namespace

ComplexGrid grid_eval(const Image& g, double rho_u, double rho_v, int P, int Q) {
    if (P < 1 || Q < 1) throw std::invalid_argument("grid extents must be >= 1");
    const int M = g.width(), N = g.height();

    std::vector<double> rupow(static_cast<size_t>(M)), rvpow(static_cast<size_t>(N));
    double acc = 1.0;
    for (int x = 0; x < M; ++x) { rupow[static_cast<size_t>(x)] = acc; acc *= rho_u; }
    acc = 1.0;
    for (int y = 0; y < N; ++y) { rvpow[static_cast<size_t>(y)] = acc; acc *= rho_v; }

    // separable two-stage evaluation: T(x,k) = sum_y g(x,y) rho_v^y w_Q^{ky}
    std::vector<std::complex<double>> t(static_cast<size_t>(M) * Q);
    for (int x = 0; x < M; ++x)
        for (int k = 0; k < Q; ++k) {
            std::complex<double> s{};
            for (int y = 0; y < N; ++y)
                s += g.at(x, y) * rvpow[static_cast<size_t>(y)] * twiddle(k, y, Q);
            t[static_cast<size_t>(x) * Q + k] = s;
        }

    ComplexGrid out;
    out.P = P;
    out.Q = Q;
    out.v.resize(static_cast<size_t>(P) * Q);
    for (int j = 0; j < P; ++j)
        for (int k = 0; k < Q; ++k) {
            std::complex<double> s{};
            for (int x = 0; x < M; ++x)
                s += t[static_cast<size_t>(x) * Q + k] * rupow[static_cast<size_t>(x)] * twiddle(j, x, P);
            out.at(j, k) = s;
        }
    return out;
}

GridInvertResult grid_invert(const ComplexGrid& grid, double rho_u, double rho_v) {
    const int P = grid.P, Q = grid.Q;
    // inverse along v first: S(j,y) = (1/Q) sum_k grid(j,k) conj(w_Q^{ky})
    std::vector<std::complex<double>> s(static_cast<size_t>(P) * Q);
    for (int j = 0; j < P; ++j)
        for (int y = 0; y < Q; ++y) {
            std::complex<double> a{};
            for (int k = 0; k < Q; ++k) a += grid.at(j, k) * std::conj(twiddle(k, y, Q));
            s[static_cast<size_t>(j) * Q + y] = a / static_cast<double>(Q);
        }

    Image img(P, Q);
    double max_imag = 0.0, max_real = 0.0;
    double rux = 1.0;
    std::vector<double> rvpow(static_cast<size_t>(Q));
    double acc = 1.0;
    for (int y = 0; y < Q; ++y) { rvpow[static_cast<size_t>(y)] = acc; acc *= rho_v; }
    for (int x = 0; x < P; ++x) {
        for (int y = 0; y < Q; ++y) {
            std::complex<double> a{};
            for (int j = 0; j < P; ++j) a += s[static_cast<size_t>(j) * Q + y] * std::conj(twiddle(j, x, P));
            a /= static_cast<double>(P);
            a /= rux * rvpow[static_cast<size_t>(y)];
            img.at(x, y) = a.real();
            max_imag = std::max(max_imag, std::fabs(a.imag()));
            max_real = std::max(max_real, std::fabs(a.real()));
        }
        rux *= rho_u;
    }
    double rel = max_real > 0.0 ? max_imag / max_real : max_imag;
    return {std::move(img), rel};
}

}  // namespace lbd
