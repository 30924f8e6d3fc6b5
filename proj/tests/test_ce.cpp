#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lbd/ce.hpp"
#include "testutil.hpp"

using lbd::Axis;
using lbd::c64;
using lbd::CirclePoint;
using lbd::Image;
using lbd::Jet;
using testutil::image_of;
using testutil::rng_for;

namespace {

// jet whose derivative values (not coefficients) are the given numbers
Jet<double> jet_with_derivatives(std::initializer_list<c64> derivs) {
    std::vector<c64> d(derivs);
    Jet<double> j(static_cast<int>(d.size()) - 1);
    double fact = 1.0;
    for (size_t k = 0; k < d.size(); ++k) {
        if (k > 1) fact *= static_cast<double>(k);
        j[static_cast<int>(k)] = d[k] / c64(fact);
    }
    return j;
}

Jet<double> random_jet(std::mt19937& rng, int order) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    Jet<double> j(order);
    for (int k = 0; k <= order; ++k) j[k] = {d(rng), d(rng)};
    return j;
}

Jet<double> scaled_derivatives(const Jet<double>& j, const c64& lambda) {
    Jet<double> out(j.order());
    c64 pw(1.0);
    for (int k = 0; k <= j.order(); ++k) {
        out[k] = j[k] * pw;
        pw *= lambda;
    }
    return out;
}

const Image kKernel23 = image_of({{3, 5, 2}, {2, 1, 1}});
const Image kKernel22 = image_of({{1, 3}, {2, 1}});

std::vector<lbd::RootJet<double>> blur_root_jets(const Image& kernel, Axis axis, double rho,
                                                 double phi, int K = 5) {
    CirclePoint<double> a{rho, phi};
    auto roots = axis == Axis::Beta ? lbd::roots_v(kernel, a) : lbd::roots_u(kernel, a);
    std::vector<lbd::RootJet<double>> out;
    for (const auto& r : roots) out.push_back(lbd::radial_jet(kernel, axis, a, r, K));
    return out;
}

}  // namespace

TEST_CASE("ce23_beta transcription values") {
    auto zero = Jet<double>::constant(c64(0.7, -0.3), 5);
    auto rz = lbd::ce23_beta(zero);
    CHECK(lbd::abs(rz.value) == 0.0);

    auto ones = jet_with_derivatives({0.0, 1.0, 1.0, 1.0, 1.0, 1.0});
    auto r1 = lbd::ce23_beta(ones);
    CHECK(lbd::abs(r1.value - c64(-4.0)) < 1e-12);
    CHECK(r1.scale == 270.0);

    CHECK_THROWS_AS(lbd::ce23_beta(Jet<double>(4)), std::invalid_argument);
}

TEST_CASE("ce23_gamma transcription values") {
    auto zero = Jet<double>::constant(c64(1.0), 5);
    CHECK(lbd::abs(lbd::ce23_gamma(zero).value) == 0.0);

    auto ones = jet_with_derivatives({0.0, 1.0, 1.0, 1.0, 1.0, 1.0});
    CHECK(lbd::abs(lbd::ce23_gamma(ones).value - c64(-1.0)) < 1e-12);

    CHECK_THROWS_AS(lbd::ce23_gamma(Jet<double>(3)), std::invalid_argument);
}

TEST_CASE("genuine 2x3 blur roots annihilate both expanded CEs") {
    for (double phi : {0.0, 0.9, 2.3}) {
        for (const auto& rj : blur_root_jets(kKernel23, Axis::Beta, 1.0, phi)) {
            auto e = lbd::ce23_beta(rj.jet);
            CHECK(e.relative() <= 1e-6);
        }
        for (const auto& rj : blur_root_jets(kKernel23, Axis::Gamma, 1.0, phi)) {
            auto e = lbd::ce23_gamma(rj.jet);
            CHECK(e.relative() <= 1e-6);
        }
    }
}

TEST_CASE("weighted homogeneity: lambda^12 for beta, lambda^9 for gamma") {
    auto rng = rng_for("homogeneity");
    for (const c64 lambda : {c64(2.0), c64(0.5), c64(1.0, 1.0)}) {
        for (int trial = 0; trial < 10; ++trial) {
            auto j = random_jet(rng, 5);
            auto sj = scaled_derivatives(j, lambda);

            c64 lam12(1.0);
            for (int i = 0; i < 12; ++i) lam12 *= lambda;
            c64 expect_b = lam12 * lbd::ce23_beta(j).value;
            c64 got_b = lbd::ce23_beta(sj).value;
            CHECK(lbd::abs(got_b - expect_b) <= 1e-10 * lbd::abs(expect_b));

            c64 lam9(1.0);
            for (int i = 0; i < 9; ++i) lam9 *= lambda;
            c64 expect_g = lam9 * lbd::ce23_gamma(j).value;
            c64 got_g = lbd::ce23_gamma(sj).value;
            CHECK(lbd::abs(got_g - expect_g) <= 1e-10 * lbd::abs(expect_g));
        }
    }
}

TEST_CASE("generator matrix row zero lists the monomial values") {
    auto rng = rng_for("gen-row0");
    auto j = random_jet(rng, 5);
    CirclePoint<double> anchor{1.3, 0.7};
    auto gm = lbd::generator_matrix(2, 3, anchor, j);
    c64 u = anchor.value(), b = j[0];
    c64 expect[6] = {c64(1.0), b, b * b, u, u * b, u * b * b};
    for (int col = 0; col < 6; ++col)
        CHECK(lbd::abs(gm.at(0, col) - expect[col]) < 1e-12 * (1.0 + lbd::abs(expect[col])));
}

TEST_CASE("generator matrix for a constant root") {
    CirclePoint<double> anchor{1.1, 0.4};
    auto gm = lbd::generator_matrix(2, 3, anchor, Jet<double>::constant(c64(-1.0), 5));
    // pure-root columns (0,1), (0,2) vanish for rows >= 1
    for (int k = 1; k < 6; ++k) {
        CHECK(lbd::abs(gm.at(k, 1)) == 0.0);
        CHECK(lbd::abs(gm.at(k, 2)) == 0.0);
    }
    // anchor columns follow d^k u / d rho^k: one derivative row, zero beyond
    c64 eiphi = lbd::polar(1.0, -anchor.phi);
    CHECK(lbd::abs(gm.at(1, 3) - eiphi) < 1e-15);
    CHECK(lbd::abs(gm.at(1, 4) - eiphi * c64(-1.0)) < 1e-15);
    for (int k = 2; k < 6; ++k)
        for (int col = 3; col < 6; ++col) CHECK(lbd::abs(gm.at(k, col)) == 0.0);
}

TEST_CASE("generator entry (2, u b^2) matches the symbolic derivative") {
    auto rng = rng_for("gen-entry");
    for (int trial = 0; trial < 5; ++trial) {
        auto j = random_jet(rng, 5);
        CirclePoint<double> anchor{1.2, 0.9};
        auto gm = lbd::generator_matrix(2, 3, anchor, j);
        c64 b = j[0], b1 = j.derivative(1), b2 = j.derivative(2);
        double rho = anchor.rho;
        c64 eiphi = lbd::polar(1.0, -anchor.phi);
        c64 expect = c64(2.0) * (c64(2.0) * b * b1 + c64(rho) * b1 * b1 + c64(rho) * b * b2) * eiphi;
        CHECK(lbd::abs(gm.at(2, 5) - expect) < 1e-12 * (1.0 + lbd::abs(expect)));
    }
}

TEST_CASE("ce_general vanishes exactly where it should") {
    CirclePoint<double> anchor{1.0, 0.35};
    // constant root jet: any m,n with n >= 2
    auto conj = Jet<double>::constant(c64(0.4, 0.2), 5);
    CHECK(lbd::ce_general(2, 3, anchor, conj).relative() < 1e-12);
    auto con8 = Jet<double>::constant(c64(0.4, 0.2), 7);
    CHECK(lbd::ce_general(2, 4, anchor, con8).relative() < 1e-12);

    // 2x2-blur roots satisfy the 2x3 condition (smaller-blur inclusion)
    for (const auto& rj : blur_root_jets(kKernel22, Axis::Beta, 1.0, anchor.phi))
        CHECK(lbd::ce_general(2, 3, anchor, rj.jet).relative() < 1e-8);
}

TEST_CASE("ce_general is far from zero on random jets") {
    auto rng = rng_for("ce-mc");
    CirclePoint<double> anchor{1.0, 0.0};
    double min_rel = 1e30, min_abs = 1e30;
    for (int trial = 0; trial < 1000; ++trial) {
        auto j = random_jet(rng, 5);
        auto r = lbd::ce_general(2, 3, anchor, j);
        min_rel = std::min(min_rel, r.relative());
        min_abs = std::min(min_abs, lbd::abs(r.value));
    }
    CHECK(min_abs > 1e-3);
    CHECK(min_rel > 1e-6);
}

TEST_CASE("determinant and expanded-form zero sets agree") {
    auto rng = rng_for("zero-set");
    CirclePoint<double> anchor{1.0, 0.55};
    int disagreements = 0;
    for (int trial = 0; trial < 200; ++trial) {
        auto j = random_jet(rng, 5);
        bool det_zero = lbd::ce_general(2, 3, anchor, j).relative() < 1e-6;
        bool eq_zero = lbd::ce23_beta(j).relative() < 1e-6;
        if (det_zero != eq_zero) ++disagreements;
    }
    // genuine jets from randomized 2x3 kernels
    auto krng = rng_for("zero-set-kernels");
    int genuine = 0;
    while (genuine < 20) {
        auto kern = testutil::random_int_image(krng, 2, 3, 1, 9);
        CirclePoint<double> a{1.0, std::uniform_real_distribution<double>(0.0, 6.28)(krng)};
        std::vector<c64> roots;
        try {
            roots = lbd::roots_v(kern, a);
        } catch (const lbd::root_error&) {
            continue;
        }
        if (roots.size() != 2) continue;
        for (const auto& r : roots) {
            if (genuine >= 20) break;
            lbd::RootJet<double> rj{Axis::Beta, a, r, Jet<double>(0), 0.0};
            try {
                rj = lbd::radial_jet(kern, Axis::Beta, a, r, 5);
            } catch (const lbd::degenerate_root_error&) {
                continue;
            }
            bool det_zero = lbd::ce_general(2, 3, a, rj.jet).relative() < 1e-6;
            bool eq_zero = lbd::ce23_beta(rj.jet).relative() < 1e-6;
            CHECK(det_zero);
            CHECK(eq_zero);
            if (det_zero != eq_zero) ++disagreements;
            ++genuine;
        }
    }
    CHECK(disagreements == 0);
}

TEST_CASE("smaller-blur roots drive ce23_beta to zero") {
    auto drive = [](const Image& kernel) {
        for (double phi : {0.2, 1.4}) {
            for (const auto& rj : blur_root_jets(kernel, Axis::Beta, 1.0, phi))
                CHECK(lbd::ce23_beta(rj.jet).relative() <= 1e-6);
        }
    };
    drive(image_of({{1, 1}}));      // 1x2
    drive(image_of({{1, 3, 2}}));   // 1x3, constant roots -1 and -1/2
    drive(kKernel22);               // 2x2
}

TEST_CASE("angular-path determinant relates to the radial one by rho^15") {
    auto rng = rng_for("angular-det");
    for (double rho : {0.9, 1.0, 1.1}) {
        for (int trial = 0; trial < 5; ++trial) {
            auto g = testutil::random_int_image(rng, 5, 5);
            CirclePoint<double> u{rho, 0.8 + 0.3 * trial};
            auto roots = lbd::roots_v(g, u);
            lbd::RootJet<double> rj{Axis::Beta, u, roots[0], Jet<double>(0), 0.0};
            try {
                rj = lbd::radial_jet(g, Axis::Beta, u, roots[0], 5);
            } catch (const lbd::degenerate_root_error&) {
                continue;
            }
            auto radial = lbd::generator_matrix(2, 3, u, rj.jet);

            // angular path: u(s) = u0 e^{-is}, delta-u coefficients u0 (-i)^k / k!
            Jet<double> ujet(5);
            c64 mik(1.0);
            double fact = 1.0;
            ujet[0] = u.value();
            for (int k = 1; k <= 5; ++k) {
                mik = c64(mik.im, -mik.re);
                fact *= k;
                ujet[k] = u.value() * mik / c64(fact);
            }
            auto angular_jet = lbd::angular_jet_from_radial(rj);
            auto angular = lbd::generator_matrix_from_jets(2, 3, ujet, angular_jet);

            double dr = lbd::abs(lbd::determinant(radial));
            double da = lbd::abs(lbd::determinant(angular));
            double expect = std::pow(rho, 15) * dr;
            CHECK(std::abs(da - expect) <= 1e-8 * expect);
        }
    }
}
