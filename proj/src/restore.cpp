#include "lbd/restore.hpp"

#include <cmath>
#include <sstream>

#include "lbd/nullspace.hpp"
#include "lbd/ztransform.hpp"

namespace lbd {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kEpsDiv = 1e-12;
}  // namespace

BlurEstimate reconstruct_blur(const DetectionReport& report, const Image& g, int m_tot,
                              int n_tot) {
    if (report.width != g.width() || report.height != g.height())
        throw std::invalid_argument("reconstruct_blur: report does not describe this image");

    if (m_tot <= 0 || n_tot <= 0) {
        if (!report.counts_consistent)
            throw inconsistent_counts_error(
                "reconstruct_blur: flagged counts differ across angles, cannot infer extents");
        m_tot = report.gamma_count + 1;
        n_tot = report.beta_count + 1;
    }
    if (m_tot < 1 || n_tot < 1 || (m_tot == 1 && n_tot == 1))
        throw std::invalid_argument("reconstruct_blur: no flagged roots to build from");

    const int cols = m_tot * n_tot;
    std::vector<std::complex<double>> rows;
    int nrows = 0;
    for (const auto& rec : report.records) {
        if (!rec.flagged) continue;
        std::complex<double> anchor, root = rec.root;
        if (rec.axis == Axis::Beta)
            anchor = std::polar(report.rho_u, -kTwoPi * rec.angle_index / report.P);
        else
            anchor = std::polar(report.rho_v, -kTwoPi * rec.angle_index / report.Q);
        // row entries over (x, y), x major: u^x beta^y for the beta axis,
        // gamma^x v^y for the gamma axis
        std::complex<double> ux(1.0);
        for (int x = 0; x < m_tot; ++x) {
            std::complex<double> vy(1.0);
            for (int y = 0; y < n_tot; ++y) {
                rows.push_back(ux * vy);
                vy *= (rec.axis == Axis::Beta) ? root : anchor;
            }
            ux *= (rec.axis == Axis::Beta) ? anchor : root;
        }
        ++nrows;
    }
    if (nrows < cols - 1) {
        std::ostringstream os;
        os << "reconstruct_blur: " << nrows << " flagged constraints cannot determine " << cols
           << " coefficients";
        throw std::invalid_argument(os.str());
    }

    auto ns = nullspace_min(nrows, cols, rows);
    if (cols >= 2) {
        double smax = ns.singular_values.front();
        double spen = ns.singular_values[static_cast<size_t>(cols) - 2];
        if (spen < 1e-9 * smax)
            throw ambiguous_blur_error(
                "reconstruct_blur: nullspace is more than one-dimensional; blur is ambiguous");
    }

    std::complex<double> sum{};
    double abs_sum = 0.0;
    for (const auto& c : ns.x) {
        sum += c;
        abs_sum += std::abs(c);
    }
    if (std::abs(sum) < 1e-12 * abs_sum)
        throw std::runtime_error("reconstruct_blur: coefficients sum to zero, cannot normalize");

    Image coeffs(m_tot, n_tot);
    double max_imag = 0.0, max_real = 0.0;
    for (int x = 0; x < m_tot; ++x)
        for (int y = 0; y < n_tot; ++y) {
            std::complex<double> c = ns.x[static_cast<size_t>(x) * n_tot + y] / sum;
            coeffs.at(x, y) = c.real();
            max_imag = std::max(max_imag, std::fabs(c.imag()));
            max_real = std::max(max_real, std::fabs(c.real()));
        }

    BlurEstimate est{std::move(coeffs), ns.residual,
                     ns.singular_values[static_cast<size_t>(cols) - 2],
                     max_real > 0 ? max_imag / max_real : max_imag};
    return est;
}

namespace {

bool grid_divisible(const ComplexGrid& h) {
    double mn = 1e300, mx = 0.0;
    for (const auto& v : h.v) {
        double a = std::abs(v);
        mn = std::min(mn, a);
        mx = std::max(mx, a);
    }
    return mn > kEpsDiv * mx;
}

}  // namespace

RestoreResult restore(const Image& g, const BlurEstimate& blur, double rho_u, double rho_v) {
    const int P = g.width(), Q = g.height();
    const int m_tot = blur.m_tot(), n_tot = blur.n_tot();
    if (m_tot > P || n_tot > Q)
        throw std::invalid_argument("restore: blur extents exceed the image");

    ComplexGrid hg;
    double ru = rho_u, rv = rho_v;
    bool ok = false;
    for (int attempt = 0; attempt < 2; ++attempt) {
        hg = grid_eval(blur.coeffs, ru, rv, P, Q);
        if (grid_divisible(hg)) {
            ok = true;
            break;
        }
        ru *= 1.05;  // one retry off the blur's zero set
        rv *= 1.05;
    }
    if (!ok)
        throw std::runtime_error(
            "restore: blur transform vanishes on the evaluation grid even after the radius bump; "
            "choose different radii");

    ComplexGrid gg = grid_eval(g, ru, rv, P, Q);
    ComplexGrid fg;
    fg.P = P;
    fg.Q = Q;
    fg.v.resize(gg.v.size());
    for (size_t i = 0; i < gg.v.size(); ++i) fg.v[i] = gg.v[i] / hg.v[i];

    auto inv = grid_invert(fg, ru, rv);

    RestoreResult out;
    out.rho_u_used = ru;
    out.rho_v_used = rv;
    out.max_imag_residue = inv.max_imag_residue;
    Image cropped(P - m_tot + 1, Q - n_tot + 1);
    for (int x = 0; x < cropped.width(); ++x)
        for (int y = 0; y < cropped.height(); ++y) cropped.at(x, y) = inv.image.at(x, y);

    if (g.integral()) {
        double dev = 0.0;
        for (int x = 0; x < cropped.width(); ++x)
            for (int y = 0; y < cropped.height(); ++y) {
                double v = cropped.at(x, y);
                double r = std::round(v);
                dev = std::max(dev, std::fabs(v - r));
                cropped.at(x, y) = r;
            }
        out.rounded = true;
        out.max_pre_round_dev = dev;
        cropped.set_integral(true);
    }
    out.restored = std::move(cropped);
    return out;
}

}  // namespace lbd
