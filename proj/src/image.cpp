#include "lbd/image.hpp"

#include <cmath>

namespace lbd {

Image::Image(int width, int height, double fill)
    : w_(width), h_(height), s_(static_cast<size_t>(width) * height, fill) {
    if (width < 1 || height < 1) throw std::invalid_argument("image extents must be >= 1");
}

Image::Image(int width, int height, std::vector<double> samples, bool integral)
    : w_(width), h_(height), s_(std::move(samples)), integral_(integral) {
    if (width < 1 || height < 1) throw std::invalid_argument("image extents must be >= 1");
    if (s_.size() != static_cast<size_t>(width) * height)
        throw std::invalid_argument("sample count does not match extents");
    for (double v : s_)
        if (!std::isfinite(v)) throw std::invalid_argument("image samples must be finite");
}

double Image::sum() const {
    double s = 0.0;
    for (double v : s_) s += v;
    return s;
}

double Image::max_abs() const {
    double m = 0.0;
    for (double v : s_) m = std::max(m, std::fabs(v));
    return m;
}

Image convolve(const Image& f, const Image& h) {
    const int W = f.width() + h.width() - 1;
    const int H = f.height() + h.height() - 1;
    Image out(W, H);
    for (int a = 0; a < f.width(); ++a)
        for (int b = 0; b < f.height(); ++b) {
            const double fv = f.at(a, b);
            if (fv == 0.0) continue;
            for (int c = 0; c < h.width(); ++c)
                for (int d = 0; d < h.height(); ++d) out.at(a + c, b + d) += fv * h.at(c, d);
        }
    out.set_integral(f.integral() && h.integral());
    return out;
}

bool all_integral(const Image& g) {
    for (double v : g.samples())
        if (v != std::floor(v)) return false;
    return true;
}

}  // namespace lbd
