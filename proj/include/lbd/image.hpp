#pragma once

#include <stdexcept>
#include <vector>

namespace lbd {

// Real-valued 2D sample grid. x indexes the first extent (width M), y the
// second (height N); a 1x2 kernel is one sample wide in x and two in y.
// Storage is raster order (line per y).
class Image {
  public:
    Image() = default;
    Image(int width, int height, double fill = 0.0);
    Image(int width, int height, std::vector<double> samples, bool integral);

    int width() const { return w_; }
    int height() const { return h_; }

    double& at(int x, int y) { return s_[static_cast<size_t>(y) * w_ + x]; }
    double at(int x, int y) const { return s_[static_cast<size_t>(y) * w_ + x]; }

    const std::vector<double>& samples() const { return s_; }

    // whether the source data was integral
    bool integral() const { return integral_; }
    void set_integral(bool v) { integral_ = v; }

    double sum() const;
    double max_abs() const;

    friend bool operator==(const Image& a, const Image& b) {
        return a.w_ == b.w_ && a.h_ == b.h_ && a.s_ == b.s_;
    }

  private:
    int w_ = 0;
    int h_ = 0;
    std::vector<double> s_;
    bool integral_ = false;
};

// Full discrete convolution; output extents add minus one. Exact for
// integer-valued inputs within double's integer range.
Image convolve(const Image& f, const Image& h);

bool all_integral(const Image& g);

}  // namespace lbd
