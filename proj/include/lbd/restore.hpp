#pragma once

#include "lbd/detect.hpp"
#include "lbd/image.hpp"

namespace lbd {

// Combined-blur coefficient grid reconstructed from flagged zeros;
// normalized so the coefficients sum to one.
struct BlurEstimate {
    Image coeffs;               // m_tot x n_tot, real
    double residual = 0.0;      // ||A x||_2 of the homogeneous system
    double sigma_penult = 0.0;  // second-smallest singular value (conditioning)
    double max_imag_rel = 0.0;  // imaginary residue dropped after normalization

    int m_tot() const { return coeffs.width(); }
    int n_tot() const { return coeffs.height(); }
};

struct ambiguous_blur_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct inconsistent_counts_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One homogeneous row per flagged root; extents inferred from the per-angle
// flag counts when not supplied (m_tot-1 = gamma count, n_tot-1 = beta count).
BlurEstimate reconstruct_blur(const DetectionReport& report, const Image& g, int m_tot = 0,
                              int n_tot = 0);

struct RestoreResult {
    Image restored;                   // cropped to (M-m_tot+1) x (N-n_tot+1)
    double max_imag_residue = 0.0;
    double max_pre_round_dev = 0.0;   // only meaningful when rounded
    bool rounded = false;
    double rho_u_used = 1.0, rho_v_used = 1.0;
};

// Divide the z-transform grids entrywise and invert; retries once at bumped
// radii when the blur transform nearly vanishes on the grid.
RestoreResult restore(const Image& g, const BlurEstimate& blur, double rho_u, double rho_v);

}  // namespace lbd
