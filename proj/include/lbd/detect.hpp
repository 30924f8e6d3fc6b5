#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "lbd/image.hpp"
#include "lbd/precision.hpp"
#include "lbd/root_jet.hpp"

namespace lbd {

// One zero-value with its CE evaluation; the per-root row of the scan output.
struct RootRecord {
    Axis axis;
    int angle_index = 0;
    int root_index = 0;
    std::complex<double> root;
    std::complex<double> ce_value;
    double ce_scale = 0.0;
    double log_score = 0.0;  // log10(|E| + 1)
    bool flagged = false;
    bool degenerate = false;  // margin failure: derivatives undefined, never flaggable
};

enum class PolicyKind { Relative, Gap, Count };

struct Policy {
    PolicyKind kind = PolicyKind::Relative;
    double eps_ce = 1e-6;     // relative threshold for (a)
    double gap_min = 3.0;     // decades of log10(|E|/scale) the separating gap must span
    int count_beta = -1;      // expected flags per angle for (c)
    int count_gamma = -1;     // defaults to count_beta when < 0
    bool audit_gap = true;    // run (b) as a cross-check under (a)
};

struct ScanParams {
    int m = 2;
    int n = 3;
    double rho_u = 1.0;
    double rho_v = 1.0;
    int angles_u = 0;  // P; 0 selects the image width
    int angles_v = 0;  // Q; 0 selects the image height
    Policy policy;
    Precision precision = Precision::Double;
    double tau_root = 1e-10;
    double delta_simple = 1e-8;
};

struct DetectionReport {
    int width = 0, height = 0;
    int m = 2, n = 3;
    int P = 0, Q = 0;
    double rho_u = 1.0, rho_v = 1.0;
    std::vector<RootRecord> records;
    std::vector<std::string> diagnostics;  // degenerate roots and skipped angles
    std::vector<std::string> warnings;     // classification audit disagreements
    std::vector<int> beta_flags_per_angle;   // -1 marks a skipped angle
    std::vector<int> gamma_flags_per_angle;
    bool counts_consistent = false;
    int beta_count = -1;   // the common per-angle count when consistent
    int gamma_count = -1;
};

// Scan all angles on both axes, evaluate CEs on every root and classify.
DetectionReport scan(const Image& g, const ScanParams& params);

// Assign flags per (axis, angle) group under the given policy. Standalone so
// records can be reclassified without rescanning.
void classify(std::vector<RootRecord>& records, const Policy& policy,
              std::vector<std::string>* warnings = nullptr);

// Fixed-schema CSV of all records (the per-angle log|E| plot data).
void export_fig2(const DetectionReport& report, std::ostream& os);

}  // namespace lbd
