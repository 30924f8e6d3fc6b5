#include "lbd/detect.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "lbd/ce.hpp"

namespace lbd {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double rel_of(const RootRecord& r) {
    if (r.degenerate) return std::numeric_limits<double>::quiet_NaN();
    return r.ce_scale > kCeScaleFloor ? std::abs(r.ce_value) / r.ce_scale : 0.0;
}

void classify_group(std::vector<RootRecord*>& group, const Policy& policy,
                    std::vector<std::string>* warnings) {
    auto flags_relative = [&] {
        std::vector<bool> f(group.size(), false);
        for (size_t i = 0; i < group.size(); ++i) {
            double rel = rel_of(*group[i]);
            f[i] = !group[i]->degenerate && rel < policy.eps_ce;
        }
        return f;
    };

    // largest-gap split of log10(|E|/scale); flags only a near-zero cluster
    auto flags_gap = [&](bool* no_gap) {
        std::vector<bool> f(group.size(), false);
        std::vector<std::pair<double, size_t>> xs;
        for (size_t i = 0; i < group.size(); ++i) {
            if (group[i]->degenerate) continue;
            double rel = std::max(rel_of(*group[i]), 1e-30);
            xs.emplace_back(std::log10(rel), i);
        }
        *no_gap = false;
        if (xs.empty()) return f;
        std::sort(xs.begin(), xs.end());
        const double zero_ceiling = std::log10(policy.eps_ce);
        if (xs.size() == 1) {
            if (xs[0].first <= zero_ceiling) f[xs[0].second] = true;
            return f;
        }
        size_t split = 0;
        double best = -1.0;
        for (size_t i = 0; i + 1 < xs.size(); ++i) {
            double gap = xs[i + 1].first - xs[i].first;
            if (gap > best) { best = gap; split = i; }
        }
        if (best >= policy.gap_min && xs[split].first <= zero_ceiling) {
            for (size_t i = 0; i <= split; ++i) f[xs[i].second] = true;
        } else if (best < policy.gap_min) {
            *no_gap = true;
        }
        return f;
    };

    auto flags_count = [&](int want) {
        std::vector<bool> f(group.size(), false);
        std::vector<std::pair<double, size_t>> mags;
        for (size_t i = 0; i < group.size(); ++i)
            if (!group[i]->degenerate) mags.emplace_back(std::abs(group[i]->ce_value), i);
        std::sort(mags.begin(), mags.end());
        for (size_t i = 0; i < mags.size() && static_cast<int>(i) < want; ++i)
            f[mags[i].second] = true;
        return f;
    };

    std::vector<bool> flags;
    switch (policy.kind) {
        case PolicyKind::Relative: {
            flags = flags_relative();
            if (policy.audit_gap && warnings) {
                bool no_gap = false;
                auto audit = flags_gap(&no_gap);
                if (!no_gap && audit != flags) {
                    std::ostringstream os;
                    os << "classification audit: largest-gap policy disagrees for "
                       << (group.front()->axis == Axis::Beta ? "beta" : "gamma") << " angle "
                       << group.front()->angle_index;
                    warnings->push_back(os.str());
                }
            }
            break;
        }
        case PolicyKind::Gap: {
            bool no_gap = false;
            flags = flags_gap(&no_gap);
            if (no_gap && warnings) {
                std::ostringstream os;
                os << "no separating gap for "
                   << (group.front()->axis == Axis::Beta ? "beta" : "gamma") << " angle "
                   << group.front()->angle_index << "; nothing flagged";
                warnings->push_back(os.str());
            }
            break;
        }
        case PolicyKind::Count: {
            int want = group.front()->axis == Axis::Beta
                           ? policy.count_beta
                           : (policy.count_gamma >= 0 ? policy.count_gamma : policy.count_beta);
            flags = flags_count(want);
            break;
        }
    }
    for (size_t i = 0; i < group.size(); ++i) group[i]->flagged = flags[i];
}

template <class R>
RootRecord make_record(Axis axis, int angle, int index, const Cplx<R>& root) {
    RootRecord rec;
    rec.axis = axis;
    rec.angle_index = angle;
    rec.root_index = index;
    rec.root = to_std(root);
    return rec;
}

template <class R>
void scan_axis(const Image& g, Axis axis, int angles, const R& rho, int m, int n,
               const ScanParams& params, DetectionReport& report) {
    using std::log10;
    const int K = m * n - 1;
    RootOptions<R> ropt;
    ropt.tau_root = R(params.tau_root);
    JetOptions<R> jopt;
    jopt.tau_root = R(params.tau_root);
    jopt.delta_simple = R(params.delta_simple);

    for (int j = 0; j < angles; ++j) {
        R phi = R(kTwoPi) * R(j) / R(angles);
        CirclePoint<R> anchor{rho, phi};
        std::vector<Cplx<R>> roots;
        try {
            auto slice = (axis == Axis::Beta) ? v_slice(g, anchor) : u_slice(g, anchor);
            roots = poly_roots(slice, ropt);
        } catch (const std::exception& e) {
            std::ostringstream os;
            os << (axis == Axis::Beta ? "beta" : "gamma") << " angle " << j << " skipped: "
               << e.what();
            report.diagnostics.push_back(os.str());
            auto& per = (axis == Axis::Beta) ? report.beta_flags_per_angle
                                             : report.gamma_flags_per_angle;
            per[static_cast<size_t>(j)] = -1;
            continue;
        }
        for (size_t i = 0; i < roots.size(); ++i) {
            RootRecord rec = make_record(axis, j, static_cast<int>(i), roots[i]);
            try {
                auto rj = radial_jet(g, axis, anchor, roots[i], K, jopt);
                CeResult<R> ce = (m == 2 && n == 3)
                                     ? (axis == Axis::Beta ? ce23_beta(rj.jet) : ce23_gamma(rj.jet))
                                     : (axis == Axis::Beta ? ce_general(m, n, anchor, rj.jet)
                                                           : ce_general(n, m, anchor, rj.jet));
                rec.ce_value = to_std(ce.value);
                rec.ce_scale = static_cast<double>(ce.scale);
                rec.log_score = static_cast<double>(log10(lbd::abs(ce.value) + R(1)));
            } catch (const degenerate_root_error&) {
                rec.degenerate = true;
                rec.ce_value = {std::numeric_limits<double>::quiet_NaN(),
                                std::numeric_limits<double>::quiet_NaN()};
                rec.ce_scale = 0.0;
                rec.log_score = std::numeric_limits<double>::quiet_NaN();
                std::ostringstream os;
                os << "degenerate " << (axis == Axis::Beta ? "beta" : "gamma") << " root at angle "
                   << j << " index " << i << " (near-multiple zero; derivatives undefined)";
                report.diagnostics.push_back(os.str());
            }
            report.records.push_back(rec);
        }
    }
}

template <class R>
DetectionReport scan_impl(const Image& g, const ScanParams& params) {
    DetectionReport report;
    report.width = g.width();
    report.height = g.height();
    report.m = params.m;
    report.n = params.n;
    report.P = params.angles_u > 0 ? params.angles_u : g.width();
    report.Q = params.angles_v > 0 ? params.angles_v : g.height();
    report.rho_u = params.rho_u;
    report.rho_v = params.rho_v;
    report.beta_flags_per_angle.assign(static_cast<size_t>(report.P), 0);
    report.gamma_flags_per_angle.assign(static_cast<size_t>(report.Q), 0);

    scan_axis<R>(g, Axis::Beta, report.P, R(params.rho_u), params.m, params.n, params, report);
    scan_axis<R>(g, Axis::Gamma, report.Q, R(params.rho_v), params.m, params.n, params, report);

    classify(report.records, params.policy, &report.warnings);

    bool any_degenerate = false;
    for (const auto& rec : report.records) {
        if (rec.degenerate) any_degenerate = true;
        if (!rec.flagged) continue;
        auto& per =
            (rec.axis == Axis::Beta) ? report.beta_flags_per_angle : report.gamma_flags_per_angle;
        if (per[static_cast<size_t>(rec.angle_index)] >= 0)
            ++per[static_cast<size_t>(rec.angle_index)];
    }

    auto common_count = [](const std::vector<int>& per) {
        int common = -1;
        for (int c : per) {
            if (c < 0) continue;  // skipped angle
            if (common < 0) common = c;
            else if (common != c) return -1;
        }
        return common < 0 ? 0 : common;
    };
    report.beta_count = common_count(report.beta_flags_per_angle);
    report.gamma_count = common_count(report.gamma_flags_per_angle);
    report.counts_consistent =
        report.beta_count >= 0 && report.gamma_count >= 0 && !any_degenerate;
    return report;
}

}  // namespace

DetectionReport scan(const Image& g, const ScanParams& params) {
    if (params.m < 1 || params.n < 1 || (params.m == 1 && params.n == 1))
        throw std::invalid_argument("scan: CE size must have m,n >= 1 and not both 1");
    return params.precision == Precision::Extended ? scan_impl<quad>(g, params)
                                                   : scan_impl<double>(g, params);
}

void classify(std::vector<RootRecord>& records, const Policy& policy,
              std::vector<std::string>* warnings) {
    if (records.empty()) throw std::invalid_argument("classify: no records");
    std::map<std::pair<int, int>, std::vector<RootRecord*>> groups;
    for (auto& rec : records)
        groups[{rec.axis == Axis::Beta ? 0 : 1, rec.angle_index}].push_back(&rec);
    for (auto& [key, group] : groups) classify_group(group, policy, warnings);
}

void export_fig2(const DetectionReport& report, std::ostream& os) {
    os << "axis,angle_index,root_index,re_root,im_root,log_score,flagged\n";
    char buf[128];
    for (const auto& rec : report.records) {
        std::snprintf(buf, sizeof(buf), "%s,%d,%d,%.17g,%.17g,%.17g,%d\n",
                      rec.axis == Axis::Beta ? "beta" : "gamma", rec.angle_index, rec.root_index,
                      rec.root.real(), rec.root.imag(), rec.log_score, rec.flagged ? 1 : 0);
        os << buf;
    }
}

}  // namespace lbd
