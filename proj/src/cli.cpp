#include "lbd/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <random>

#include "lbd/ce.hpp"
#include "lbd/detect.hpp"
#include "lbd/io.hpp"
#include "lbd/restore.hpp"

namespace lbd::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct RunConfig {
    std::string true_path;
    std::vector<std::string> blur_paths;
    std::string image_path;
    int m = 2, n = 3;
    double rho_u = 1.0, rho_v = 1.0;
    int angles_u = 0, angles_v = 0;
    double eps_ce = 1e-6;
    std::string policy = "rel";
    std::string precision = "double";
    std::string out_dir = ".";
    unsigned seed = 12345;
    int m_tot = 0, n_tot = 0;
};

Policy parse_policy(const std::string& s, double eps_ce) {
    Policy p;
    p.eps_ce = eps_ce;
    if (s == "rel") {
        p.kind = PolicyKind::Relative;
    } else if (s == "gap") {
        p.kind = PolicyKind::Gap;
    } else if (s.rfind("count:", 0) == 0) {
        p.kind = PolicyKind::Count;
        std::string rest = s.substr(6);
        auto comma = rest.find(',');
        p.count_beta = std::stoi(rest.substr(0, comma));
        p.count_gamma = comma == std::string::npos ? -1 : std::stoi(rest.substr(comma + 1));
        if (p.count_beta < 0) throw CLI::ValidationError("--policy", "count must be >= 0");
    } else {
        throw CLI::ValidationError("--policy", "expected rel, gap or count:K[,K]");
    }
    return p;
}

ScanParams scan_params(const RunConfig& cfg) {
    ScanParams sp;
    sp.m = cfg.m;
    sp.n = cfg.n;
    sp.rho_u = cfg.rho_u;
    sp.rho_v = cfg.rho_v;
    sp.angles_u = cfg.angles_u;
    sp.angles_v = cfg.angles_v;
    sp.policy = parse_policy(cfg.policy, cfg.eps_ce);
    sp.precision = cfg.precision == "extended" ? Precision::Extended : Precision::Double;
    return sp;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.out_dir);
    return (fs::path(cfg.out_dir) / name).string();
}

std::string write_image_auto(const RunConfig& cfg, const std::string& stem, const Image& img) {
    bool pgm_ok = img.integral() && all_integral(img);
    if (pgm_ok)
        for (double v : img.samples())
            if (v < 0.0 || v > 65535.0) pgm_ok = false;
    std::string path = out_path(cfg, stem + (pgm_ok ? ".pgm" : ".csv"));
    write_image(path, img);
    return path;
}

void print_report_summary(const DetectionReport& rep) {
    auto line = [](const char* axis, int count) {
        if (count >= 0)
            std::cout << axis << " flagged: " << count << "/angle\n";
        else
            std::cout << axis << " flagged: inconsistent across angles\n";
    };
    line("beta", rep.beta_count);
    line("gamma", rep.gamma_count);
    for (const auto& d : rep.diagnostics) std::cerr << "diagnostic: " << d << "\n";
    for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
}

Image load_convolved(const RunConfig& cfg) {
    Image g = read_image(cfg.true_path);
    if (cfg.blur_paths.empty()) throw io_error("at least one --blur kernel is required");
    for (const auto& bp : cfg.blur_paths) g = convolve(g, read_image(bp));
    return g;
}

int cmd_gen(const RunConfig& cfg) {
    Image g = load_convolved(cfg);
    std::string path = write_image_auto(cfg, "convolved", g);
    std::cout << "convolved image: " << g.width() << "x" << g.height() << " -> " << path << "\n";
    return 0;
}

int cmd_detect_on(const RunConfig& cfg, const Image& g) {
    auto rep = scan(g, scan_params(cfg));
    write_detection_csv(rep, out_path(cfg, "detection.csv"));
    print_report_summary(rep);
    return rep.counts_consistent ? 0 : 2;
}

int cmd_detect(const RunConfig& cfg) { return cmd_detect_on(cfg, read_image(cfg.image_path)); }

struct RestoreOutcome {
    RestoreResult result;
    BlurEstimate blur;
    DetectionReport report;
};

RestoreOutcome run_restore(const RunConfig& cfg, const Image& g) {
    auto t0 = std::chrono::steady_clock::now();
    auto rep = scan(g, scan_params(cfg));
    write_detection_csv(rep, out_path(cfg, "detection.csv"));
    print_report_summary(rep);
    auto blur = reconstruct_blur(rep, g, cfg.m_tot, cfg.n_tot);
    auto res = restore(g, blur, cfg.rho_u, cfg.rho_v);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json metrics = {
        {"command", "restore"},
        {"m_tot", blur.m_tot()},
        {"n_tot", blur.n_tot()},
        {"residual", blur.residual},
        {"sigma_penult", blur.sigma_penult},
        {"blur_imag_rel", blur.max_imag_rel},
        {"imag_residue", res.max_imag_residue},
        {"max_pre_round_deviation", res.rounded ? json(res.max_pre_round_dev) : json(nullptr)},
        {"rho_u_used", res.rho_u_used},
        {"rho_v_used", res.rho_v_used},
        {"runtime_sec", secs},
    };
    append_metrics(out_path(cfg, "metrics.jsonl"), metrics.dump());
    return {std::move(res), std::move(blur), std::move(rep)};
}

int cmd_restore(const RunConfig& cfg) {
    Image g = read_image(cfg.image_path);
    auto out = run_restore(cfg, g);
    std::string rpath = write_image_auto(cfg, "restored", out.result.restored);
    write_image(out_path(cfg, "blur_estimate.csv"), out.blur.coeffs);
    std::cout << "restored image: " << out.result.restored.width() << "x"
              << out.result.restored.height() << " -> " << rpath << "\n";
    std::cout << "blur estimate: " << out.blur.m_tot() << "x" << out.blur.n_tot()
              << " residual " << out.blur.residual << "\n";
    return 0;
}

int cmd_pipeline(const RunConfig& cfg) {
    Image g = load_convolved(cfg);
    std::string cpath = write_image_auto(cfg, "convolved", g);
    std::cout << "convolved image: " << g.width() << "x" << g.height() << " -> " << cpath << "\n";

    auto out = run_restore(cfg, g);
    std::string rpath = write_image_auto(cfg, "restored", out.result.restored);
    write_image(out_path(cfg, "blur_estimate.csv"), out.blur.coeffs);
    std::cout << "restored image: " << out.result.restored.width() << "x"
              << out.result.restored.height() << " -> " << rpath << "\n";

    Image truth = read_image(cfg.true_path);
    const Image& restored = out.result.restored;
    if (truth.width() != restored.width() || truth.height() != restored.height()) {
        std::cerr << "restored extents do not match the true image\n";
        return 1;
    }
    double max_dev = 0.0;
    for (int x = 0; x < truth.width(); ++x)
        for (int y = 0; y < truth.height(); ++y)
            max_dev = std::max(max_dev, std::fabs(truth.at(x, y) - restored.at(x, y)));
    bool match;
    if (truth.integral()) {
        match = max_dev == 0.0 && out.result.rounded && out.result.max_pre_round_dev < 0.5;
        std::cout << "comparison: max pre-round deviation " << out.result.max_pre_round_dev
                  << ", exact after rounding: " << (match ? "yes" : "no") << "\n";
    } else {
        double scale = std::max(1.0, truth.max_abs());
        match = max_dev <= 1e-6 * scale;
        std::cout << "comparison: max deviation " << max_dev << " (tolerance " << 1e-6 * scale
                  << ")\n";
    }
    if (!match) {
        std::cerr << "restoration does not reproduce the true image\n";
        return 1;
    }
    std::cout << "restoration matches the true image\n";
    return 0;
}

// ---- selftest properties ----

using PropertyFn = bool (*)(const RunConfig&);

bool prop_jet_ring_laws(const RunConfig& cfg) {
    std::mt19937 rng(cfg.seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    auto rnd_jet = [&](int order) {
        Jet<double> j(order);
        for (int k = 0; k <= order; ++k) j[k] = {d(rng), d(rng)};
        return j;
    };
    for (int trial = 0; trial < 40; ++trial) {
        auto a = rnd_jet(5), b = rnd_jet(5), c = rnd_jet(5);
        auto lhs = (a * b) * c;
        auto rhs = a * (b * c);
        auto dist = a * (b + c);
        auto dist2 = a * b + a * c;
        for (int k = 0; k <= 5; ++k) {
            if (lbd::abs(lhs[k] - rhs[k]) > 1e-12 * (1.0 + lbd::abs(lhs[k]))) return false;
            if (lbd::abs(dist[k] - dist2[k]) > 1e-12 * (1.0 + lbd::abs(dist[k]))) return false;
        }
    }
    return true;
}

Image random_int_image(std::mt19937& rng, int M, int N, int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    Image g(M, N);
    for (int x = 0; x < M; ++x)
        for (int y = 0; y < N; ++y) g.at(x, y) = d(rng);
    g.set_integral(true);
    return g;
}

c64 nearest(const std::vector<c64>& roots, const c64& t) {
    c64 best = roots.front();
    for (const auto& r : roots)
        if (lbd::abs(r - t) < lbd::abs(best - t)) best = r;
    return best;
}

bool prop_fd_jets(const RunConfig& cfg) {
    std::mt19937 rng(cfg.seed + 1);
    const double h = 1e-3;
    int checked = 0;
    for (int trial = 0; trial < 40 && checked < 10; ++trial) {
        auto g = random_int_image(rng, 6, 6, 1, 9);
        CirclePoint<double> u{1.0, 0.3 + 0.17 * trial};
        std::vector<c64> roots;
        try {
            roots = roots_v(g, u);
        } catch (const root_error&) {
            continue;
        }
        for (const auto& r : roots) {
            if (checked >= 10) break;
            auto at = [&](double dr) {
                return nearest(roots_v(g, CirclePoint<double>{1.0 + dr, u.phi}), r);
            };
            c64 fd1 = (at(h) - at(-h)) / c64(2 * h);
            c64 fd1w = (at(2 * h) - at(-2 * h)) / c64(4 * h);
            if (lbd::abs(fd1 - fd1w) > 1e-2 * lbd::abs(fd1)) continue;  // tracking anomaly
            c64 fd1_rich = (c64(4.0) * fd1 - fd1w) / c64(3.0);  // O(h^4) oracle
            lbd::RootJet<double> rj{Axis::Beta, u, r, Jet<double>(0), 0.0};
            try {
                rj = radial_jet(g, Axis::Beta, u, r, 4);
            } catch (const degenerate_root_error&) {
                continue;
            }
            if (lbd::abs(rj.jet.derivative(1) - fd1_rich) > 1e-6 * lbd::abs(fd1_rich) + 1e-12)
                return false;
            // re-anchoring: the order-4 Taylor sum must land on the re-solved root
            c64 pred = jet_eval(rj.jet, 1e-3);
            double e = lbd::abs(pred - nearest(roots_v(g, CirclePoint<double>{1.0 + 1e-3, u.phi}),
                                               pred));
            if (e > 1e-6) return false;
            ++checked;
        }
    }
    return checked == 10;
}

bool prop_homogeneity(const RunConfig& cfg) {
    std::mt19937 rng(cfg.seed + 2);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (const c64 lambda : {c64(2.0), c64(0.5), c64(1.0, 1.0)}) {
        for (int trial = 0; trial < 10; ++trial) {
            Jet<double> j(5);
            for (int k = 0; k <= 5; ++k) j[k] = {d(rng), d(rng)};
            Jet<double> sj(5);
            c64 pw(1.0);
            for (int k = 0; k <= 5; ++k) {
                sj[k] = j[k] * pw;
                pw *= lambda;
            }
            c64 lam12(1.0), lam9(1.0);
            for (int i = 0; i < 12; ++i) lam12 *= lambda;
            for (int i = 0; i < 9; ++i) lam9 *= lambda;
            c64 eb = lam12 * ce23_beta(j).value, gb = ce23_beta(sj).value;
            c64 eg = lam9 * ce23_gamma(j).value, gg = ce23_gamma(sj).value;
            if (lbd::abs(gb - eb) > 1e-10 * lbd::abs(eb)) return false;
            if (lbd::abs(gg - eg) > 1e-10 * lbd::abs(eg)) return false;
        }
    }
    return true;
}

bool prop_zero_set_agreement(const RunConfig& cfg) {
    std::mt19937 rng(cfg.seed + 3);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    CirclePoint<double> anchor{1.0, 0.4};
    for (int trial = 0; trial < 200; ++trial) {
        Jet<double> j(5);
        for (int k = 0; k <= 5; ++k) j[k] = {d(rng), d(rng)};
        bool dz = ce_general(2, 3, anchor, j).relative() < cfg.eps_ce;
        bool ez = ce23_beta(j).relative() < cfg.eps_ce;
        if (dz != ez) return false;
    }
    int genuine = 0;
    for (int trial = 0; trial < 200 && genuine < 20; ++trial) {
        auto kern = random_int_image(rng, 2, 3, 1, 9);
        CirclePoint<double> a{1.0, std::uniform_real_distribution<double>(0.0, 6.28)(rng)};
        std::vector<c64> roots;
        try {
            roots = roots_v(kern, a);
        } catch (const root_error&) {
            continue;
        }
        if (roots.size() != 2) continue;
        for (const auto& r : roots) {
            if (genuine >= 20) break;
            try {
                auto rj = radial_jet(kern, Axis::Beta, a, r, 5);
                bool dz = ce_general(2, 3, a, rj.jet).relative() < cfg.eps_ce;
                bool ez = ce23_beta(rj.jet).relative() < cfg.eps_ce;
                if (!dz || !ez) return false;
                ++genuine;
            } catch (const degenerate_root_error&) {
                break;
            }
        }
    }
    return genuine == 20;
}

bool prop_grid_round_trip(const RunConfig& cfg) {
    std::mt19937 rng(cfg.seed + 4);
    auto g = random_int_image(rng, 5, 4, 0, 99);
    for (double rho : {1.0, 1.05}) {
        auto grid = grid_eval(g, rho, rho, 6, 5);
        auto inv = grid_invert(grid, rho, rho);
        double tol = rho == 1.0 ? 1e-10 : 1e-8;
        for (int x = 0; x < 6; ++x)
            for (int y = 0; y < 5; ++y) {
                double expect = (x < 5 && y < 4) ? g.at(x, y) : 0.0;
                if (std::fabs(inv.image.at(x, y) - expect) > tol) return false;
            }
    }
    return true;
}

bool prop_detection_sanity(const RunConfig& cfg) {
    std::mt19937 rng(cfg.seed + 5);
    auto f = random_int_image(rng, 5, 5, 1, 9);
    Image k(1, 2);  // constant zero-value at -1/3, safely off the unit circle
    k.at(0, 0) = 3.0;
    k.at(0, 1) = 1.0;
    k.set_integral(true);
    auto g = convolve(f, k);
    RunConfig c2 = cfg;
    ScanParams sp = scan_params(c2);
    auto rep = scan(g, sp);
    if (!rep.counts_consistent) return false;
    return rep.beta_count == 1 && rep.gamma_count == 0;
}

bool prop_restore_round_trip(const RunConfig& cfg) {
    std::mt19937 rng(cfg.seed + 6);
    auto f = random_int_image(rng, 8, 8, 10, 99);
    std::uniform_real_distribution<double> d(0.2, 1.0);
    Image k(2, 3);
    double s = 0.0;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 3; ++y) s += (k.at(x, y) = d(rng));
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 3; ++y) k.at(x, y) /= s;
    auto g = convolve(f, k);
    RunConfig c2 = cfg;
    auto rep = scan(g, scan_params(c2));
    if (!rep.counts_consistent) return false;
    auto blur = reconstruct_blur(rep, g);
    auto res = restore(g, blur, cfg.rho_u, cfg.rho_v);
    if (res.restored.width() != 8 || res.restored.height() != 8) return false;
    for (int x = 0; x < 8; ++x)
        for (int y = 0; y < 8; ++y)
            if (std::fabs(res.restored.at(x, y) - f.at(x, y)) > 0.5) return false;
    return true;
}

int cmd_selftest(const RunConfig& cfg) {
    struct Named {
        const char* name;
        PropertyFn fn;
    };
    const Named props[] = {
        {"jet-ring-laws", prop_jet_ring_laws},
        {"finite-difference-jets", prop_fd_jets},
        {"ce-homogeneity", prop_homogeneity},
        {"zero-set-agreement", prop_zero_set_agreement},
        {"grid-round-trip", prop_grid_round_trip},
        {"detection-sanity", prop_detection_sanity},
        {"restore-round-trip", prop_restore_round_trip},
    };
    int failures = 0;
    for (const auto& p : props) {
        bool ok = false;
        try {
            ok = p.fn(cfg);
        } catch (const std::exception& e) {
            std::cerr << p.name << ": " << e.what() << "\n";
        }
        std::cout << (ok ? "PASS " : "FAIL ") << p.name << "\n";
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"blind deconvolution via derivative conditions on z-transform zeros"};
    app.require_subcommand(1);

    RunConfig cfg;
    auto add_common = [&](CLI::App* sub, bool with_scan) {
        sub->add_option("--out-dir", cfg.out_dir, "output directory");
        if (with_scan) {
            sub->add_option("--m", cfg.m, "condition size in u");
            sub->add_option("--n", cfg.n, "condition size in v");
            sub->add_option("--rho-u", cfg.rho_u, "evaluation radius in u")->check(CLI::PositiveNumber);
            sub->add_option("--rho-v", cfg.rho_v, "evaluation radius in v")->check(CLI::PositiveNumber);
            sub->add_option("--angles-u", cfg.angles_u, "angle count P (default: image width)");
            sub->add_option("--angles-v", cfg.angles_v, "angle count Q (default: image height)");
            sub->add_option("--eps-ce", cfg.eps_ce, "relative zero threshold for the conditions");
            sub->add_option("--policy", cfg.policy, "classification policy: rel, gap, count:K[,K]");
            sub->add_option("--precision", cfg.precision, "double or extended")
                ->check(CLI::IsMember({"double", "extended"}));
        }
    };

    auto* gen = app.add_subcommand("gen", "convolve a true image with blur kernels");
    gen->add_option("--true", cfg.true_path, "true image file")->required();
    gen->add_option("--blur", cfg.blur_paths, "blur kernel file (repeatable)")->required();
    add_common(gen, false);

    auto* detect = app.add_subcommand("detect", "scan an image and flag blur zeros");
    detect->add_option("--image", cfg.image_path, "observed image file")->required();
    add_common(detect, true);

    auto* rest = app.add_subcommand("restore", "reconstruct the blur and restore the image");
    rest->add_option("--image", cfg.image_path, "observed image file")->required();
    rest->add_option("--m-tot", cfg.m_tot, "combined blur width (0 = infer from counts)");
    rest->add_option("--n-tot", cfg.n_tot, "combined blur height (0 = infer from counts)");
    add_common(rest, true);

    auto* pipe = app.add_subcommand("pipeline", "gen + detect + restore, then compare");
    pipe->add_option("--true", cfg.true_path, "true image file")->required();
    pipe->add_option("--blur", cfg.blur_paths, "blur kernel file (repeatable)")->required();
    pipe->add_option("--m-tot", cfg.m_tot, "combined blur width (0 = infer)");
    pipe->add_option("--n-tot", cfg.n_tot, "combined blur height (0 = infer)");
    add_common(pipe, true);

    auto* self = app.add_subcommand("selftest", "run the property suites");
    self->add_option("--seed", cfg.seed, "random seed for synthetic data");
    self->add_option("--eps-ce", cfg.eps_ce, "relative zero threshold");
    self->add_option("--precision", cfg.precision, "double or extended")
        ->check(CLI::IsMember({"double", "extended"}));
    self->add_option("--rho-u", cfg.rho_u, "evaluation radius in u");
    self->add_option("--rho-v", cfg.rho_v, "evaluation radius in v");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (gen->parsed()) return cmd_gen(cfg);
        if (detect->parsed()) return cmd_detect(cfg);
        if (rest->parsed()) return cmd_restore(cfg);
        if (pipe->parsed()) return cmd_pipeline(cfg);
        if (self->parsed()) return cmd_selftest(cfg);
    } catch (const inconsistent_counts_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace lbd::cli
