// Command-line front end: builds frames, runs analysis/synthesis on
// coefficient files, and drives the verification and diagnostic routines.
// Every subcommand is deterministic given its flags and --seed. Exit codes:
// 0 success, 1 tolerance violation in `verify`, 2 usage error.

#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "spherewave/diagnostics.hpp"
#include "spherewave/frame.hpp"
#include "spherewave/io.hpp"

namespace sw = spherewave;

namespace {

struct CommonOpts {
    int d = 3;
    int K = 0;
    std::string filter = "bump";
    int q = 3;
    std::string profile = "auto";
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_profile = true)
{
    cmd->add_option("--d", o.d, "ambient dimension (sphere lives in R^d)")->check(CLI::Range(3, 8));
    cmd->add_option("--K", o.K, "directionality order")->check(CLI::Range(0, 64));
    cmd->add_option("--filter", o.filter, "cutoff shape: bump | spline")
        ->check(CLI::IsMember({"bump", "spline"}));
    cmd->add_option("--q", o.q, "spline smoothness order");
    if (with_profile)
        cmd->add_option("--profile", o.profile,
                        "zonal | optimal | custom:PATH (default: zonal for K=0, optimal for d>=4, "
                        "equal-split for d=3)");
}

sw::FilterProfile make_filter(const CommonOpts& o)
{
    return o.filter == "bump" ? sw::FilterProfile::smooth_bump() : sw::FilterProfile::spline(o.q);
}

sw::DirectionalProfile make_profile(const CommonOpts& o)
{
    if (o.profile.rfind("custom:", 0) == 0) return sw::read_profile(o.profile.substr(7));
    if (o.profile == "zonal" || o.K == 0) return sw::DirectionalProfile::zonal();
    if (o.profile == "optimal") return sw::optimal_profile(o.d, o.K);
    if (o.profile != "auto") throw std::runtime_error("unrecognized profile " + o.profile);
    return o.d == 3 ? sw::d3_equal_split_profile(o.K) : sw::optimal_profile(o.d, o.K);
}

int run_verify_parseval(const CommonOpts& o, int J_max, int signals, std::uint64_t seed, double tol)
{
    const sw::Frame fr(o.d, o.K, J_max, make_filter(o), make_profile(o));
    std::vector<sw::CoefficientVector> sigs;
    for (int s = 0; s < signals; ++s) sigs.push_back(sw::random_signal(o.d, 1 << (J_max - 1), seed + s));
    const auto gaps = sw::parseval_gaps(fr, sigs);
    std::printf("# tight-frame defects, d=%d K=%d Jmax=%d atoms=%zu\n", o.d, o.K, J_max, fr.total_atoms());
    std::printf("%-8s %-12s %s\n", "signal", "seed", "relative_gap");
    bool ok = true;
    for (int s = 0; s < signals; ++s) {
        std::printf("%-8d %-12llu %.3e\n", s, static_cast<unsigned long long>(seed + s), gaps[s]);
        ok = ok && gaps[s] < tol;
    }
    std::printf("# tolerance %.3e: %s\n", tol, ok ? "pass" : "FAIL");
    return ok ? 0 : 1;
}

int run_verify_quad(int d, int N, int pairs, std::uint64_t seed, double tol)
{
    const sw::SphereRule rule(d - 1, N);
    std::vector<sw::HarmonicIndex> all;
    for (int n = 0; 2 * n <= N; ++n)
        for (auto& idx : sw::enumerate_indices(d, n)) all.push_back(idx);
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int t = 0; t < pairs; ++t) {
        const auto& a = all[rng() % all.size()];
        const auto& b = all[rng() % all.size()];
        const sw::cplx g = sw::integrate(rule, [&](const sw::SpherePoint& p) {
            return sw::eval_harmonic(a, p) * std::conj(sw::eval_harmonic(b, p));
        });
        worst = std::max(worst, std::abs(g - (a == b ? sw::cplx(1.0) : sw::cplx(0.0))));
    }
    std::printf("# gram deltas, d=%d rule degree %d, nodes=%zu, %d random pairs\n", d, N, rule.size(), pairs);
    std::printf("worst |gram - delta|: %.3e (tolerance %.3e): %s\n", worst, tol, worst < tol ? "pass" : "FAIL");
    return worst < tol ? 0 : 1;
}

int run_verify_addition(int d, int nmax, int trials, std::uint64_t seed, double tol)
{
    std::mt19937_64 rng(seed);
    auto rand_unit = [&]() {
        std::vector<double> x(d);
        double n2 = 0.0;
        do {
            n2 = 0.0;
            for (int i = 0; i < d; ++i) {
                const double u1 = ((rng() >> 11) + 0.5) * 0x1p-53;
                const double u2 = ((rng() >> 11) + 0.5) * 0x1p-53;
                x[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * sw::pi * u2);
                n2 += x[i] * x[i];
            }
        } while (n2 < 1e-8);
        for (double& v : x) v /= std::sqrt(n2);
        return sw::SpherePoint::from_cartesian(x);
    };
    double worst = 0.0;
    for (int n = 0; n <= nmax; ++n) {
        const auto idxs = sw::enumerate_indices(d, n);
        for (int t = 0; t < trials; ++t) {
            const auto eta = rand_unit();
            const auto nu = rand_unit();
            sw::cplx acc = 0.0;
            for (const auto& idx : idxs) acc += sw::eval_harmonic(idx, eta) * std::conj(sw::eval_harmonic(idx, nu));
            double dot = 0.0;
            for (int i = 0; i < d; ++i) dot += eta.cartesian()[i] * nu.cartesian()[i];
            dot = std::max(-1.0, std::min(1.0, dot));
            worst = std::max(worst, std::abs(acc - sw::addition_kernel(d, n, dot)));
        }
    }
    std::printf("# reproducing-kernel identity, d=%d degrees 0..%d, %d pairs each\n", d, nmax, trials);
    std::printf("worst pointwise error: %.3e (tolerance %.3e): %s\n", worst, tol, worst < tol ? "pass" : "FAIL");
    return worst < tol ? 0 : 1;
}

int run_verify_telescope(const CommonOpts& o, int J, double tol)
{
    const sw::FilterProfile f = make_filter(o);
    double worst = 0.0;
    for (int n = 0; n <= (1 << (J + 1)); ++n) {
        double acc = sw::phi(f, static_cast<double>(n)) * sw::phi(f, static_cast<double>(n));
        for (int j = 1; j <= J; ++j) {
            const double k = sw::kappa(f, n / std::pow(2.0, j - 1));
            acc += k * k;
        }
        const double expect = sw::phi(f, n / std::pow(2.0, J)) * sw::phi(f, n / std::pow(2.0, J));
        worst = std::max(worst, std::abs(acc - expect));
    }
    std::printf("# dyadic band telescope through level %d\n", J);
    std::printf("worst defect: %.3e (tolerance %.3e): %s\n", worst, tol, worst < tol ? "pass" : "FAIL");
    return worst < tol ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"spherewave: directional wavelet tight frames on spheres"};
    app.require_subcommand(1);

    // ---------------------------------------------------------- build-frame
    CommonOpts fo;
    int fo_jmax = 3;
    std::string fo_out = "frame.txt";
    auto* cmd_frame = app.add_subcommand("build-frame", "construct a frame and write its description");
    add_common(cmd_frame, fo);
    cmd_frame->add_option("--Jmax", fo_jmax, "finest dyadic scale")->check(CLI::Range(0, 16));
    cmd_frame->add_option("--out", fo_out, "output path");

    // -------------------------------------------------------------- analyze
    CommonOpts ao;
    int ao_jmax = 3;
    std::string ao_in, ao_out = "frame_coeffs.txt", ao_frame;
    auto* cmd_an = app.add_subcommand("analyze", "frame coefficients of a signal file");
    add_common(cmd_an, ao);
    cmd_an->add_option("--Jmax", ao_jmax, "finest dyadic scale")->check(CLI::Range(0, 16));
    cmd_an->add_option("--in", ao_in, "input coefficient file")->required();
    cmd_an->add_option("--out", ao_out, "output frame-coefficient file");
    cmd_an->add_option("--frame", ao_frame, "frame description file (overrides the frame flags)");

    // ----------------------------------------------------------- synthesize
    CommonOpts so;
    int so_jmax = 3, so_outdeg = -1;
    std::string so_in, so_out = "coeffs.txt", so_frame;
    auto* cmd_sy = app.add_subcommand("synthesize", "weighted atom sum of a frame-coefficient file");
    add_common(cmd_sy, so);
    cmd_sy->add_option("--Jmax", so_jmax, "finest dyadic scale")->check(CLI::Range(0, 16));
    cmd_sy->add_option("--in", so_in, "input frame-coefficient file")->required();
    cmd_sy->add_option("--out", so_out, "output coefficient file");
    cmd_sy->add_option("--outdeg", so_outdeg, "output degree (default 2^{Jmax-1})");
    cmd_sy->add_option("--frame", so_frame, "frame description file (overrides the frame flags)");

    // --------------------------------------------------------------- verify
    auto* cmd_v = app.add_subcommand("verify", "quantitative identity checks (exit 1 on violation)");
    cmd_v->require_subcommand(1);
    CommonOpts vo;
    int v_jmax = 4, v_signals = 5, v_N = 16, v_nmax = 8, v_trials = 20, v_pairs = 200, v_J = 6;
    std::uint64_t v_seed = 1;
    double v_tol = -1.0;
    auto* vp = cmd_v->add_subcommand("parseval", "tight-frame identity on seeded signals");
    add_common(vp, vo);
    vp->add_option("--Jmax", v_jmax)->check(CLI::Range(1, 16));
    vp->add_option("--signals", v_signals);
    vp->add_option("--seed", v_seed);
    vp->add_option("--tol", v_tol);
    auto* vq = cmd_v->add_subcommand("quad-exactness", "product-rule gram deltas");
    vq->add_option("--d", vo.d)->check(CLI::Range(3, 8));
    vq->add_option("--N", v_N, "rule degree");
    vq->add_option("--pairs", v_pairs);
    vq->add_option("--seed", v_seed);
    vq->add_option("--tol", v_tol);
    auto* va = cmd_v->add_subcommand("addition", "reproducing-kernel identity");
    va->add_option("--d", vo.d)->check(CLI::Range(3, 8));
    va->add_option("--nmax", v_nmax);
    va->add_option("--trials", v_trials);
    va->add_option("--seed", v_seed);
    va->add_option("--tol", v_tol);
    auto* vt = cmd_v->add_subcommand("telescope", "dyadic band telescope of the filter pair");
    vt->add_option("--filter", vo.filter)->check(CLI::IsMember({"bump", "spline"}));
    vt->add_option("--q", vo.q);
    vt->add_option("--J", v_J);
    vt->add_option("--tol", v_tol);

    // ------------------------------------------------------------- localize
    CommonOpts lo;
    int l_N = 16, l_annuli = 12;
    double l_qeff = -1.0;
    auto* cmd_loc = app.add_subcommand("localize", "decay profile over geodesic annuli");
    add_common(cmd_loc, lo);
    cmd_loc->add_option("--N", l_N, "bandwidth");
    cmd_loc->add_option("--annuli", l_annuli);
    cmd_loc->add_option("--qeff", l_qeff, "decay exponent offset (default K+4)");

    // ------------------------------------------------------------- autocorr
    CommonOpts co;
    co.d = 4;
    int c_N = 16, c_angles = 20;
    auto* cmd_ac = app.add_subcommand("autocorr", "directional auto-correlation: quadrature vs closed form");
    add_common(cmd_ac, co);
    cmd_ac->add_option("--N", c_N, "bandwidth");
    cmd_ac->add_option("--angles", c_angles, "number of sample angles in (0, pi)");

    // ---------------------------------------------------------------- steer
    CommonOpts st;
    st.d = 3;
    int s_N = 16, s_M = 0;
    double s_gamma = 0.7;
    auto* cmd_st = app.add_subcommand("steer", "steering residual from finitely many orientations");
    add_common(cmd_st, st);
    cmd_st->add_option("--N", s_N, "bandwidth");
    cmd_st->add_option("--gamma", s_gamma, "rotation angle");
    cmd_st->add_option("--M", s_M, "orientation count (default 2K+1 for d=3)");

    // ------------------------------------------------------------- psi-grid
    CommonOpts go;
    go.d = 4;
    int g_N = 32, g_nt = 160, g_nphi = 64;
    std::string g_out = "psi_grid.csv", g_pgm;
    auto* cmd_grid = app.add_subcommand("psi-grid", "two-variable slice samples (CSV, optional PGM)");
    add_common(cmd_grid, go);
    cmd_grid->add_option("--N", g_N, "bandwidth");
    cmd_grid->add_option("--nt", g_nt, "radial samples");
    cmd_grid->add_option("--nphi", g_nphi, "angular samples");
    cmd_grid->add_option("--out", g_out, "CSV output path");
    cmd_grid->add_option("--pgm", g_pgm, "optional PGM image path");

    // -------------------------------------------------------- random-signal
    int r_d = 3, r_deg = 4;
    std::uint64_t r_seed = 1;
    std::string r_out = "signal.txt";
    auto* cmd_rs = app.add_subcommand("random-signal", "seeded band-limited unit-norm test signal");
    cmd_rs->add_option("--d", r_d)->check(CLI::Range(3, 8));
    cmd_rs->add_option("--degree", r_deg)->check(CLI::Range(0, 4096));
    cmd_rs->add_option("--seed", r_seed);
    cmd_rs->add_option("--out", r_out);

    // ------------------------------------------------------------ rule-dump
    int rd_d = 3, rd_N = 8;
    std::string rd_out;
    auto* cmd_rd = app.add_subcommand("rule-dump", "sphere rule nodes: lines 'x_1 ... x_d weight'");
    cmd_rd->add_option("--d", rd_d)->check(CLI::Range(3, 8));
    cmd_rd->add_option("--N", rd_N, "exactness degree")->check(CLI::Range(0, 512));
    cmd_rd->add_option("--out", rd_out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*cmd_frame) {
            const sw::Frame fr(fo.d, fo.K, fo_jmax, make_filter(fo), make_profile(fo));
            sw::write_frame(fr, fo_out);
            std::printf("frame with %zu atoms written to %s\n", fr.total_atoms(), fo_out.c_str());
            return 0;
        }
        if (*cmd_an) {
            const sw::CoefficientVector f = sw::read_coeffs(ao_in);
            const sw::Frame fr = ao_frame.empty()
                                     ? sw::Frame(ao.d, ao.K, ao_jmax, make_filter(ao), make_profile(ao))
                                     : sw::read_frame(ao_frame);
            sw::write_frame_coeffs(sw::analyze(fr, f), ao_out);
            std::printf("frame coefficients written to %s\n", ao_out.c_str());
            return 0;
        }
        if (*cmd_sy) {
            const sw::Frame fr = so_frame.empty()
                                     ? sw::Frame(so.d, so.K, so_jmax, make_filter(so), make_profile(so))
                                     : sw::read_frame(so_frame);
            const sw::FrameCoefficients c = sw::read_frame_coeffs(fr, so_in);
            const int outdeg = so_outdeg >= 0 ? so_outdeg : (fr.max_scale() >= 1 ? (1 << (fr.max_scale() - 1)) : 0);
            sw::write_coeffs(sw::synthesize(fr, c, outdeg), so_out);
            std::printf("coefficients through degree %d written to %s\n", outdeg, so_out.c_str());
            return 0;
        }
        if (*vp) return run_verify_parseval(vo, v_jmax, v_signals, v_seed, v_tol > 0 ? v_tol : 1e-10);
        if (*vq) return run_verify_quad(vo.d, v_N, v_pairs, v_seed, v_tol > 0 ? v_tol : 1e-10);
        if (*va) return run_verify_addition(vo.d, v_nmax, v_trials, v_seed, v_tol > 0 ? v_tol : 1e-10);
        if (*vt) return run_verify_telescope(vo, v_J, v_tol > 0 ? v_tol : 1e-13);
        if (*cmd_loc) {
            const sw::WaveletSpec spec{lo.d, make_profile(lo), make_filter(lo), l_N};
            const auto rep = sw::localization_profile(spec, l_annuli, l_qeff);
            std::printf("# decay profile, d=%d K=%d N=%d q_eff=%.2f\n", lo.d, lo.K, l_N, rep.q_eff);
            std::printf("%-12s %-12s %-14s %s\n", "band_lo", "band_hi", "sup", "normalized_ratio");
            for (const auto& b : rep.annuli)
                std::printf("%-12.6f %-12.6f %-14.6e %.6e\n", b.lo, b.hi, b.sup, b.ratio);
            return 0;
        }
        if (*cmd_ac) {
            const sw::WaveletSpec spec{co.d, make_profile(co), make_filter(co), c_N};
            std::printf("# auto-correlation, d=%d K=%d N=%d\n", co.d, co.K, c_N);
            std::printf("%-10s %-24s %-24s %s\n", "angle", "quadrature", "closed_form", "abs_diff");
            double worst = 0.0;
            for (int i = 0; i <= c_angles; ++i) {
                const double a = sw::pi * i / c_angles;
                const sw::cplx q = sw::autocorrelation(spec, a);
                const sw::cplx c = sw::autocorrelation_closed(spec, a);
                worst = std::max(worst, std::abs(q - c));
                std::printf("%-10.5f %-24.15e %-24.15e %.3e\n", a, q.real(), c.real(), std::abs(q - c));
            }
            std::printf("# worst |difference|: %.3e\n", worst);
            return 0;
        }
        if (*cmd_st) {
            const sw::WaveletSpec spec{st.d, make_profile(st), make_filter(st), s_N};
            double err;
            if (st.d == 3) {
                err = sw::steer_check(spec, sw::so2_rotation(s_gamma), s_M);
            } else {
                sw::Rotation h = sw::Rotation::identity(st.d);
                h.at(st.d - 3, st.d - 3) = std::cos(s_gamma);
                h.at(st.d - 3, st.d - 2) = -std::sin(s_gamma);
                h.at(st.d - 2, st.d - 3) = std::sin(s_gamma);
                h.at(st.d - 2, st.d - 2) = std::cos(s_gamma);
                err = sw::steer_check(spec, h, s_M);
            }
            std::printf("steering residual (d=%d K=%d N=%d M=%s gamma=%.4f): %.3e\n", st.d, st.K, s_N,
                        s_M > 0 ? std::to_string(s_M).c_str() : "default", s_gamma, err);
            return 0;
        }
        if (*cmd_grid) {
            const sw::WaveletSpec spec{go.d, make_profile(go), make_filter(go), g_N};
            const sw::PsiGrid grid = sw::fig1_grid(spec, g_nt, g_nphi);
            sw::write_csv_grid(grid.t, grid.phi, grid.values, g_out);
            if (!g_pgm.empty()) sw::write_pgm_grid(grid.t.size(), grid.phi.size(), grid.values, g_pgm);
            std::printf("slice grid %dx%d written to %s (peak value %.6e before rescaling)\n", g_nt, g_nphi,
                        g_out.c_str(), grid.scale);
            return 0;
        }
        if (*cmd_rs) {
            sw::write_coeffs(sw::random_signal(r_d, r_deg, r_seed), r_out);
            std::printf("signal with %lld coefficients written to %s\n",
                        static_cast<long long>(sw::dim_poly({r_d, r_deg})), r_out.c_str());
            return 0;
        }
        if (*cmd_rd) {
            const sw::SphereRule rule(rd_d - 1, rd_N);
            std::FILE* out = rd_out.empty() ? stdout : std::fopen(rd_out.c_str(), "w");
            if (!out) throw std::runtime_error("rule-dump: cannot open " + rd_out);
            for (std::size_t i = 0; i < rule.size(); ++i) {
                const auto p = rule.point(i).cartesian();
                for (double v : p) std::fprintf(out, "%.17g ", v);
                std::fprintf(out, "%.17g\n", rule.weight(i));
            }
            if (out != stdout) std::fclose(out);
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
