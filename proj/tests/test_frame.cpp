#include <catch2/catch.hpp>

#include <cmath>
#include <random>

#include "spherewave/frame.hpp"
#include "spherewave/io.hpp"

using namespace spherewave;

namespace {

DirectionalProfile profile_for(int d, int K)
{
    if (K == 0) return DirectionalProfile::zonal();
    return d == 3 ? d3_equal_split_profile(K) : optimal_profile(d, K);
}

} // namespace

TEST_CASE("frame structure")
{
    const Frame fr(3, 2, 3, FilterProfile::smooth_bump(), d3_equal_split_profile(2));
    CHECK(fr.atom_count(0) == 1);
    // d=3, K=2: five stabilizer nodes once 2^j >= 2
    CHECK(fr.scale(1).directions.count() == 5);
    CHECK(fr.scale(2).directions.count() == 5);
    CHECK(fr.scale(3).directions.count() == 5);
    for (int j = 1; j <= 3; ++j) {
        const auto& sc = fr.scale(j);
        CHECK(sc.positions.exact_degree() == (1 << (j + 1)));
        for (std::size_t i = 0; i < std::min<std::size_t>(sc.atom_count(), 10); ++i) {
            const FrameAtom a = fr.atom(j, i);
            CHECK(a.weight > 0.0);
            CHECK(a.g.det() == Approx(1.0).margin(1e-12));
        }
    }
    // zonal frames carry no stabilizer factor
    const Frame zf(4, 0, 2, FilterProfile::smooth_bump(), DirectionalProfile::zonal());
    for (int j = 1; j <= 2; ++j) CHECK(zf.atom_count(j) == zf.scale(j).positions.size());
    // atom counts grow like 2^{j(d-1)}
    for (int d : {3, 4}) {
        const Frame f(d, 0, 4, FilterProfile::smooth_bump(), DirectionalProfile::zonal());
        for (int j = 2; j <= 4; ++j) {
            const double ratio = static_cast<double>(f.atom_count(j)) / f.atom_count(j - 1);
            CHECK(ratio > std::pow(2.0, d - 1) / 2.5);
            CHECK(ratio < std::pow(2.0, d - 1) * 2.5);
        }
    }
    CHECK_THROWS_AS(Frame(4, 2, 2, FilterProfile::smooth_bump(), d3_equal_split_profile(2)), std::invalid_argument);
}

TEST_CASE("fast analysis equals per-atom quadrature")
{
    struct Case {
        int d, K, J;
        int deg;
    };
    for (const Case c : {Case{3, 0, 2, 3}, Case{3, 1, 2, 3}, Case{3, 2, 2, 4}, Case{4, 0, 2, 3}, Case{4, 1, 2, 3},
                         Case{4, 2, 1, 2}, Case{5, 1, 1, 2}}) {
        const Frame fr(c.d, c.K, c.J, FilterProfile::smooth_bump(), profile_for(c.d, c.K));
        const CoefficientVector f = random_signal(c.d, c.deg, 1234 + c.d + 10 * c.K);
        const FrameCoefficients fast = analyze(fr, f);
        const FrameCoefficients slow = detail::analyze_reference(fr, f);
        CHECK(fast.scale0() == slow.scale0());
        for (int j = 1; j <= c.J; ++j) {
            double worst = 0.0;
            for (std::size_t i = 0; i < fr.atom_count(j); ++i)
                worst = std::max(worst, std::abs(fast.get(j, i) - slow.get(j, i)));
            INFO("d=" << c.d << " K=" << c.K << " j=" << j);
            CHECK(worst < 1e-11);
        }
    }
}

TEST_CASE("constants land in the scale-0 coefficient only")
{
    const Frame fr(3, 1, 3, FilterProfile::smooth_bump(), d3_equal_split_profile(1));
    CoefficientVector f(3);
    f.set({3, 0, {0}}, cplx(0.7, -0.2));
    const FrameCoefficients c = analyze(fr, f);
    CHECK(c.scale0() == cplx(0.7, -0.2));
    for (int j = 1; j <= 3; ++j)
        for (std::size_t i = 0; i < fr.atom_count(j); ++i) CHECK(std::abs(c.get(j, i)) < 1e-14);
}

TEST_CASE("tight frame identity at desk scale")
{
    struct Case {
        int d, K, J;
    };
    for (const Case c : {Case{3, 0, 3}, Case{3, 2, 3}, Case{4, 1, 2}, Case{4, 2, 2}}) {
        const Frame fr(c.d, c.K, c.J, FilterProfile::smooth_bump(), profile_for(c.d, c.K));
        std::vector<CoefficientVector> sigs;
        for (int s = 0; s < 3; ++s) sigs.push_back(random_signal(c.d, 1 << (c.J - 1), 100 + s));
        const auto gaps = parseval_gaps(fr, sigs);
        for (double g : gaps) {
            INFO("d=" << c.d << " K=" << c.K << " J=" << c.J);
            CHECK(g < 1e-10);
        }
        // basis vector
        const auto idxs = enumerate_indices(c.d, 1 << (c.J - 1));
        CoefficientVector e(c.d);
        e.set(idxs[idxs.size() / 2], 1.0);
        CHECK(parseval_gap(fr, e) < 1e-10);
    }
    // corrupted weights must break the identity: scaling every weight by
    // 1.05 scales all scale >= 1 energies by 1.05
    const Frame fr(3, 1, 3, FilterProfile::smooth_bump(), d3_equal_split_profile(1));
    const CoefficientVector f = random_signal(3, 4, 7);
    const FrameCoefficients c = analyze(fr, f);
    double corrupted = std::norm(c.scale0());
    for (int j = 1; j <= 3; ++j)
        for (std::size_t i = 0; i < fr.atom_count(j); ++i) corrupted += 1.05 * std::norm(c.get(j, i));
    CHECK(std::abs(corrupted - f.norm2()) / f.norm2() > 1e-3);

    CHECK_THROWS_AS(parseval_gap(fr, CoefficientVector(3)), std::domain_error);
}

TEST_CASE("analysis preconditions")
{
    const Frame fr(3, 0, 2, FilterProfile::smooth_bump(), DirectionalProfile::zonal());
    CHECK_THROWS_AS(analyze(fr, random_signal(4, 2, 1)), std::domain_error);
    CHECK_THROWS_AS(analyze(fr, random_signal(3, fr.bandwidth() + 1, 1)), std::domain_error);
    CHECK_NOTHROW(analyze(fr, random_signal(3, fr.bandwidth(), 1)));
}

TEST_CASE("round trip reconstructs band-limited signals")
{
    struct Case {
        int d, K, J;
    };
    for (const Case c : {Case{3, 0, 3}, Case{3, 2, 3}, Case{4, 1, 2}, Case{4, 2, 2}, Case{5, 1, 2}}) {
        const Frame fr(c.d, c.K, c.J, FilterProfile::smooth_bump(), profile_for(c.d, c.K));
        const int deg = 1 << (c.J - 1);
        const CoefficientVector f = random_signal(c.d, deg, 42);
        const CoefficientVector g = synthesize(fr, analyze(fr, f), deg);
        double worst = 0.0;
        for (int n = 0; n <= deg; ++n)
            for (const auto& idx : enumerate_indices(c.d, n)) worst = std::max(worst, std::abs(g.get(idx) - f.get(idx)));
        INFO("d=" << c.d << " K=" << c.K << " J=" << c.J);
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("synthesis is linear and vanishes on zero input")
{
    const Frame fr(3, 1, 2, FilterProfile::smooth_bump(), d3_equal_split_profile(1));
    const CoefficientVector f1 = random_signal(3, 2, 5);
    const CoefficientVector f2 = random_signal(3, 2, 6);
    FrameCoefficients c1 = analyze(fr, f1);
    FrameCoefficients c2 = analyze(fr, f2);
    FrameCoefficients zero(fr);
    CHECK(synthesize(fr, zero, 3).empty());
    const cplx a(0.3, -1.1), b(2.0, 0.4);
    FrameCoefficients mix(fr);
    mix.scale0() = a * c1.scale0() + b * c2.scale0();
    for (int j = 1; j <= 2; ++j)
        for (std::size_t i = 0; i < fr.atom_count(j); ++i) mix.set(j, i, a * c1.get(j, i) + b * c2.get(j, i));
    const CoefficientVector lhs = synthesize(fr, mix, 3);
    CoefficientVector rhs = synthesize(fr, c1, 3);
    rhs *= a;
    CoefficientVector rb = synthesize(fr, c2, 3);
    rb *= b;
    rhs += rb;
    for (const auto& [idx, v] : rhs.entries()) CHECK(std::abs(lhs.get(idx) - v) < 1e-12);
}

TEST_CASE("single-scale sums reproduce the squared band-pass filter")
{
    for (int d : {3, 4}) {
        const int K = d == 3 ? 2 : 1;
        const int J = 3;
        const Frame fr(d, K, J, FilterProfile::smooth_bump(), profile_for(d, K));
        const int deg = 1 << (J - 1);
        const CoefficientVector f = random_signal(d, deg, 99);
        const FrameCoefficients c = analyze(fr, f);
        for (int j = 1; j <= J; ++j) {
            FrameCoefficients mask(fr);
            mask.at_scale(j) = c.at_scale(j);
            const CoefficientVector part = synthesize(fr, mask, deg);
            for (int n = 0; n <= deg; ++n) {
                const double kap = kappa(fr.filter(), n / std::pow(2.0, j - 1));
                for (const auto& idx : enumerate_indices(d, n)) {
                    const cplx expect = kap * kap * f.get(idx);
                    CHECK(std::abs(part.get(idx) - expect) < 1e-10);
                }
            }
        }
    }
}

TEST_CASE("partial-expansion operator")
{
    const int d = 3, K = 1, J_max = 3;
    const Frame fr(d, K, J_max, FilterProfile::smooth_bump(), d3_equal_split_profile(K));
    const int J = J_max - 1;
    std::mt19937_64 rng(2024);

    // projector on low degrees, random atom subsets
    const CoefficientVector f = random_signal(d, 1 << (J - 1), 11);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<std::size_t> omega;
        for (std::size_t i = 0; i < fr.atom_count(J + 1); ++i)
            if (rng() % 4 == 0) omega.push_back(i);
        const CoefficientVector g = lambda_operator(fr, f, J, omega);
        for (const auto& [idx, v] : f.entries()) CHECK(std::abs(g.get(idx) - v) < 1e-9);
        double extra = 0.0;
        for (const auto& [idx, v] : g.entries())
            if (f.get(idx) == cplx(0.0)) extra = std::max(extra, std::abs(v));
        CHECK(extra < 1e-9);
    }

    // empty selection: pure low-pass filtering
    const CoefficientVector h = random_signal(d, 1 << J_max, 12);
    const CoefficientVector lp = lambda_operator(fr, h, J, {});
    for (const auto& [idx, v] : h.entries()) {
        const double p = phi(fr.filter(), idx.n / std::pow(2.0, J));
        CHECK(std::abs(lp.get(idx) - v * p * p) < 1e-12);
    }

    // full selection: spectral multiplier phi^2(n / 2^{J+1})
    const CoefficientVector u = random_signal(d, 1 << J, 13);
    std::vector<std::size_t> full(fr.atom_count(J + 1));
    for (std::size_t i = 0; i < full.size(); ++i) full[i] = i;
    const CoefficientVector lam = lambda_operator(fr, u, J, full);
    for (const auto& [idx, v] : u.entries()) {
        const double p = phi(fr.filter(), idx.n / std::pow(2.0, J + 1));
        CHECK(std::abs(lam.get(idx) - v * p * p) < 1e-9);
    }

    CHECK_THROWS_AS(lambda_operator(fr, f, J_max, {}), std::domain_error);
    CHECK_THROWS_AS(lambda_operator(fr, f, J, {fr.atom_count(J + 1)}), std::out_of_range);
}

TEST_CASE("analysis is equivariant under explicit rotations")
{
    // analyzing T(g) f against the frame equals pairing f with the
    // g-shifted atoms
    const int d = 3;
    const Frame fr(d, 1, 2, FilterProfile::smooth_bump(), d3_equal_split_profile(1));
    const CoefficientVector f = random_signal(d, 2, 17);
    const Rotation g = rotation_to_north(SpherePoint::from_angles(3, {1.1, 0.8})).compose(so2_rotation(0.6));

    // coefficients of T(g) f by projection quadrature
    const SphereRule rule(d - 1, 2 * f.max_degree());
    CoefficientVector tf(d);
    for (int n = 0; n <= f.max_degree(); ++n) {
        for (const auto& idx : enumerate_indices(d, n)) {
            const cplx v = integrate(rule, [&](const SpherePoint& p) {
                return f.eval(g.apply_inverse(p)) * std::conj(eval_harmonic(idx, p));
            });
            if (std::abs(v) > 1e-14) tf.set(idx, v);
        }
    }
    const FrameCoefficients left = analyze(fr, tf);
    const CoefficientVector w = wavelet_coeffs(fr.scale(2).wavelet);
    const SphereRule ip_rule(d - 1, f.max_degree() + w.max_degree());
    for (std::size_t i : {std::size_t(0), fr.atom_count(2) / 2, fr.atom_count(2) - 1}) {
        const FrameAtom atom = fr.atom(2, i);
        // <T(g) f, T(g_atom) Psi> = <f, T(g^{-1} g_atom) Psi>
        const Rotation shifted = g.transposed().compose(atom.g);
        const cplx direct = std::sqrt(atom.weight) * integrate(ip_rule, [&](const SpherePoint& p) {
                                return f.eval(p) * std::conj(w.eval(shifted.apply_inverse(p)));
                            });
        CHECK(std::abs(left.get(2, i) - direct) < 1e-10);
    }
}

TEST_CASE("product-grid sums match the group integral")
{
    // The frame grids integrate products of two wavelet transforms exactly;
    // a finer independent grid must produce the same value.
    for (int d : {3, 4}) {
        const int K = 1, j = 2;
        const Frame fr(d, K, j, FilterProfile::smooth_bump(), profile_for(d, K));
        const CoefficientVector u1 = random_signal(d, 3, 21);
        const CoefficientVector u2 = random_signal(d, 3, 22);
        const auto c1 = analyze(fr, u1);
        const auto c2 = analyze(fr, u2);
        cplx lhs = 0.0;
        for (std::size_t i = 0; i < fr.atom_count(j); ++i) lhs += c1.get(j, i) * c2.get(j, i);

        // finer grids: degree-doubled positions, degree+2 stabilizer
        const FrameScale& sc = fr.scale(j);
        const SphereRule fine_pos(d - 1, 2 * sc.positions.exact_degree());
        const DirectionalRule fine_dir =
            d == 3 ? DirectionalRule::so2(2 * K + 1) : DirectionalRule::on_sphere(d, 2 * K + 1);
        const int deg = std::max(u1.max_degree(), u2.max_degree());
        const auto C = detail::make_scale_context(d, j, sc.wavelet, fine_pos, fine_dir, deg, deg);
        REQUIRE(C.active());
        const detail::ComponentSet comps(sc.wavelet, fine_dir, deg);
        std::vector<std::vector<cplx>> tabs{detail::ring_table(u1, C), detail::ring_table(u2, C)};
        const std::size_t A = fine_pos.azimuth_count();
        const std::size_t r = fine_dir.count();
        std::vector<cplx> v1(fine_pos.size() * r), v2(fine_pos.size() * r);
        detail::analyze_scale_on_rules(C, comps, tabs, [&](std::size_t sig, std::size_t b, const std::vector<cplx>& s) {
            auto& dst = sig == 0 ? v1 : v2;
            std::copy(s.begin(), s.end(), dst.begin() + b * A * r);
        });
        const cplx rhs = detail::pairwise_sum<cplx>(0, v1.size(), [&](std::size_t i) { return v1[i] * v2[i]; });
        INFO("d=" << d);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)));
    }
}

TEST_CASE("frame coefficient files round-trip")
{
    const Frame fr(3, 1, 2, FilterProfile::smooth_bump(), d3_equal_split_profile(1));
    const FrameCoefficients c = analyze(fr, random_signal(3, 2, 31));
    const std::string path = "frame_coeffs_test.txt";
    write_frame_coeffs(c, path);
    const FrameCoefficients back = read_frame_coeffs(fr, path);
    CHECK(back.scale0() == c.scale0());
    for (int j = 1; j <= 2; ++j)
        for (std::size_t i = 0; i < fr.atom_count(j); ++i) CHECK(back.get(j, i) == c.get(j, i));
    std::remove(path.c_str());
}
