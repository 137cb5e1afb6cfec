#include <catch2/catch.hpp>

#include <cmath>

#include "spherewave/diagnostics.hpp"

using namespace spherewave;

namespace {

double parseval_l2(const WaveletSpec& spec)
{
    double acc = 0.0;
    const double N = spec.bandwidth;
    for (int n = 1; n <= 2 * spec.bandwidth - 1; ++n) {
        const double k = kappa(spec.filter, n / N);
        acc += dim_harmonic({spec.d, n}) * k * k;
    }
    return std::sqrt(acc);
}

} // namespace

TEST_CASE("l2 norm: quadrature agrees with the coefficient form")
{
    const FilterProfile filt = FilterProfile::smooth_bump();
    for (int d : {3, 4}) {
        for (int K : {0, 1, 4}) {
            for (int N : {8, 16}) {
                const WaveletSpec spec{d, K == 0 ? DirectionalProfile::zonal()
                                                 : (d == 3 ? d3_equal_split_profile(K) : optimal_profile(d, K)),
                                       filt, N};
                const double expect = parseval_l2(spec);
                INFO("d=" << d << " K=" << K << " N=" << N);
                CHECK(lp_norm(spec, 2.0) == Approx(expect).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("norm growth with bandwidth follows the expected exponents")
{
    const FilterProfile filt = FilterProfile::smooth_bump();
    for (int d : {3, 4}) {
        const WaveletSpec lo{d, DirectionalProfile::zonal(), filt, 16};
        const WaveletSpec hi{d, DirectionalProfile::zonal(), filt, 32};
        // sup norm multiplies by about 2^{d-1}
        const double supr = lp_norm(hi, std::numeric_limits<double>::infinity()) /
                            lp_norm(lo, std::numeric_limits<double>::infinity());
        CHECK(supr > std::pow(2.0, d - 1) / 2.0);
        CHECK(supr < std::pow(2.0, d - 1) * 2.0);
        // L1 norm stays bounded
        const double l1r = lp_norm(hi, 1.0) / lp_norm(lo, 1.0);
        CHECK(l1r > 0.5);
        CHECK(l1r < 2.0);
    }
}

TEST_CASE("localization profiles")
{
    const FilterProfile filt = FilterProfile::smooth_bump();
    for (int d : {3, 4}) {
        double prev_peak = 0.0;
        double prev_ratio = 0.0;
        for (int N : {16, 32}) {
            const WaveletSpec spec{d, DirectionalProfile::zonal(), filt, N};
            const LocalizationReport rep = localization_profile(spec, 12);
            // peak sits in the first band
            CHECK(rep.annuli.front().sup == Approx(rep.peak()));
            if (prev_peak > 0.0) {
                const double ratio = rep.peak() / prev_peak;
                CHECK(ratio > std::pow(2.0, d - 1) / 2.0);
                CHECK(ratio < std::pow(2.0, d));
                // normalized decay ratios do not grow with the bandwidth
                CHECK(rep.max_ratio() <= 1.15 * prev_ratio);
            }
            prev_peak = rep.peak();
            prev_ratio = rep.max_ratio();
        }
    }
    // directional profile: the phi sweep changes nothing for K = 0
    const WaveletSpec zon{3, DirectionalProfile::zonal(), filt, 8};
    detail::SliceEvaluator ev(zon);
    ev.load_t(0.4);
    CHECK(ev.value(0.3).real() == Approx(ev.value(2.9).real()));
}

TEST_CASE("auto-correlation against the coefficient form")
{
    const FilterProfile filt = FilterProfile::smooth_bump();
    // symmetric optimal tables: the angular profile collapses to cos^{K_n}
    for (int K : {1, 2}) {
        const WaveletSpec spec{4, optimal_profile(4, K), filt, 8};
        const double ac0 = autocorrelation(spec, 0.0).real();
        const double l2 = parseval_l2(spec);
        CHECK(ac0 == Approx(l2 * l2).epsilon(1e-10));
        for (int i = 0; i < 20; ++i) {
            const double angle = pi * (i + 0.5) / 20.0;
            const cplx q = autocorrelation(spec, angle);
            const cplx c = autocorrelation_closed(spec, angle);
            INFO("K=" << K << " angle=" << angle);
            CHECK(std::abs(q - c) <= 1e-9 * std::abs(autocorrelation_closed(spec, 0.0)));
        }
    }
    // d3 with an intentionally lopsided table: catches azimuth conventions
    {
        std::vector<std::vector<cplx>> rows(1);
        rows[0] = {cplx(0.0), cplx(0.0), cplx(1.0)}; // all weight at k = +1
        const WaveletSpec spec{3, DirectionalProfile::custom_d3(1, rows), filt, 4};
        for (double angle : {0.3, 1.1, 2.5}) {
            const cplx q = autocorrelation(spec, angle);
            const cplx c = autocorrelation_closed(spec, angle);
            CHECK(std::abs(q - c) < 1e-10 * std::abs(c));
        }
    }
    // structural invariance: once N/2 > K the normalized profile is fixed
    {
        const int K = 2;
        const WaveletSpec a{4, optimal_profile(4, K), filt, 8};
        const WaveletSpec b{4, optimal_profile(4, K), filt, 16};
        for (double angle : {0.4, 1.0, 2.0}) {
            const double na = (autocorrelation_closed(a, angle) / autocorrelation_closed(a, 0.0)).real();
            const double nb = (autocorrelation_closed(b, angle) / autocorrelation_closed(b, 0.0)).real();
            CHECK(na == Approx(nb).margin(1e-12));
            CHECK(na == Approx(std::pow(std::cos(angle), K)).margin(1e-12));
        }
    }
}

TEST_CASE("steering")
{
    const FilterProfile filt = FilterProfile::smooth_bump();
    // interpolation node: exact reproduction
    {
        const int K = 2;
        const WaveletSpec spec{3, d3_equal_split_profile(K), filt, 8};
        const double node = 2.0 * pi * 2.0 / (2 * K + 1);
        CHECK(steer_check(spec, so2_rotation(node)) < 1e-12);
    }
    // generic rotations reproduce once the orientation count reaches 2K+1
    {
        const int K = 3;
        const WaveletSpec spec{3, d3_equal_split_profile(K), filt, 8};
        CHECK(steer_check(spec, so2_rotation(0.77)) < 1e-9);
        CHECK(steer_check(spec, so2_rotation(0.77), 2 * K - 1) > 1e-6); // aliased
    }
    // symmetric steering for d = 4
    {
        const int K = 2;
        const WaveletSpec spec{4, optimal_profile(4, K), filt, 8};
        Rotation h = Rotation::identity(4);
        const double a = 0.9;
        h.at(1, 1) = std::cos(a);
        h.at(1, 2) = -std::sin(a);
        h.at(2, 1) = std::sin(a);
        h.at(2, 2) = std::cos(a);
        CHECK(steer_check(spec, h) < 1e-9);
    }
    // rotations that move the pole are rejected
    {
        const WaveletSpec spec{3, d3_equal_split_profile(1), filt, 4};
        CHECK_THROWS_AS(steer_check(spec, rotation_to_north(SpherePoint::from_angles(3, {0.3, 1.0}))),
                        std::invalid_argument);
    }
}

TEST_CASE("slice grids")
{
    const FilterProfile filt = FilterProfile::smooth_bump();
    for (int K : {1, 4}) {
        const WaveletSpec spec{4, optimal_profile(4, K), filt, 16};
        const PsiGrid grid = fig1_grid(spec, 80, 32);
        REQUIRE(grid.rescaled);
        double peak = 0.0;
        for (double v : grid.values) peak = std::max(peak, std::abs(v));
        CHECK(peak == Approx(1.0));
        // sign symmetry under phi -> phi + pi
        const std::size_t half = grid.phi.size() / 2;
        for (std::size_t i = 0; i < grid.t.size(); ++i) {
            for (std::size_t j = 0; j < grid.phi.size(); ++j) {
                const double a = grid.values[i * grid.phi.size() + j];
                const double b = grid.values[i * grid.phi.size() + ((j + half) % grid.phi.size())];
                CHECK(a == Approx((K % 2 == 0 ? 1.0 : -1.0) * b).margin(1e-9));
            }
        }
    }
    // radial shrink under bandwidth doubling
    const WaveletSpec s16{4, optimal_profile(4, 4), filt, 16};
    const WaveletSpec s32{4, optimal_profile(4, 4), filt, 32};
    const double w16 = main_lobe_fwhm(fig1_grid(s16, 400, 16));
    const double w32 = main_lobe_fwhm(fig1_grid(s32, 400, 16));
    const double shrink = w32 / w16;
    CHECK(shrink > 0.4);
    CHECK(shrink < 0.6);

    // the global maximum concentrates at small colatitudes
    const WaveletSpec s64{4, optimal_profile(4, 4), filt, 64};
    const PsiGrid g64 = fig1_grid(s64, 320, 16);
    std::size_t imax = 0, jmax = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < g64.t.size(); ++i)
        for (std::size_t j = 0; j < g64.phi.size(); ++j)
            if (std::abs(g64.values[i * g64.phi.size() + j]) > best) {
                best = std::abs(g64.values[i * g64.phi.size() + j]);
                imax = i;
                jmax = j;
            }
    (void)jmax;
    CHECK(imax < g64.t.size() / 8);
}
