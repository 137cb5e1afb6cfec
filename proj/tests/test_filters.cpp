#include <catch2/catch.hpp>

#include <cmath>
#include <random>

#include "spherewave/filters.hpp"

using namespace spherewave;

TEST_CASE("plateau values and monotonicity")
{
    for (const FilterProfile p : {FilterProfile::smooth_bump(), FilterProfile::spline(2), FilterProfile::spline(5)}) {
        CHECK(phi(p, 0.0) == 1.0);
        CHECK(phi(p, 0.25) == 1.0);
        CHECK(phi(p, 0.5) == 1.0);
        CHECK(phi(p, 1.0) == 0.0);
        CHECK(phi(p, 2.0) == 0.0);
        CHECK(phi(p, 0.75) > 0.0);
        CHECK(phi(p, 0.75) < 1.0);
        CHECK(phi(p, 0.75) > phi(p, 0.8));
        double prev = 1.0;
        for (int i = 1; i <= 200; ++i) {
            const double v = phi(p, 0.5 + 0.5 * i / 200.0);
            CHECK(v <= prev + 1e-15);
            prev = v;
        }
        CHECK_THROWS_AS(phi(p, -0.1), std::domain_error);
    }
}

TEST_CASE("kappa support and the two-scale identity")
{
    std::mt19937_64 rng(13);
    for (const FilterProfile p : {FilterProfile::smooth_bump(), FilterProfile::spline(3)}) {
        CHECK(kappa(p, 1.0) == Approx(1.0));
        CHECK(kappa(p, 0.4) == 0.0);
        CHECK(kappa(p, 3.0) == 0.0);
        for (int i = 0; i < 100; ++i) {
            const double t = 4.0 * ((rng() >> 11) * 0x1p-53);
            const double lhs = phi(p, t) * phi(p, t) + kappa(p, t) * kappa(p, t);
            CHECK(lhs == Approx(phi(p, 0.5 * t) * phi(p, 0.5 * t)).margin(1e-14));
        }
    }
}

TEST_CASE("dyadic telescoping")
{
    const FilterProfile p = FilterProfile::smooth_bump();
    for (int J = 0; J <= 8; ++J) {
        for (int n = 0; n <= (1 << (J + 1)); ++n) {
            double acc = phi(p, static_cast<double>(n)) * phi(p, static_cast<double>(n));
            for (int j = 1; j <= J; ++j) {
                const double k = kappa(p, n / std::pow(2.0, j - 1));
                acc += k * k;
            }
            const double expect = phi(p, n / std::pow(2.0, J)) * phi(p, n / std::pow(2.0, J));
            CHECK(acc == Approx(expect).margin(1e-13));
        }
    }
}

TEST_CASE("band covers sum to one once the scale passes the degree")
{
    const FilterProfile p = FilterProfile::spline(4);
    for (int n : {1, 3, 7, 20}) {
        double acc = 0.0;
        int J = 1;
        while ((1 << (J - 1)) < n) ++J; // 2^{J-1} >= n
        for (int j = 1; j <= J; ++j) {
            const double k = kappa(p, n / std::pow(2.0, j - 1));
            acc += k * k;
        }
        CHECK(acc == Approx(1.0).margin(1e-13));
    }
}

TEST_CASE("spline knots are smooth to the requested order")
{
    // One-sided finite differences from inside and outside each knot must
    // agree for derivative orders <= q; order q+1 disagrees.
    auto one_sided = [&](const FilterProfile& p, double knot, double dir, int order, double h) {
        // forward differences of order `order` in direction dir
        double acc = 0.0;
        for (int i = 0; i <= order; ++i) {
            const double c = static_cast<double>(spherewave::detail::binomial_i64(order, i)) * ((order - i) % 2 ? -1.0 : 1.0);
            acc += c * phi(p, knot + dir * h * i);
        }
        return acc / std::pow(dir * h, order);
    };
    for (int q : {1, 2, 3}) {
        const FilterProfile p = FilterProfile::spline(q);
        for (double knot : {0.5, 1.0}) {
            const double h = 1e-4;
            // the (q+1)-st derivative jumps; its size sets the scale the
            // finite-difference mismatch of lower orders is judged against
            const double jin = one_sided(p, knot, knot == 0.5 ? -1.0 : 1.0, q + 1, h);
            const double jout = one_sided(p, knot, knot == 0.5 ? 1.0 : -1.0, q + 1, h);
            const double jump = std::abs(jin - jout);
            CHECK(jump > 1.0);
            for (int r = 1; r <= q; ++r) {
                const double in = one_sided(p, knot, knot == 0.5 ? -1.0 : 1.0, r, h);
                const double out = one_sided(p, knot, knot == 0.5 ? 1.0 : -1.0, r, h);
                CHECK(std::abs(in - out) <= 0.02 * jump);
            }
        }
    }
}
