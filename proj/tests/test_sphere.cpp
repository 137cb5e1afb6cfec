#include <catch2/catch.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "spherewave/quadrature.hpp"
#include "spherewave/sphere.hpp"

using namespace spherewave;

namespace {

std::vector<double> random_unit(int d, std::mt19937_64& rng)
{
    std::vector<double> x(d);
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (int i = 0; i < d; ++i) {
            // Box-Muller from explicit uniform bits, reproducible everywhere.
            const double u1 = ((rng() >> 11) + 0.5) * 0x1p-53;
            const double u2 = ((rng() >> 11) + 0.5) * 0x1p-53;
            x[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
            n2 += x[i] * x[i];
        }
    } while (n2 < 1e-8);
    const double inv = 1.0 / std::sqrt(n2);
    for (double& v : x) v *= inv;
    return x;
}

} // namespace

TEST_CASE("index enumeration matches dimension counts")
{
    for (int d : {3, 4, 5}) {
        for (int n = 0; n <= 12; ++n) {
            const auto list = enumerate_indices(d, n);
            CHECK(static_cast<std::int64_t>(list.size()) == dim_harmonic({d, n}));
            for (std::size_t i = 1; i < list.size(); ++i) CHECK(list[i - 1] < list[i]);
        }
    }
    const auto l3 = enumerate_indices(3, 1);
    REQUIRE(l3.size() == 3);
    CHECK(l3[0].k == std::vector<int>{-1});
    CHECK(l3[2].k == std::vector<int>{1});
    const auto l4 = enumerate_indices(4, 1);
    REQUIRE(l4.size() == 4);
    CHECK(l4[0].k == std::vector<int>{0, 0});
    CHECK(l4[1].k == std::vector<int>{1, -1});
    CHECK(l4[3].k == std::vector<int>{1, 1});
    CHECK(enumerate_indices(3, 0).size() == 1);
}

TEST_CASE("coordinate conversions round-trip")
{
    // north pole
    const auto pole = SpherePoint::from_angles(4, {0.0, 0.0, 0.0});
    CHECK(pole.cartesian()[3] == Approx(1.0));
    // equatorial point in d = 3: angles (pi/2, pi/2) -> (1, 0, 0)
    const auto eq = SpherePoint::from_angles(3, {pi / 2, pi / 2});
    CHECK(eq.cartesian()[0] == Approx(1.0).margin(1e-14));
    CHECK(eq.cartesian()[1] == Approx(0.0).margin(1e-14));
    CHECK(eq.cartesian()[2] == Approx(0.0).margin(1e-14));

    std::mt19937_64 rng(17);
    for (int d : {3, 4, 5, 6}) {
        for (int trial = 0; trial < 40; ++trial) {
            const auto p = SpherePoint::from_cartesian(random_unit(d, rng));
            const auto q = coords_roundtrip(p);
            for (int i = 0; i < d; ++i) CHECK(q.cartesian()[i] == Approx(p.cartesian()[i]).margin(1e-12));
        }
    }
    CHECK_THROWS_AS(SpherePoint::from_cartesian({1.0, 1.0, 1.0}), std::domain_error);
}

TEST_CASE("geodesic distance")
{
    std::mt19937_64 rng(5);
    const auto a = SpherePoint::from_cartesian(random_unit(4, rng));
    CHECK(geodesic_dist(a, a) == Approx(0.0).margin(1e-7));
    const auto north = SpherePoint::from_angles(3, {0.0, 0.0});
    const auto south = SpherePoint::from_angles(3, {0.0, pi});
    CHECK(geodesic_dist(north, south) == Approx(pi));
    for (int d : {3, 4, 5}) {
        const auto p = SpherePoint::from_cartesian(random_unit(d, rng));
        std::vector<double> ed(d, 0.0);
        ed[d - 1] = 1.0;
        CHECK(geodesic_dist(p, SpherePoint::from_cartesian(ed)) == Approx(p.angles()[d - 2]).margin(1e-12));
    }
}

TEST_CASE("constant harmonic is identically one")
{
    std::mt19937_64 rng(23);
    for (int d : {3, 4, 5}) {
        std::vector<int> zero(d - 2, 0);
        for (int trial = 0; trial < 10; ++trial) {
            const auto p = SpherePoint::from_cartesian(random_unit(d, rng));
            const cplx v = eval_harmonic({d, 0, zero}, p);
            CHECK(v.real() == Approx(1.0).epsilon(1e-12));
            CHECK(v.imag() == Approx(0.0).margin(1e-13));
        }
    }
}

TEST_CASE("conjugation flips the sign of the last chain index")
{
    std::mt19937_64 rng(29);
    for (int d : {3, 4, 5}) {
        for (int trial = 0; trial < 20; ++trial) {
            const auto p = SpherePoint::from_cartesian(random_unit(d, rng));
            const int n = 1 + static_cast<int>(rng() % 6);
            const auto idxs = enumerate_indices(d, n);
            const auto& idx = idxs[rng() % idxs.size()];
            HarmonicIndex flip = idx;
            flip.k[d - 3] = -flip.k[d - 3];
            const cplx a = std::conj(eval_harmonic(idx, p));
            const cplx b = eval_harmonic(flip, p);
            CHECK(a.real() == Approx(b.real()).margin(1e-10));
            CHECK(a.imag() == Approx(b.imag()).margin(1e-10));
        }
    }
}

TEST_CASE("basis sums collapse to the reproducing kernel")
{
    std::mt19937_64 rng(31);
    for (int d : {3, 4, 5}) {
        for (int n = 0; n <= 8; ++n) {
            const auto idxs = enumerate_indices(d, n);
            for (int trial = 0; trial < 6; ++trial) {
                const auto eta = SpherePoint::from_cartesian(random_unit(d, rng));
                const auto nu = SpherePoint::from_cartesian(random_unit(d, rng));
                cplx acc = 0.0;
                for (const auto& idx : idxs) acc += eval_harmonic(idx, eta) * std::conj(eval_harmonic(idx, nu));
                double dot = 0.0;
                for (int i = 0; i < d; ++i) dot += eta.cartesian()[i] * nu.cartesian()[i];
                dot = std::max(-1.0, std::min(1.0, dot));
                const double expect = addition_kernel(d, n, dot);
                CHECK(acc.real() == Approx(expect).epsilon(1e-10).margin(1e-10));
                CHECK(acc.imag() == Approx(0.0).margin(1e-10));
            }
        }
    }
}

TEST_CASE("addition kernel special values")
{
    for (int d : {3, 4, 5}) {
        for (int n = 0; n <= 6; ++n)
            CHECK(addition_kernel(d, n, 1.0) == Approx(static_cast<double>(dim_harmonic({d, n}))).epsilon(1e-12));
    }
    CHECK(addition_kernel(3, 1, 0.37) == Approx(3 * 0.37));
}

TEST_CASE("orthonormality of the basis under an exact rule")
{
    for (int d : {3, 4}) {
        const int n_max = 3;
        const SphereRule rule(d - 1, 2 * n_max);
        std::vector<HarmonicIndex> all;
        for (int n = 0; n <= n_max; ++n)
            for (auto& idx : enumerate_indices(d, n)) all.push_back(idx);
        for (std::size_t i = 0; i < all.size(); ++i) {
            for (std::size_t j = i; j < all.size(); ++j) {
                const cplx g = integrate(rule, [&](const SpherePoint& p) {
                    return eval_harmonic(all[i], p) * std::conj(eval_harmonic(all[j], p));
                });
                const double expect = (i == j) ? 1.0 : 0.0;
                CHECK(g.real() == Approx(expect).margin(1e-10));
                CHECK(g.imag() == Approx(0.0).margin(1e-10));
            }
        }
    }
}

TEST_CASE("rotation to north")
{
    std::mt19937_64 rng(41);
    for (int d : {3, 4, 5}) {
        std::vector<double> ed(d, 0.0);
        ed[d - 1] = 1.0;
        const auto north = SpherePoint::from_cartesian(ed);
        CHECK(rotation_to_north(north).det() == Approx(1.0));
        std::vector<double> neg = ed;
        neg[d - 1] = -1.0;
        const auto south = SpherePoint::from_cartesian(neg);
        const Rotation gs = rotation_to_north(south);
        CHECK(gs.det() == Approx(1.0).margin(1e-12));
        const auto img = gs.apply(ed);
        CHECK(img[d - 1] == Approx(-1.0));
        for (int trial = 0; trial < 30; ++trial) {
            const auto eta = SpherePoint::from_cartesian(random_unit(d, rng));
            const Rotation g = rotation_to_north(eta);
            CHECK(g.det() == Approx(1.0).margin(1e-12));
            const auto ge = g.apply(ed);
            for (int i = 0; i < d; ++i) CHECK(ge[i] == Approx(eta.cartesian()[i]).margin(1e-12));
            // orthogonality
            const Rotation gtg = g.transposed().compose(g);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) CHECK(gtg(i, j) == Approx(i == j ? 1.0 : 0.0).margin(1e-12));
        }
    }
}

TEST_CASE("planar rotations about the pole axis")
{
    const Rotation id = so2_rotation(0.0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(id(i, j) == Approx(i == j ? 1.0 : 0.0).margin(1e-15));
    // group law
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        const double g1 = 2.0 * pi * ((rng() >> 11) * 0x1p-53);
        const double g2 = 2.0 * pi * ((rng() >> 11) * 0x1p-53);
        const Rotation lhs = so2_rotation(g1).compose(so2_rotation(g2));
        const Rotation rhs = so2_rotation(g1 + g2);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) CHECK(lhs(i, j) == Approx(rhs(i, j)).margin(1e-12));
    }
    // eigenbasis action: T(h(gamma)) Y_k = e^{i k gamma} Y_k
    for (int trial = 0; trial < 10; ++trial) {
        const double gamma = 2.0 * pi * ((rng() >> 11) * 0x1p-53);
        const auto p = SpherePoint::from_cartesian(random_unit(3, rng));
        for (int n : {1, 3}) {
            for (int k = -n; k <= n; ++k) {
                const HarmonicIndex idx{3, n, {k}};
                const cplx lhs = eval_harmonic(idx, so2_rotation(gamma).apply_inverse(p));
                const cplx rhs = std::polar(1.0, k * gamma) * eval_harmonic(idx, p);
                CHECK(lhs.real() == Approx(rhs.real()).margin(1e-11));
                CHECK(lhs.imag() == Approx(rhs.imag()).margin(1e-11));
            }
        }
    }
}

TEST_CASE("quadrature is rotation invariant on band-limited functions")
{
    std::mt19937_64 rng(47);
    for (int d : {3, 4}) {
        const int deg = 5;
        const SphereRule rule(d - 1, deg);
        const auto axis = SpherePoint::from_cartesian(random_unit(d, rng));
        const Rotation g = rotation_to_north(axis);
        const auto nu = SpherePoint::from_cartesian(random_unit(d, rng));
        auto f = [&](const SpherePoint& p) {
            double dot = 0.0;
            for (int i = 0; i < d; ++i) dot += p.cartesian()[i] * nu.cartesian()[i];
            dot = std::max(-1.0, std::min(1.0, dot));
            return addition_kernel(d, 2, dot) + 0.5 * addition_kernel(d, 5, dot);
        };
        const cplx base = integrate(rule, [&](const SpherePoint& p) { return cplx(f(p)); });
        const cplx rot = integrate(rule, [&](const SpherePoint& p) {
            return cplx(f(SpherePoint::from_cartesian(g.apply(p.cartesian()))));
        });
        CHECK(base.real() == Approx(rot.real()).margin(1e-10));
    }
}
