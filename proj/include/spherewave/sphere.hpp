#ifndef SPHEREWAVE_SPHERE_HPP
#define SPHEREWAVE_SPHERE_HPP

// Geometry and the harmonic basis on the unit sphere in R^d, d >= 3:
// index enumeration, spherical <-> cartesian coordinates, basis evaluation,
// the degree-n reproducing (addition) kernel, and rotation helpers.
//
// Coordinate convention: angles (t1, ..., t_{d-1}) with t1 in [0, 2pi) and
// t_i in [0, pi] for i >= 2 map to
//   x_1 = sin t_{d-1} ... sin t_2 sin t1
//   x_2 = sin t_{d-1} ... sin t_2 cos t1
//   x_m = sin t_{d-1} ... sin t_m cos t_{m-1}   (3 <= m <= d)
// so the north pole e_d has t_{d-1} = 0. The surface measure is normalized
// to total mass 1 throughout.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "specfun.hpp"

namespace spherewave {

using cplx = std::complex<double>;

// Index of one basis function: degree n plus the chain (k_1, ..., k_{d-2})
// with n >= k_1 >= ... >= k_{d-3} >= |k_{d-2}|. For d = 3 the chain is a
// single integer in [-n, n].
struct HarmonicIndex {
    int d = 3;
    int n = 0;
    std::vector<int> k;

    friend bool operator==(const HarmonicIndex& a, const HarmonicIndex& b)
    {
        return a.d == b.d && a.n == b.n && a.k == b.k;
    }
    friend bool operator<(const HarmonicIndex& a, const HarmonicIndex& b)
    {
        if (a.d != b.d) return a.d < b.d;
        if (a.n != b.n) return a.n < b.n;
        return a.k < b.k;
    }
};

inline void validate_index(const HarmonicIndex& idx)
{
    detail::validate_chain(idx.d, idx.n, idx.k, "HarmonicIndex");
}

// All chains of degree n in ascending lexicographic order; the list length
// equals dim_harmonic({d, n}).
inline std::vector<HarmonicIndex> enumerate_indices(int d, int n)
{
    if (d < 3) throw std::domain_error("enumerate_indices: d must be >= 3");
    if (n < 0) throw std::domain_error("enumerate_indices: n must be nonnegative");
    std::vector<HarmonicIndex> out;
    std::vector<int> chain(d - 2, 0);
    auto rec = [&](auto&& self, int pos, int bound) -> void {
        if (pos == d - 3) {
            for (int m = -bound; m <= bound; ++m) {
                chain[pos] = m;
                out.push_back({d, n, chain});
            }
            return;
        }
        for (int v = 0; v <= bound; ++v) {
            chain[pos] = v;
            self(self, pos + 1, v);
        }
    };
    rec(rec, 0, n);
    return out;
}

// A point on the sphere in R^d; both representations are kept in sync.
class SpherePoint {
public:
    static SpherePoint from_angles(int d, std::vector<double> angles)
    {
        if (d < 3) throw std::domain_error("SpherePoint: d must be >= 3");
        if (static_cast<int>(angles.size()) != d - 1)
            throw std::domain_error("SpherePoint: expected d-1 angles");
        SpherePoint p;
        p.d_ = d;
        p.angles_ = std::move(angles);
        p.cart_.assign(d, 0.0);
        double tail = 1.0; // product of sines of the outer angles
        for (int m = d; m >= 3; --m) {
            p.cart_[m - 1] = tail * std::cos(p.angles_[m - 2]);
            tail *= std::sin(p.angles_[m - 2]);
        }
        p.cart_[1] = tail * std::cos(p.angles_[0]);
        p.cart_[0] = tail * std::sin(p.angles_[0]);
        return p;
    }

    static SpherePoint from_cartesian(std::vector<double> x)
    {
        const int d = static_cast<int>(x.size());
        if (d < 3) throw std::domain_error("SpherePoint: d must be >= 3");
        double norm2 = 0.0;
        for (double v : x) norm2 += v * v;
        const double norm = std::sqrt(norm2);
        if (std::abs(norm - 1.0) > 1e-8)
            throw std::domain_error("SpherePoint: vector is not on the unit sphere");
        for (double& v : x) v /= norm;
        SpherePoint p;
        p.d_ = d;
        p.cart_ = std::move(x);
        p.angles_.assign(d - 1, 0.0);
        double t1 = std::atan2(p.cart_[0], p.cart_[1]);
        if (t1 < 0.0) t1 += 2.0 * pi;
        p.angles_[0] = t1;
        double r = std::hypot(p.cart_[0], p.cart_[1]);
        for (int m = 2; m <= d - 1; ++m) {
            p.angles_[m - 1] = std::atan2(r, p.cart_[m]);
            r = std::hypot(r, p.cart_[m]);
        }
        return p;
    }

    int dim() const { return d_; }
    const std::vector<double>& angles() const { return angles_; }
    const std::vector<double>& cartesian() const { return cart_; }

private:
    int d_ = 0;
    std::vector<double> angles_;
    std::vector<double> cart_;
};

// Spherical -> cartesian -> spherical; identity away from the coordinate
// singularities sin t_i = 0.
inline SpherePoint coords_roundtrip(const SpherePoint& p)
{
    return SpherePoint::from_cartesian(p.cartesian());
}

inline double geodesic_dist(const SpherePoint& a, const SpherePoint& b)
{
    if (a.dim() != b.dim()) throw std::domain_error("geodesic_dist: dimension mismatch");
    double dot = 0.0;
    for (int i = 0; i < a.dim(); ++i) dot += a.cartesian()[i] * b.cartesian()[i];
    dot = std::max(-1.0, std::min(1.0, dot));
    return std::acos(dot);
}

// Rotation in SO(d), stored row-major.
class Rotation {
public:
    Rotation() = default;
    static Rotation identity(int d)
    {
        Rotation g;
        g.d_ = d;
        g.m_.assign(static_cast<std::size_t>(d) * d, 0.0);
        for (int i = 0; i < d; ++i) g.m_[static_cast<std::size_t>(i) * d + i] = 1.0;
        return g;
    }
    static Rotation from_matrix(int d, std::vector<double> m)
    {
        Rotation g;
        g.d_ = d;
        g.m_ = std::move(m);
        return g;
    }

    int dim() const { return d_; }
    double operator()(int i, int j) const { return m_[static_cast<std::size_t>(i) * d_ + j]; }
    double& at(int i, int j) { return m_[static_cast<std::size_t>(i) * d_ + j]; }

    std::vector<double> apply(const std::vector<double>& x) const
    {
        std::vector<double> y(d_, 0.0);
        for (int i = 0; i < d_; ++i) {
            double acc = 0.0;
            for (int j = 0; j < d_; ++j) acc += (*this)(i, j) * x[j];
            y[i] = acc;
        }
        return y;
    }
    // g^{-1} x = g^T x.
    std::vector<double> apply_inverse(const std::vector<double>& x) const
    {
        std::vector<double> y(d_, 0.0);
        for (int j = 0; j < d_; ++j) {
            double acc = 0.0;
            for (int i = 0; i < d_; ++i) acc += (*this)(i, j) * x[i];
            y[j] = acc;
        }
        return y;
    }
    SpherePoint apply(const SpherePoint& p) const { return SpherePoint::from_cartesian(apply(p.cartesian())); }
    SpherePoint apply_inverse(const SpherePoint& p) const
    {
        return SpherePoint::from_cartesian(apply_inverse(p.cartesian()));
    }

    Rotation compose(const Rotation& rhs) const // (*this) * rhs
    {
        Rotation g = identity(d_);
        for (int i = 0; i < d_; ++i)
            for (int j = 0; j < d_; ++j) {
                double acc = 0.0;
                for (int l = 0; l < d_; ++l) acc += (*this)(i, l) * rhs(l, j);
                g.at(i, j) = acc;
            }
        return g;
    }
    Rotation transposed() const
    {
        Rotation g = identity(d_);
        for (int i = 0; i < d_; ++i)
            for (int j = 0; j < d_; ++j) g.at(i, j) = (*this)(j, i);
        return g;
    }
    double det() const
    {
        // LU with partial pivoting; d <= 6 in practice.
        std::vector<double> a = m_;
        const int d = d_;
        double det = 1.0;
        for (int c = 0; c < d; ++c) {
            int piv = c;
            for (int r = c + 1; r < d; ++r)
                if (std::abs(a[static_cast<std::size_t>(r) * d + c]) > std::abs(a[static_cast<std::size_t>(piv) * d + c])) piv = r;
            if (piv != c) {
                for (int j = 0; j < d; ++j) std::swap(a[static_cast<std::size_t>(piv) * d + j], a[static_cast<std::size_t>(c) * d + j]);
                det = -det;
            }
            const double p = a[static_cast<std::size_t>(c) * d + c];
            if (p == 0.0) return 0.0;
            det *= p;
            for (int r = c + 1; r < d; ++r) {
                const double f = a[static_cast<std::size_t>(r) * d + c] / p;
                for (int j = c; j < d; ++j) a[static_cast<std::size_t>(r) * d + j] -= f * a[static_cast<std::size_t>(c) * d + j];
            }
        }
        return det;
    }

private:
    int d_ = 0;
    std::vector<double> m_;
};

namespace detail {

// Plane rotation in the (x_i, x_{i+1}) coordinate pair (1-based i) sending
// e_{i+1} -> sin t e_i + cos t e_{i+1}.
inline Rotation level_rotation(int d, int i, double t)
{
    Rotation g = Rotation::identity(d);
    const double c = std::cos(t), s = std::sin(t);
    g.at(i - 1, i - 1) = c;
    g.at(i - 1, i) = s;
    g.at(i, i - 1) = -s;
    g.at(i, i) = c;
    return g;
}

// Azimuth shift: acts on angles as t1 -> t1 + phi, fixing all other angles.
inline Rotation azimuth_rotation(int d, double phi)
{
    Rotation g = Rotation::identity(d);
    const double c = std::cos(phi), s = std::sin(phi);
    g.at(0, 0) = c;
    g.at(0, 1) = s;
    g.at(1, 0) = -s;
    g.at(1, 1) = c;
    return g;
}

// Structured rotation carrying e_d to the grid point with azimuth phi and
// latitudes lats = (t_2, ..., t_{d-1}).
inline Rotation grid_rotation(int d, double phi, const std::vector<double>& lats)
{
    Rotation g = azimuth_rotation(d, phi);
    for (int i = 2; i <= d - 1; ++i) g = g.compose(level_rotation(d, i, lats[i - 2]));
    return g;
}

// In-place application of grid_rotation^{-1} to a cartesian vector.
inline void apply_grid_rotation_inverse(std::vector<double>& x, double phi, const std::vector<double>& lats)
{
    const int d = static_cast<int>(x.size());
    {
        const double c = std::cos(phi), s = std::sin(phi);
        const double x0 = x[0], x1 = x[1];
        x[0] = c * x0 - s * x1;
        x[1] = s * x0 + c * x1;
    }
    for (int i = 2; i <= d - 1; ++i) {
        const double c = std::cos(lats[i - 2]), s = std::sin(lats[i - 2]);
        const double a = x[i - 1], b = x[i];
        x[i - 1] = c * a - s * b;
        x[i] = s * a + c * b;
    }
}

} // namespace detail

// Deterministic g with g e_d = eta, built from two Householder reflections
// so that det g = +1.
inline Rotation rotation_to_north(const SpherePoint& eta)
{
    const int d = eta.dim();
    const auto& y = eta.cartesian();
    Rotation g = Rotation::identity(d);
    if (1.0 - y[d - 1] < 1e-13) return g; // eta == e_d
    if (1.0 + y[d - 1] < 1e-13) {
        // eta == -e_d: flip the last two coordinates.
        g.at(d - 1, d - 1) = -1.0;
        g.at(d - 2, d - 2) = -1.0;
        return g;
    }
    auto reflect = [d](Rotation& m, const std::vector<double>& u) {
        double uu = 0.0;
        for (double v : u) uu += v * v;
        for (int j = 0; j < d; ++j) {
            double ucol = 0.0;
            for (int i = 0; i < d; ++i) ucol += u[i] * m(i, j);
            const double f = 2.0 * ucol / uu;
            for (int i = 0; i < d; ++i) m.at(i, j) -= f * u[i];
        }
    };
    // First reflection swaps e_d and eta; the second fixes eta and restores
    // the determinant, reflecting across a deterministically chosen vector
    // orthogonal to eta (the canonical axis with the smallest |component|).
    std::vector<double> u1(d);
    for (int i = 0; i < d; ++i) u1[i] = y[i] - (i == d - 1 ? 1.0 : 0.0);
    int piv = 0;
    for (int i = 1; i < d; ++i)
        if (std::abs(y[i]) < std::abs(y[piv])) piv = i;
    std::vector<double> u2(d, 0.0);
    for (int i = 0; i < d; ++i) u2[i] = -y[piv] * y[i];
    u2[piv] += 1.0;
    reflect(g, u1); // g = H1
    reflect(g, u2); // g = H2 H1
    return g;
}

// Positive rotation by gamma in the (x_1, x_2)-plane of R^3; satisfies
// T(h(gamma)) Y_k = e^{i k gamma} Y_k in the convention above.
inline Rotation so2_rotation(double gamma)
{
    Rotation g = Rotation::identity(3);
    const double c = std::cos(gamma), s = std::sin(gamma);
    g.at(0, 0) = c;
    g.at(0, 1) = -s;
    g.at(1, 0) = s;
    g.at(1, 1) = c;
    return g;
}

namespace detail {

// Per-point tables of the one-dimensional angle factors of every basis
// function with degree <= maxdeg; makes bulk evaluation O(1) per index
// after an O(d * maxdeg^2) setup.
class HarmonicTable {
public:
    HarmonicTable(int d, int maxdeg, const SpherePoint& p) : d_(d), L_(maxdeg)
    {
        const auto& ang = p.angles();
        const int nlev = d - 2;
        gg_.resize(nlev);
        spow_.resize(nlev);
        for (int j = 0; j < nlev; ++j) {
            const double theta = ang[d - 2 - j]; // t_{d-1-j}
            const double c = std::cos(theta), s = std::sin(theta);
            const double half = 0.5 * (d - j - 2);
            gg_[j].assign(static_cast<std::size_t>(L_ + 1) * (L_ + 1), 0.0);
            spow_[j].assign(L_ + 1, 0.0);
            double sp = 1.0;
            for (int e = 0; e <= L_; ++e) {
                spow_[j][e] = sp;
                sp *= s;
            }
            for (int sft = 0; sft <= L_; ++sft) {
                const double lam = half + sft;
                double prev = 1.0, cur = 2.0 * lam * c;
                for (int a = 0; a + sft <= L_; ++a) {
                    double v;
                    if (a == 0) v = 1.0;
                    else if (a == 1) v = cur;
                    else {
                        v = (2.0 * (a + lam - 1.0) * c * cur - (a + 2.0 * lam - 2.0) * prev) / a;
                        prev = cur;
                        cur = v;
                    }
                    gg_[j][static_cast<std::size_t>(sft) * (L_ + 1) + a] = v;
                }
            }
        }
        expi_.assign(2 * L_ + 1, cplx(1.0, 0.0));
        const cplx e1 = std::polar(1.0, ang[0]);
        for (int m = 1; m <= L_; ++m) {
            expi_[L_ + m] = expi_[L_ + m - 1] * e1;
            expi_[L_ - m] = std::conj(expi_[L_ + m]);
        }
    }

    // Product of angle factors for (n, k), without the normalization A.
    cplx unnormalized(int n, const std::vector<int>& k) const
    {
        double re = 1.0;
        int kj = n;
        for (int j = 0; j < d_ - 2; ++j) {
            const int s = std::abs(k[j]);
            re *= gg_[j][static_cast<std::size_t>(s) * (L_ + 1) + (kj - s)] * spow_[j][s];
            kj = s;
        }
        return re * expi_[L_ + k[d_ - 3]];
    }

private:
    int d_, L_;
    std::vector<std::vector<double>> gg_;   // [level][shift*(L+1)+deg]
    std::vector<std::vector<double>> spow_; // [level][exponent]
    std::vector<cplx> expi_;
};

} // namespace detail

// One orthonormal basis function at one point.
inline cplx eval_harmonic(const HarmonicIndex& idx, const SpherePoint& p)
{
    validate_index(idx);
    if (p.dim() != idx.d) throw std::domain_error("eval_harmonic: dimension mismatch");
    detail::HarmonicTable tbl(idx.d, idx.n, p);
    return harmonic_norm_A(idx.d, idx.n, idx.k) * tbl.unnormalized(idx.n, idx.k);
}

// Degree-n reproducing kernel evaluated at an inner product c in [-1, 1]:
// sum_k Y_k(eta) conj(Y_k(nu)) as a function of c = <eta, nu>.
inline double addition_kernel(int d, int n, double c)
{
    if (std::abs(c) > 1.0) throw std::domain_error("addition_kernel: argument outside [-1,1]");
    const double lam = 0.5 * (d - 2);
    return (2.0 * n + d - 2.0) / (d - 2.0) * gegenbauer_eval({lam, n}, c);
}

} // namespace spherewave

#endif
