#ifndef SPHEREWAVE_QUADRATURE_HPP
#define SPHEREWAVE_QUADRATURE_HPP

// Exact quadrature: Gauss rules for the weight (1-t^2)^alpha on [-1,1]
// (Golub-Welsch on the Jacobi matrix), product rules on spheres of any
// dimension, and small rules on the rotation stabilizer used to discretize
// directions. Sphere rules are normalized to total mass 1, matching the
// probability surface measure.

#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "detail/sum.hpp"
#include "sphere.hpp"
#include "specfun.hpp"

namespace spherewave {

struct Rule1D {
    std::vector<double> nodes;   // ascending, interior to (-1, 1)
    std::vector<double> weights; // positive; sum to the weight-function mass
    double alpha = 0.0;
    int exact_degree = 0;
};

namespace detail {

// Eigenvalues of a symmetric tridiagonal matrix together with the first
// component of each (normalized) eigenvector, by implicit-shift QL
// iteration. diag/off are consumed.
inline void tridiag_eigen_first_row(std::vector<double>& dg, std::vector<double>& off, std::vector<double>& q0)
{
    const int n = static_cast<int>(dg.size());
    q0.assign(n, 0.0);
    q0[0] = 1.0;
    if (n == 1) return;
    off.resize(n, 0.0); // sentinel
    const double eps = std::numeric_limits<double>::epsilon();
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(dg[m]) + std::abs(dg[m + 1]);
                if (std::abs(off[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (++iter > 60) throw std::runtime_error("tridiag_eigen: QL iteration did not converge");
                double g = (dg[l + 1] - dg[l]) / (2.0 * off[l]);
                double r = std::hypot(g, 1.0);
                g = dg[m] - dg[l] + off[l] / (g + (g >= 0.0 ? r : -r));
                double s = 1.0, c = 1.0, p = 0.0;
                int i = m - 1;
                for (; i >= l; --i) {
                    double f = s * off[i];
                    const double b = c * off[i];
                    r = std::hypot(f, g);
                    off[i + 1] = r;
                    if (r == 0.0) {
                        dg[i + 1] -= p;
                        off[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = dg[i + 1] - p;
                    r = (dg[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    dg[i + 1] = g + p;
                    g = c * r - b;
                    f = q0[i + 1];
                    q0[i + 1] = s * q0[i] + c * f;
                    q0[i] = c * q0[i] - s * f;
                }
                if (r == 0.0 && i >= l) continue;
                dg[l] -= p;
                off[l] = g;
                off[m] = 0.0;
            }
        } while (m != l);
    }
}

} // namespace detail

// Gauss rule for int_{-1}^{1} f(t) (1-t^2)^alpha dt, exact through degree
// 2*n_nodes - 1.
inline Rule1D gauss_gegenbauer(double alpha, int n_nodes)
{
    if (!(alpha > -1.0)) throw std::domain_error("gauss_gegenbauer: alpha must exceed -1");
    if (n_nodes < 1) throw std::domain_error("gauss_gegenbauer: need at least one node");
    const double mu0 = std::exp(0.5 * std::log(pi) + std::lgamma(alpha + 1.0) - std::lgamma(alpha + 1.5));
    std::vector<double> dg(n_nodes, 0.0), off(n_nodes > 1 ? n_nodes - 1 : 0);
    for (int k = 1; k < n_nodes; ++k) {
        // Monic recurrence coefficient; k = 1 written separately to avoid
        // the removable 0/0 at alpha = -1/2.
        const double bk = (k == 1) ? 1.0 / (2.0 * alpha + 3.0)
                                   : k * (k + 2.0 * alpha) / ((2.0 * k + 2.0 * alpha + 1.0) * (2.0 * k + 2.0 * alpha - 1.0));
        off[k - 1] = std::sqrt(bk);
    }
    std::vector<double> q0;
    detail::tridiag_eigen_first_row(dg, off, q0);
    Rule1D rule;
    rule.alpha = alpha;
    rule.exact_degree = 2 * n_nodes - 1;
    std::vector<std::size_t> order(n_nodes);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dg[a] < dg[b]; });
    rule.nodes.reserve(n_nodes);
    rule.weights.reserve(n_nodes);
    for (std::size_t i : order) {
        rule.nodes.push_back(dg[i]);
        rule.weights.push_back(mu0 * q0[i] * q0[i]);
    }
    return rule;
}

// Product quadrature on the sphere S^m in R^{m+1}, exact on all spherical
// polynomials of degree <= N: equispaced azimuth nodes crossed with Gauss
// rules in the cosine of each latitude angle. Weights sum to 1. Nodes are
// flattened azimuth-fastest, then latitude levels in ascending order.
class SphereRule {
public:
    SphereRule() = default;

    SphereRule(int m, int degree)
    {
        if (m < 1) throw std::domain_error("SphereRule: sphere dimension must be >= 1");
        if (degree < 0) throw std::domain_error("SphereRule: degree must be nonnegative");
        m_ = m;
        degree_ = degree;
        azimuth_ = degree + 1;
        const int lat_nodes = degree / 2 + 1;
        lat_.reserve(m - 1);
        for (int level = 2; level <= m; ++level) {
            Rule1D r = gauss_gegenbauer(0.5 * (level - 2), lat_nodes);
            const double mass = detail::pairwise_sum(r.weights);
            for (double& w : r.weights) w /= mass;
            lat_.push_back(std::move(r));
        }
        size_ = azimuth_;
        for (const auto& r : lat_) size_ *= r.nodes.size();
    }

    int sphere_dim() const { return m_; }
    int ambient_dim() const { return m_ + 1; }
    int exact_degree() const { return degree_; }
    std::size_t size() const { return size_; }
    int azimuth_count() const { return azimuth_; }
    double azimuth_angle(int a) const { return 2.0 * pi * a / azimuth_; }
    const std::vector<Rule1D>& latitude_rules() const { return lat_; }
    std::size_t latitude_group_count() const { return size_ / azimuth_; }

    // Latitude angles (t_2, ..., t_m) of flattened latitude group b.
    std::vector<double> latitude_angles(std::size_t b) const
    {
        std::vector<double> ang(lat_.size());
        for (std::size_t lev = 0; lev < lat_.size(); ++lev) {
            const std::size_t nl = lat_[lev].nodes.size();
            ang[lev] = std::acos(lat_[lev].nodes[b % nl]);
            b /= nl;
        }
        return ang;
    }

    double latitude_weight(std::size_t b) const
    {
        double w = 1.0;
        for (std::size_t lev = 0; lev < lat_.size(); ++lev) {
            const std::size_t nl = lat_[lev].nodes.size();
            w *= lat_[lev].weights[b % nl];
            b /= nl;
        }
        return w;
    }

    SpherePoint point(std::size_t flat) const
    {
        const std::size_t a = flat % azimuth_;
        const std::size_t b = flat / azimuth_;
        std::vector<double> ang(m_);
        ang[0] = azimuth_angle(static_cast<int>(a));
        const auto lats = latitude_angles(b);
        for (std::size_t lev = 0; lev < lats.size(); ++lev) ang[lev + 1] = lats[lev];
        if (m_ + 1 >= 3) return SpherePoint::from_angles(m_ + 1, std::move(ang));
        throw std::logic_error("SphereRule: ambient dimension too small");
    }

    double weight(std::size_t flat) const { return latitude_weight(flat / azimuth_) / azimuth_; }

private:
    int m_ = 0;
    int degree_ = 0;
    int azimuth_ = 0;
    std::size_t size_ = 0;
    std::vector<Rule1D> lat_;
};

inline SphereRule sphere_rule(int m, int degree) { return SphereRule(m, degree); }

// Quadrature over the directions a wavelet is steered through. For d = 3
// the stabilizer is the circle group and equispaced angles are exact; for
// d >= 4 the rotation-invariant construction reduces to a sphere rule on
// S^{d-2}, whose points are lifted to rotations fixing e_d.
class DirectionalRule {
public:
    enum class Kind { so2, sphere };

    static DirectionalRule so2(int K)
    {
        if (K < 0) throw std::domain_error("DirectionalRule: K must be nonnegative");
        DirectionalRule r;
        r.kind_ = Kind::so2;
        r.d_ = 3;
        r.exact_degree_ = 2 * K;
        const int count = 2 * K + 1;
        r.angles_.resize(count);
        r.weights_.assign(count, 1.0 / count);
        for (int m = 0; m < count; ++m) r.angles_[m] = 2.0 * pi * m / count;
        return r;
    }

    static DirectionalRule on_sphere(int d, int K)
    {
        if (d < 4) throw std::domain_error("DirectionalRule: sphere variant needs d >= 4");
        if (K < 0) throw std::domain_error("DirectionalRule: K must be nonnegative");
        DirectionalRule r;
        r.kind_ = Kind::sphere;
        r.d_ = d;
        r.exact_degree_ = 2 * K;
        r.sub_ = SphereRule(d - 2, 2 * K);
        return r;
    }

    Kind kind() const { return kind_; }
    int ambient_dim() const { return d_; }
    int exact_degree() const { return exact_degree_; }
    std::size_t count() const { return kind_ == Kind::so2 ? angles_.size() : sub_.size(); }
    double weight(std::size_t m) const { return kind_ == Kind::so2 ? weights_[m] : sub_.weight(m); }
    double angle(std::size_t m) const { return angles_[m]; }
    const SphereRule& sub_rule() const { return sub_; }

    // Direction point on S^{d-2} (sphere variant only).
    SpherePoint direction(std::size_t m) const { return sub_.point(m); }

    // The rotation h_m as an element of SO(d).
    Rotation rotation(std::size_t m) const
    {
        if (kind_ == Kind::so2) return so2_rotation(angles_[m]);
        const std::size_t a = m % sub_.azimuth_count();
        const auto lats = sub_.latitude_angles(m / sub_.azimuth_count());
        Rotation inner = detail::grid_rotation(d_ - 1, sub_.azimuth_angle(static_cast<int>(a)), lats);
        Rotation g = Rotation::identity(d_);
        for (int i = 0; i < d_ - 1; ++i)
            for (int j = 0; j < d_ - 1; ++j) g.at(i, j) = inner(i, j);
        return g;
    }

private:
    Kind kind_ = Kind::so2;
    int d_ = 3;
    int exact_degree_ = 0;
    std::vector<double> angles_;
    std::vector<double> weights_;
    SphereRule sub_;
};

inline DirectionalRule so2_rule(int K) { return DirectionalRule::so2(K); }

template <typename F>
auto integrate(const Rule1D& rule, F&& f)
{
    using R = decltype(f(0.0));
    return detail::pairwise_sum<R>(0, rule.nodes.size(),
                                   [&](std::size_t i) { return R(rule.weights[i] * f(rule.nodes[i])); });
}

template <typename F>
auto integrate(const SphereRule& rule, F&& f)
{
    using R = decltype(f(std::declval<const SpherePoint&>()));
    return detail::pairwise_sum<R>(0, rule.size(), [&](std::size_t i) {
        const SpherePoint p = rule.point(i);
        return R(rule.weight(i) * f(p));
    });
}

template <typename F>
auto integrate(const DirectionalRule& rule, F&& f)
{
    using R = decltype(f(std::declval<const Rotation&>()));
    return detail::pairwise_sum<R>(0, rule.count(), [&](std::size_t i) {
        const Rotation h = rule.rotation(i);
        return R(rule.weight(i) * f(h));
    });
}

} // namespace spherewave

#endif
