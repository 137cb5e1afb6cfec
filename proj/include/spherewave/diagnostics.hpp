#ifndef SPHEREWAVE_DIAGNOSTICS_HPP
#define SPHEREWAVE_DIAGNOSTICS_HPP

// Quantitative wavelet diagnostics: spatial localization profiles, Lp norm
// growth, directional auto-correlation, steering residuals, and the
// two-variable visualization grids.

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "detail/parallel.hpp"
#include "detail/sum.hpp"
#include "quadrature.hpp"
#include "wavelet.hpp"

namespace spherewave {

namespace detail {

// Uniform slice evaluator: |psi(t, phi)| over colatitude t and tangent
// direction phi, for every profile family.
class SliceEvaluator {
public:
    explicit SliceEvaluator(const WaveletSpec& spec) : d_(spec.d), K_(spec.profile.K())
    {
        if (spec.profile.symmetric()) {
            sym_.emplace(spec);
            lambda_ = 0.5 * (d_ - 3);
        } else {
            d3_.emplace(spec);
        }
    }

    int directional_order() const { return K_; }

    // per-t radial data; then values across phi are cheap
    void load_t(double t)
    {
        const double c = std::cos(t);
        const double s = std::sin(t);
        if (sym_) {
            rad_.assign(K_ + 1, 0.0);
            double spow = 1.0;
            for (int m = 0; m <= K_; ++m) {
                rad_[m] = sym_->radial_series(m, c) * spow;
                spow *= s;
            }
        } else {
            radc_.assign(2 * K_ + 1, cplx(0.0));
            double spow = 1.0;
            for (int ak = 0; ak <= K_; ++ak) {
                radc_[K_ + ak] = d3_->radial_series(ak, c) * spow;
                if (ak > 0) radc_[K_ - ak] = d3_->radial_series(-ak, c) * spow;
                spow *= s;
            }
        }
    }

    cplx value(double phi) const
    {
        if (sym_) {
            double acc = rad_[0];
            const double cp = std::cos(phi);
            for (int m = 1; m <= K_; ++m) {
                if (rad_[m] == 0.0) continue;
                acc += rad_[m] * gegenbauer_eval({lambda_, m}, cp);
            }
            return acc;
        }
        cplx acc = 0.0;
        for (int k = -K_; k <= K_; ++k) acc += radc_[K_ + k] * std::polar(1.0, k * phi);
        return acc;
    }

private:
    int d_, K_;
    double lambda_ = 0.0;
    std::optional<SymmetricSeries> sym_;
    std::optional<D3Series> d3_;
    std::vector<double> rad_;
    std::vector<cplx> radc_;
};

} // namespace detail

struct LocalizationBand {
    double lo = 0.0, hi = 0.0; // geodesic distance band
    double sup = 0.0;          // sup |Psi| over the band
    double ratio = 0.0;        // sup of |Psi| (1 + N t)^{q_eff - K} / N^{d-1}
};

struct LocalizationReport {
    int N = 1;
    int K = 0;
    double q_eff = 0.0;
    std::vector<LocalizationBand> annuli;

    double peak() const
    {
        double p = 0.0;
        for (const auto& b : annuli) p = std::max(p, b.sup);
        return p;
    }
    double max_ratio() const
    {
        double r = 0.0;
        for (const auto& b : annuli) r = std::max(r, b.ratio);
        return r;
    }
};

// Decay profile around the concentration point: band suprema of |Psi| over
// geodesic annuli, and the same suprema normalized by the reference decay
// shape N^{d-1} / (1 + N t)^{q_eff - K}. Bands are equispaced in
// log(1 + N t). q_eff < 0 selects the default K + 4.
inline LocalizationReport localization_profile(const WaveletSpec& spec, int n_annuli, double q_eff = -1.0)
{
    if (n_annuli < 1) throw std::domain_error("localization_profile: need at least one band");
    const int K = spec.profile.K();
    if (q_eff < 0.0) q_eff = K + 4.0;
    LocalizationReport rep;
    rep.N = spec.bandwidth;
    rep.K = K;
    rep.q_eff = q_eff;
    const double N = spec.bandwidth;
    const double dm1 = spec.d - 1.0;
    const double logtop = std::log1p(N * pi);
    rep.annuli.resize(n_annuli);
    for (int i = 0; i < n_annuli; ++i) {
        rep.annuli[i].lo = (std::exp(logtop * i / n_annuli) - 1.0) / N;
        rep.annuli[i].hi = (std::exp(logtop * (i + 1.0) / n_annuli) - 1.0) / N;
    }
    const int nt = std::max(2048, 48 * spec.bandwidth);
    const int nphi = std::max(16, 8 * K);
    detail::SliceEvaluator ev(spec);
    const double npow = std::pow(N, dm1);
    for (int i = 0; i <= nt; ++i) {
        const double t = pi * i / nt;
        ev.load_t(t);
        double sup = 0.0;
        for (int jp = 0; jp < nphi; ++jp) sup = std::max(sup, std::abs(ev.value(2.0 * pi * jp / nphi)));
        const double logu = std::log1p(N * t);
        int band = logtop <= 0.0 ? 0 : static_cast<int>(n_annuli * logu / logtop);
        band = std::min(band, n_annuli - 1);
        auto& B = rep.annuli[band];
        B.sup = std::max(B.sup, sup);
        B.ratio = std::max(B.ratio, sup * std::pow(1.0 + N * t, q_eff - K) / npow);
    }
    return rep;
}

namespace detail {

// Integral of |psi|^p over the sphere through the two-angle reduction; the
// remaining d-3 angles integrate out of the SO(d-2)-invariant integrand.
// For d = 3, phi is the plain azimuth and is integrated over the full
// circle with a trapezoid (the d3 slice need not be phi-symmetric).
inline double slice_integral_p(const WaveletSpec& spec, double p, int t_nodes, int phi_nodes)
{
    SliceEvaluator ev(spec);
    const Rule1D tr = gauss_gegenbauer(0.5 * (spec.d - 3), t_nodes);
    const double tmass = pairwise_sum(tr.weights);
    std::vector<double> tvals(tr.nodes.size(), 0.0);
    std::vector<double> phis, pweights;
    if (spec.d == 3) {
        const int P = 2 * phi_nodes + 1;
        for (int jp = 0; jp < P; ++jp) {
            phis.push_back(2.0 * pi * jp / P);
            pweights.push_back(1.0 / P);
        }
    } else {
        const Rule1D pr = gauss_gegenbauer(0.5 * (spec.d - 4), phi_nodes);
        const double pmass = pairwise_sum(pr.weights);
        for (std::size_t jp = 0; jp < pr.nodes.size(); ++jp) {
            phis.push_back(std::acos(pr.nodes[jp]));
            pweights.push_back(pr.weights[jp] / pmass);
        }
    }
    parallel_for(tr.nodes.size(), [&](std::size_t i) {
        SliceEvaluator local = ev;
        local.load_t(std::acos(tr.nodes[i]));
        std::vector<double> acc(phis.size());
        for (std::size_t jp = 0; jp < phis.size(); ++jp)
            acc[jp] = pweights[jp] * std::pow(std::abs(local.value(phis[jp])), p);
        tvals[i] = tr.weights[i] * pairwise_sum(acc);
    });
    return pairwise_sum(tvals) / tmass;
}

} // namespace detail

// Lp norm of the wavelet. Even integer p (including 2) are computed with
// rules exact for the polynomial integrand; other finite p use dense
// two-angle grids refined until two successive densities agree to 1%;
// p = infinity is the slice supremum.
inline double lp_norm(const WaveletSpec& spec, double p)
{
    detail::check_spec(spec);
    if (std::isinf(p)) {
        const auto rep = localization_profile(spec, 8);
        return rep.peak();
    }
    if (!(p > 0.0)) throw std::domain_error("lp_norm: p must be positive");
    const int maxdeg = detail::support_max(spec.bandwidth);
    const bool exact = std::abs(p - std::round(p)) < 1e-12 && (static_cast<long>(std::round(p)) % 2 == 0);
    if (exact) {
        const int nodes = static_cast<int>(std::round(p)) * maxdeg / 2 + 2;
        return std::pow(detail::slice_integral_p(spec, p, nodes, nodes), 1.0 / p);
    }
    int nodes = 2 * maxdeg + 16;
    double prev = detail::slice_integral_p(spec, p, nodes, nodes);
    for (int it = 0; it < 3; ++it) {
        nodes *= 2;
        const double cur = detail::slice_integral_p(spec, p, nodes, nodes);
        if (std::abs(cur - prev) <= 0.01 * std::abs(cur)) return std::pow(cur, 1.0 / p);
        prev = cur;
    }
    return std::pow(prev, 1.0 / p);
}

// <T(h) Psi, Psi> where h moves the reference tangent direction by the
// given angle, computed by quadrature exact for the product.
inline cplx autocorrelation(const WaveletSpec& spec, double angle)
{
    detail::check_spec(spec);
    const int maxdeg = detail::support_max(spec.bandwidth);
    if (spec.d == 3) {
        const detail::D3Series series(spec);
        const SphereRule rule(2, 2 * maxdeg);
        // T(h(angle)) shifts the azimuth of the argument by +angle
        return integrate(rule, [&](const SpherePoint& p) {
            const double c = std::cos(p.angles()[1]);
            cplx a = 0.0, b = 0.0;
            for (int k = -series.order(); k <= series.order(); ++k) {
                const cplx rad = series.radial(k, c);
                a += rad * std::polar(1.0, k * (p.angles()[0] + angle));
                b += rad * std::polar(1.0, k * p.angles()[0]);
            }
            return a * std::conj(b);
        });
    }
    if (!spec.profile.symmetric())
        throw std::invalid_argument("autocorrelation: requires a symmetric variant for d >= 4");
    const detail::SymmetricSeries series(spec);
    const int K = spec.profile.K();
    const double lam = 0.5 * (spec.d - 3);
    const double ca = std::cos(angle), sa = std::sin(angle);
    const SphereRule rule(spec.d - 1, 2 * maxdeg);
    const int d = spec.d;
    std::vector<cplx> parts(rule.latitude_group_count());
    const int A = rule.azimuth_count();
    detail::parallel_for(parts.size(), [&](std::size_t b) {
        std::vector<cplx> acc(A);
        for (int a = 0; a < A; ++a) {
            const SpherePoint p = rule.point(b * A + a);
            const auto& x = p.cartesian();
            const double c = std::max(-1.0, std::min(1.0, x[d - 1]));
            double head2 = 0.0;
            for (int i = 0; i < d - 1; ++i) head2 += x[i] * x[i];
            const double rim = std::sqrt(head2);
            // <x_hat, e_{d-1}> and <x_hat, h e_{d-1}>, h rotating in the
            // (e_{d-2}, e_{d-1}) tangent plane
            const double u0 = rim < 1e-290 ? 0.0 : x[d - 2] / rim;
            const double u1 = rim < 1e-290 ? 0.0 : (ca * x[d - 2] + sa * x[d - 3]) / rim;
            double va = series.radial_series(0, c), vb = va;
            double rim_pow = 1.0;
            for (int m = 1; m <= K; ++m) {
                rim_pow *= rim;
                const double rs = series.radial_series(m, c) * rim_pow;
                if (rs == 0.0) continue;
                va += rs * gegenbauer_eval({lam, m}, std::max(-1.0, std::min(1.0, u1)));
                vb += rs * gegenbauer_eval({lam, m}, std::max(-1.0, std::min(1.0, u0)));
            }
            acc[a] = rule.weight(b * A + a) * va * vb;
        }
        parts[b] = detail::pairwise_sum(acc);
    });
    return detail::pairwise_sum(parts);
}

// Coefficient-space form of the auto-correlation (the analytic benchmark
// the quadrature is checked against).
inline cplx autocorrelation_closed(const WaveletSpec& spec, double angle)
{
    detail::check_spec(spec);
    const double N = spec.bandwidth;
    cplx acc = 0.0;
    for (int n = detail::support_min(spec.bandwidth); n <= detail::support_max(spec.bandwidth); ++n) {
        const double kap = kappa(spec.filter, n / N);
        if (kap <= 0.0) continue;
        const double base = static_cast<double>(dim_harmonic({spec.d, n})) * kap * kap;
        if (spec.d == 3) {
            const int kn = std::min(spec.profile.K(), n);
            for (int k = -kn; k <= kn; ++k)
                acc += base * std::norm(spec.profile.d3_value(n, k)) * std::polar(1.0, k * angle);
        } else if (spec.profile.kind() == ProfileKind::SymmetricOptimal) {
            acc += base * std::pow(std::cos(angle), optimal_order(spec.profile.K(), n));
        } else {
            const double lam = 0.5 * (spec.d - 3);
            const int kn = std::min(spec.profile.K(), n);
            double sum = 0.0;
            for (int m = 0; m <= kn; ++m) {
                const double pv = spec.profile.sym_value(n, m);
                if (pv == 0.0) continue;
                const double weight = std::exp(std::lgamma(static_cast<double>(spec.d - 3)) +
                                               std::lgamma(m + 1.0) - std::lgamma(static_cast<double>(spec.d + m - 3)));
                sum += weight * pv * pv * gegenbauer_eval({lam, m}, std::cos(angle));
            }
            acc += base * sum;
        }
    }
    return acc;
}

// Steering residual: reconstruct T(h) Psi from rotated copies at fixed
// orientations with rotation-dependent weights, and return the largest
// pointwise error over a dense slice grid. n_orient <= 0 selects the
// smallest exact set (2K+1 orientations for d = 3, a degree-2K stabilizer
// rule otherwise); fewer orientations demonstrate aliasing.
inline double steer_check(const WaveletSpec& spec, const Rotation& h, int n_orient = 0)
{
    detail::check_spec(spec);
    const int K = spec.profile.K();
    const int d = spec.d;
    if (h.dim() != d) throw std::domain_error("steer_check: rotation dimension mismatch");
    // h must stabilize the pole
    {
        std::vector<double> ed(d, 0.0);
        ed[d - 1] = 1.0;
        const auto he = h.apply(ed);
        if (std::abs(he[d - 1] - 1.0) > 1e-10)
            throw std::invalid_argument("steer_check: rotation must fix the pole");
    }
    const int nt = 96, nphi = 96;
    if (d == 3) {
        const detail::D3Series series(spec);
        const double gamma = std::atan2(h(1, 0), h(0, 0));
        const int M = n_orient > 0 ? n_orient : 2 * K + 1;
        std::vector<double> gam(M);
        std::vector<cplx> v(M);
        for (int p = 0; p < M; ++p) {
            gam[p] = 2.0 * pi * p / M;
            cplx acc = 0.0;
            for (int k = -K; k <= K; ++k) acc += std::polar(1.0, k * (gamma - gam[p]));
            v[p] = acc / static_cast<double>(M);
        }
        double worst = 0.0;
        for (int i = 0; i <= nt; ++i) {
            const double t = pi * i / nt;
            const double c = std::cos(t);
            std::vector<cplx> rad(2 * K + 1);
            for (int k = -K; k <= K; ++k) rad[k + K] = series.radial(k, c);
            for (int jp = 0; jp < nphi; ++jp) {
                const double phi_angle = 2.0 * pi * jp / nphi;
                cplx target = 0.0;
                for (int k = -K; k <= K; ++k) target += rad[k + K] * std::polar(1.0, k * (phi_angle + gamma));
                cplx mix = 0.0;
                for (int p = 0; p < M; ++p) {
                    cplx rot = 0.0;
                    for (int k = -K; k <= K; ++k) rot += rad[k + K] * std::polar(1.0, k * (phi_angle + gam[p]));
                    mix += v[p] * rot;
                }
                worst = std::max(worst, std::abs(target - mix));
            }
        }
        return worst;
    }
    if (!spec.profile.symmetric())
        throw std::invalid_argument("steer_check: unsupported profile");
    // orientation set and reproducing weights on the direction sphere
    const DirectionalRule rule = DirectionalRule::on_sphere(d, n_orient > 0 ? n_orient : K);
    std::vector<double> e1(d, 0.0);
    e1[d - 2] = 1.0;
    const auto hu_full = h.apply(e1);
    std::vector<double> hu(hu_full.begin(), hu_full.end() - 1);
    const double lam = 0.5 * (d - 3);
    const std::size_t M = rule.count();
    std::vector<double> v(M);
    for (std::size_t p = 0; p < M; ++p) {
        const auto up = rule.direction(p).cartesian();
        double dot = 0.0;
        for (int i = 0; i < d - 1; ++i) dot += hu[i] * up[i];
        dot = std::max(-1.0, std::min(1.0, dot));
        double acc = 1.0;
        for (int m = 1; m <= K; ++m) acc += (2.0 * m + d - 3.0) / (d - 3.0) * gegenbauer_eval({lam, m}, dot);
        v[p] = rule.weight(p) * acc;
    }
    const detail::SymmetricSeries series(spec);
    auto steered = [&](double t, const std::vector<double>& u, double phi_angle) {
        // Psi(g_u^{-1} x) for x = cos t e_d + sin t (cos phi e_{d-1} + sin phi e_{d-2})
        const double c = std::cos(t);
        const double s = std::sin(t);
        const double cp = std::max(-1.0, std::min(1.0, std::cos(phi_angle) * u[d - 2] + std::sin(phi_angle) * u[d - 3]));
        double acc = series.radial_series(0, c);
        double spow = 1.0;
        for (int m = 1; m <= K; ++m) {
            spow *= s;
            acc += series.radial_series(m, c) * spow * gegenbauer_eval({lam, m}, cp);
        }
        return acc;
    };
    double worst = 0.0;
    for (int i = 0; i <= nt; ++i) {
        const double t = pi * i / nt;
        for (int jp = 0; jp < nphi; ++jp) {
            const double phi_angle = 2.0 * pi * jp / nphi;
            const double target = steered(t, hu, phi_angle);
            double mix = 0.0;
            for (std::size_t p = 0; p < M; ++p) {
                const auto up = rule.direction(p).cartesian();
                std::vector<double> upv(up.begin(), up.end());
                upv.push_back(0.0);
                mix += v[p] * steered(t, upv, phi_angle);
            }
            worst = std::max(worst, std::abs(target - mix));
        }
    }
    return worst;
}

struct PsiGrid {
    int K = 0;
    int N = 1;
    std::vector<double> t;      // rows
    std::vector<double> phi;    // columns
    std::vector<double> values; // row-major, |max| = 1 when rescaled
    bool rescaled = false;
    double scale = 1.0; // the max |value| divided out
};

// Sample the two-variable slice on [0, t_max] x [0, 2 pi) and rescale to
// peak magnitude one.
inline PsiGrid fig1_grid(const WaveletSpec& spec, int nt, int nphi, double t_max = pi / 2, bool rescale = true)
{
    detail::check_spec(spec);
    if (!spec.profile.symmetric())
        throw std::invalid_argument("fig1_grid: requires a symmetric (SO(d-2)-invariant) variant");
    if (nt < 2 || nphi < 2) throw std::domain_error("fig1_grid: grid too small");
    PsiGrid grid;
    grid.K = spec.profile.K();
    grid.N = spec.bandwidth;
    grid.t.resize(nt);
    grid.phi.resize(nphi);
    grid.values.assign(static_cast<std::size_t>(nt) * nphi, 0.0);
    for (int i = 0; i < nt; ++i) grid.t[i] = t_max * i / (nt - 1);
    for (int j = 0; j < nphi; ++j) grid.phi[j] = 2.0 * pi * j / nphi;
    detail::SliceEvaluator ev(spec);
    for (int i = 0; i < nt; ++i) {
        ev.load_t(grid.t[i]);
        for (int j = 0; j < nphi; ++j) grid.values[static_cast<std::size_t>(i) * nphi + j] = ev.value(grid.phi[j]).real();
    }
    if (rescale) {
        double peak = 0.0;
        for (double v : grid.values) peak = std::max(peak, std::abs(v));
        if (peak > 0.0) {
            for (double& v : grid.values) v /= peak;
            grid.scale = peak;
            grid.rescaled = true;
        }
    }
    return grid;
}

// Full width at half maximum of the radial magnitude profile around the
// main lobe of a slice grid; the half-height crossings are located by
// linear interpolation between samples.
inline double main_lobe_fwhm(const PsiGrid& grid)
{
    const std::size_t nt = grid.t.size(), nphi = grid.phi.size();
    std::vector<double> prof(nt, 0.0);
    for (std::size_t i = 0; i < nt; ++i)
        for (std::size_t j = 0; j < nphi; ++j)
            prof[i] = std::max(prof[i], std::abs(grid.values[i * nphi + j]));
    std::size_t ipk = 0;
    for (std::size_t i = 1; i < nt; ++i)
        if (prof[i] > prof[ipk]) ipk = i;
    const double half = 0.5 * prof[ipk];
    std::size_t lo = ipk, hi = ipk;
    while (lo > 0 && prof[lo - 1] >= half) --lo;
    while (hi + 1 < nt && prof[hi + 1] >= half) ++hi;
    auto cross = [&](std::size_t inside, std::size_t outside) {
        const double pi_v = prof[inside], po = prof[outside];
        if (pi_v == po) return grid.t[inside];
        const double f = (pi_v - half) / (pi_v - po);
        return grid.t[inside] + f * (grid.t[outside] - grid.t[inside]);
    };
    const double t_lo = lo > 0 ? cross(lo, lo - 1) : grid.t[lo];
    const double t_hi = hi + 1 < nt ? cross(hi, hi + 1) : grid.t[hi];
    return t_hi - t_lo;
}

} // namespace spherewave

#endif
