#ifndef SPHEREWAVE_DETAIL_FRAME_ENGINE_HPP
#define SPHEREWAVE_DETAIL_FRAME_ENGINE_HPP

// Shared machinery behind frame analysis and synthesis.
//
// Every atom rotation factors as  g = A(phi_a) G_b h_m  with A an azimuth
// shift, G_b the latitude chain of the position grid and h_m a stabilizer
// rotation. Pulled back through G_b, the wavelet splits into finitely many
// components Xi_mu whose stabilizer dependence is a fixed table:
//     Psi(h^{-1} y) = sum_mu chi_mu(h) Xi_mu(y).
// Restricted to a latitude ring, every factor is a trigonometric polynomial
// in the azimuth, so the inner products against all azimuth shifts collapse
// to products of ring-Fourier coefficients. The result equals the per-atom
// spatial quadrature of the same integrands exactly (same rules, same
// polynomials), at a small fraction of the arithmetic.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "../quadrature.hpp"
#include "../wavelet.hpp"
#include "fft.hpp"
#include "parallel.hpp"
#include "sum.hpp"

namespace spherewave::detail {

constexpr int engine_max_dim = 8;

// Spherical angles of a unit vector, stack buffers only.
inline void angles_from_unit(const double* x, int dim, double* ang)
{
    double t1 = std::atan2(x[0], x[1]);
    if (t1 < 0.0) t1 += 2.0 * pi;
    ang[0] = t1;
    double r = std::hypot(x[0], x[1]);
    for (int m = 2; m <= dim - 1; ++m) {
        ang[m - 1] = std::atan2(r, x[m]);
        r = std::hypot(r, x[m]);
    }
}

// Unnormalized angle product of the basis function (n, chain) in the given
// dimension; allocation-free twin of HarmonicTable::unnormalized.
inline cplx harmonic_product_stack(int dim, int n, const int* chain, const double* ang)
{
    double re = 1.0;
    int kj = n;
    for (int j = 0; j < dim - 2; ++j) {
        const int s = std::abs(chain[j]);
        const double theta = ang[dim - 2 - j];
        const double c = std::cos(theta);
        const double lam = 0.5 * (dim - j - 2) + s;
        const int deg = kj - s;
        double v = 1.0;
        if (deg >= 1) {
            double prev = 1.0, cur = 2.0 * lam * c;
            v = cur;
            for (int a = 2; a <= deg; ++a) {
                v = (2.0 * (a + lam - 1.0) * c * cur - (a + 2.0 * lam - 2.0) * prev) / a;
                prev = cur;
                cur = v;
            }
        }
        re *= v * std::pow(std::sin(theta), s);
        kj = s;
    }
    return re * std::polar(1.0, chain[dim - 3] * ang[0]);
}

// The component expansion of one wavelet scale, together with the
// stabilizer table against a fixed directional rule.
class ComponentSet {
public:
    ComponentSet(const WaveletSpec& spec, const DirectionalRule& dir, int cap_degree)
        : d_(spec.d)
    {
        const int ntr = std::min(support_max(spec.bandwidth), cap_degree);
        k_eff_ = std::min(spec.profile.K(), ntr < 0 ? 0 : ntr);
        const std::size_t r = dir.count();
        if (d_ == 3) {
            d3_.emplace(spec, cap_degree);
            n_mu_ = 2 * k_eff_ + 1;
            x_.assign(static_cast<std::size_t>(n_mu_) * r, cplx(0.0));
            for (int k = -k_eff_; k <= k_eff_; ++k)
                for (std::size_t m = 0; m < r; ++m)
                    x_[static_cast<std::size_t>(k + k_eff_) * r + m] = std::polar(1.0, -k * dir.angle(m));
        } else {
            sym_.emplace(spec, cap_degree);
            for (int m = 0; m <= k_eff_; ++m) {
                for (const auto& idx : enumerate_indices(d_ - 1, m)) {
                    mu_m_.push_back(m);
                    mu_chain_.push_back(idx.k);
                    mu_norm_.push_back(harmonic_norm_A(d_ - 1, m, idx.k));
                }
            }
            n_mu_ = static_cast<int>(mu_m_.size());
            x_.assign(static_cast<std::size_t>(n_mu_) * r, cplx(0.0));
            std::array<double, engine_max_dim> ang{};
            for (std::size_t m = 0; m < r; ++m) {
                const auto dirpt = dir.direction(m).cartesian();
                angles_from_unit(dirpt.data(), d_ - 1, ang.data());
                for (int mu = 0; mu < n_mu_; ++mu) {
                    const double gamma = static_cast<double>(d_ - 3) / (2.0 * mu_m_[mu] + d_ - 3);
                    x_[static_cast<std::size_t>(mu) * r + m] =
                        gamma * mu_norm_[mu] *
                        harmonic_product_stack(d_ - 1, mu_m_[mu], mu_chain_[mu].data(), ang.data());
                }
            }
        }
    }

    int count() const { return n_mu_; }
    int effective_order() const { return k_eff_; }

    // conj(chi_mu(h_m)); synthesis uses the conjugate of this table.
    cplx stabilizer(int mu, std::size_t m, std::size_t r) const { return x_[static_cast<std::size_t>(mu) * r + m]; }
    const std::vector<cplx>& stabilizer_table() const { return x_; }

    // Xi_mu(y) for a unit vector y, written to out[count()]. The azimuthal
    // factors are evaluated in their polynomial form (tangential
    // coordinates times rim powers), which stays fully accurate at and
    // near the poles where sqrt(1 - c^2) would cancel.
    void eval(const double* y, cplx* out) const
    {
        if (d_ == 3) {
            const double c = std::max(-1.0, std::min(1.0, y[2]));
            const cplx up(y[1], y[0]); // sin(t2) e^{i t1}
            for (int k = -k_eff_; k <= k_eff_; ++k) {
                cplx pw = 1.0;
                const cplx base = k >= 0 ? up : std::conj(up);
                for (int i = 0; i < std::abs(k); ++i) pw *= base;
                out[k + k_eff_] = d3_->radial_series(k, c) * pw;
            }
            return;
        }
        const double c = std::max(-1.0, std::min(1.0, y[d_ - 1]));
        double head2 = 0.0;
        for (int i = 0; i < d_ - 1; ++i) head2 += y[i] * y[i];
        const double rim = std::sqrt(head2);
        std::array<double, engine_max_dim> yhat{};
        std::array<double, engine_max_dim> ang{};
        if (rim < 1e-290) {
            for (int mu = 0; mu < n_mu_; ++mu) out[mu] = (mu_m_[mu] == 0) ? cplx(sym_->radial_series(0, c)) : cplx(0.0);
            return;
        }
        const double inv = 1.0 / rim;
        for (int i = 0; i < d_ - 1; ++i) yhat[i] = y[i] * inv;
        angles_from_unit(yhat.data(), d_ - 1, ang.data());
        double radial_cache = 0.0, rim_pow = 1.0;
        int cached_m = -1;
        for (int mu = 0; mu < n_mu_; ++mu) {
            const int m = mu_m_[mu];
            if (m != cached_m) {
                radial_cache = sym_->radial_series(m, c);
                rim_pow = 1.0;
                for (int i = 0; i < m; ++i) rim_pow *= rim;
                cached_m = m;
            }
            out[mu] = radial_cache * rim_pow * mu_norm_[mu] *
                      harmonic_product_stack(d_ - 1, m, mu_chain_[mu].data(), ang.data());
        }
    }

    bool empty_support() const
    {
        if (d_ == 3) return d3_->degree_max() < d3_->degree_min();
        return sym_->degree_max() < sym_->degree_min();
    }

private:
    int d_;
    int n_mu_ = 0;
    int k_eff_ = 0;
    std::vector<cplx> x_;
    std::optional<D3Series> d3_;
    std::optional<SymmetricSeries> sym_;
    std::vector<int> mu_m_;
    std::vector<std::vector<int>> mu_chain_;
    std::vector<double> mu_norm_;
};

// Per-scale grid data shared by analysis and synthesis: the latitude rules
// of the inner-product quadrature, per-node basis tables, the precomputed
// sample ring and azimuth phase table of the position grid.
struct ScaleContext {
    int d = 3;
    int j = 1;
    int ntr = -1;  // series truncation degree; < nmin means the scale is inert
    int nmin = 1;  // lowest wavelet degree at this scale
    int table_deg = 0;
    int PK = 0;
    const SphereRule* positions = nullptr;
    const DirectionalRule* directions = nullptr;
    std::vector<Rule1D> lat; // normalized analysis latitudes
    std::size_t T = 0;
    std::vector<double> t_weight;
    std::vector<std::vector<double>> t_angles; // [t][d-2]
    std::vector<HarmonicTable> t_table;        // latitude factors, azimuth zero
    std::vector<double> ring;                  // [(t*PK + s)*d + i]
    std::vector<cplx> phase;                   // [a*W + (w+ntr)] = e^{i w phi_a}
    int W = 0;                                 // 2*ntr+1

    bool active() const { return ntr >= nmin; }
};

inline ScaleContext make_scale_context(int d, int j, const WaveletSpec& spec, const SphereRule& positions,
                                       const DirectionalRule& directions, int cap_degree, int table_deg)
{
    ScaleContext C;
    C.d = d;
    C.j = j;
    C.positions = &positions;
    C.directions = &directions;
    C.nmin = support_min(spec.bandwidth);
    C.ntr = std::min(support_max(spec.bandwidth), cap_degree);
    C.table_deg = table_deg;
    if (!C.active()) return C;
    C.W = 2 * C.ntr + 1;
    C.PK = static_cast<int>(next_pow2(static_cast<std::size_t>(C.W)));

    const int quad_deg = table_deg + C.ntr;
    const int nodes = quad_deg / 2 + 1;
    C.lat.reserve(d - 2);
    std::size_t T = 1;
    for (int level = 2; level <= d - 1; ++level) {
        Rule1D r = gauss_gegenbauer(0.5 * (level - 2), nodes);
        const double mass = pairwise_sum(r.weights);
        for (double& w : r.weights) w /= mass;
        T *= r.nodes.size();
        C.lat.push_back(std::move(r));
    }
    C.T = T;
    C.t_weight.resize(T);
    C.t_angles.assign(T, std::vector<double>(d - 2));
    C.t_table.reserve(T);
    for (std::size_t t = 0; t < T; ++t) {
        std::size_t rem = t;
        double w = 1.0;
        for (int lev = 0; lev < d - 2; ++lev) {
            const std::size_t nl = C.lat[lev].nodes.size();
            const std::size_t i = rem % nl;
            rem /= nl;
            C.t_angles[t][lev] = std::acos(C.lat[lev].nodes[i]);
            w *= C.lat[lev].weights[i];
        }
        C.t_weight[t] = w;
        std::vector<double> full(d - 1, 0.0);
        for (int lev = 0; lev < d - 2; ++lev) full[lev + 1] = C.t_angles[t][lev];
        C.t_table.emplace_back(d, table_deg, SpherePoint::from_angles(d, full));
    }
    // sample ring for kernel transforms
    C.ring.resize(T * static_cast<std::size_t>(C.PK) * d);
    for (std::size_t t = 0; t < T; ++t) {
        for (int s = 0; s < C.PK; ++s) {
            std::vector<double> full(d - 1, 0.0);
            full[0] = 2.0 * pi * s / C.PK;
            for (int lev = 0; lev < d - 2; ++lev) full[lev + 1] = C.t_angles[t][lev];
            const auto p = SpherePoint::from_angles(d, full);
            for (int i = 0; i < d; ++i) C.ring[(t * C.PK + s) * d + i] = p.cartesian()[i];
        }
    }
    // azimuth phases of the position grid
    const int A = positions.azimuth_count();
    C.phase.resize(static_cast<std::size_t>(A) * C.W);
    for (int a = 0; a < A; ++a) {
        const double phi = positions.azimuth_angle(a);
        for (int w = -C.ntr; w <= C.ntr; ++w)
            C.phase[static_cast<std::size_t>(a) * C.W + (w + C.ntr)] = std::polar(1.0, w * phi);
    }
    return C;
}

// Ring-Fourier table of a band-limited signal: out[(w+ntr)*T + t] carries
// the azimuth mode w of f restricted to latitude ring t, premultiplied by
// the ring's quadrature weight.
inline std::vector<cplx> ring_table(const CoefficientVector& f, const ScaleContext& C)
{
    std::vector<cplx> F(static_cast<std::size_t>(C.W) * C.T, cplx(0.0));
    for (const auto& [idx, v] : f.entries()) {
        const int w = idx.k[C.d - 3];
        if (std::abs(w) > C.ntr) continue;
        if (idx.n > C.table_deg) continue;
        const double norm = harmonic_norm_A(idx.d, idx.n, idx.k);
        const std::size_t row = static_cast<std::size_t>(w + C.ntr) * C.T;
        for (std::size_t t = 0; t < C.T; ++t) {
            const cplx lat = C.t_table[t].unnormalized(idx.n, idx.k); // imaginary part is zero here
            F[row + t] += v * norm * lat.real();
        }
    }
    for (int w = 0; w < C.W; ++w)
        for (std::size_t t = 0; t < C.T; ++t) F[static_cast<std::size_t>(w) * C.T + t] *= C.t_weight[t];
    return F;
}

// Projection of accumulated ring data S[(w+ntr)*T + t] onto harmonic
// coefficients of degree <= out_deg, added into out.
inline void project_ring(const ScaleContext& C, const std::vector<cplx>& S, int out_deg, CoefficientVector& out)
{
    for (int n = 0; n <= out_deg; ++n) {
        for (const auto& idx : enumerate_indices(C.d, n)) {
            const int w = idx.k[C.d - 3];
            if (std::abs(w) > C.ntr) continue;
            const double norm = harmonic_norm_A(C.d, n, idx.k);
            const std::size_t row = static_cast<std::size_t>(w + C.ntr) * C.T;
            const cplx acc = pairwise_sum<cplx>(0, C.T, [&](std::size_t t) {
                return C.t_weight[t] * C.t_table[t].unnormalized(n, idx.k).real() * S[row + t];
            });
            if (acc != cplx(0.0)) out.set(idx, out.get(idx) + norm * acc);
        }
    }
}

// Kernel transform for one latitude group: J[(mu*W + (w+ntr))*T + t] holds
// the ring-Fourier coefficients of conj(Xi_mu(G_b^{-1} z(., t))).
inline void build_kernel(const ScaleContext& C, const ComponentSet& comps, std::size_t b,
                         std::vector<cplx>& J, std::vector<cplx>& samples, std::vector<cplx>& modes)
{
    const int n_mu = comps.count();
    const auto lats = C.positions->latitude_angles(b);
    const int d = C.d;
    std::array<double, engine_max_dim> cs{}, sn{};
    for (int lev = 0; lev < d - 2; ++lev) {
        cs[lev] = std::cos(lats[lev]);
        sn[lev] = std::sin(lats[lev]);
    }
    J.assign(static_cast<std::size_t>(n_mu) * C.W * C.T, cplx(0.0));
    samples.resize(static_cast<std::size_t>(n_mu) * C.PK);
    modes.resize(C.W);
    std::array<double, engine_max_dim> y{};
    std::vector<cplx> vals(n_mu);
    for (std::size_t t = 0; t < C.T; ++t) {
        for (int s = 0; s < C.PK; ++s) {
            const double* z = &C.ring[(t * C.PK + s) * d];
            for (int i = 0; i < d; ++i) y[i] = z[i];
            // G_b^{-1} z: inverse latitude chain, levels ascending
            for (int lev = 0; lev < d - 2; ++lev) {
                const double a0 = y[lev + 1], b0 = y[lev + 2];
                y[lev + 1] = cs[lev] * a0 - sn[lev] * b0;
                y[lev + 2] = sn[lev] * a0 + cs[lev] * b0;
            }
            comps.eval(y.data(), vals.data());
            for (int mu = 0; mu < n_mu; ++mu)
                samples[static_cast<std::size_t>(mu) * C.PK + s] = std::conj(vals[mu]);
        }
        for (int mu = 0; mu < n_mu; ++mu) {
            ring_coefficients(&samples[static_cast<std::size_t>(mu) * C.PK], C.PK, C.ntr, modes.data());
            for (int w = 0; w < C.W; ++w)
                J[(static_cast<std::size_t>(mu) * C.W + w) * C.T + t] = modes[w];
        }
    }
}

} // namespace spherewave::detail

#endif
