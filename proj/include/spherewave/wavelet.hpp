#ifndef SPHEREWAVE_WAVELET_HPP
#define SPHEREWAVE_WAVELET_HPP

// Band-limited directional wavelets and isotropic scaling kernels.
//
// A wavelet of bandwidth N carries the harmonic coefficients
//   sqrt(dim H_n) * kappa(n/N) * zeta(n, k),
// supported on degrees N/2 < n < 2N. The directionality table zeta has unit
// l2 norm in k for every degree n >= 1, vanishes for k_1 > K, and is
// degree-independent once n >= K. Variants:
//   Zonal            - all weight on the zonal chain (isotropic, any d)
//   SymmetricOptimal - rotation-invariant under SO(d-2) with the sharpest
//                      attainable directional auto-correlation (d >= 4)
//   CustomSymmetric  - user tables phi_{K,n}(m) in the SO(d-2) setting
//   CustomD3         - user tables zeta_{K,k}^n for d = 3.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

#include "filters.hpp"
#include "specfun.hpp"
#include "sphere.hpp"

namespace spherewave {

enum class ProfileKind { Zonal, SymmetricOptimal, CustomD3, CustomSymmetric };

class DirectionalProfile {
public:
    static DirectionalProfile zonal()
    {
        DirectionalProfile p;
        p.kind_ = ProfileKind::Zonal;
        p.K_ = 0;
        return p;
    }

    // Table rows phi_{K,n}(m), m = 0..min(K,n), one row per n in [1, K];
    // the last row also serves every degree n >= K.
    static DirectionalProfile custom_symmetric(int d, int K, std::vector<std::vector<double>> rows)
    {
        if (d < 4) throw std::invalid_argument("DirectionalProfile: symmetric tables need d >= 4");
        if (K < 1) throw std::invalid_argument("DirectionalProfile: symmetric tables need K >= 1");
        if (static_cast<int>(rows.size()) != K)
            throw std::invalid_argument("DirectionalProfile: expected one table row per degree 1..K");
        for (int n = 1; n <= K; ++n) {
            const auto& row = rows[n - 1];
            if (static_cast<int>(row.size()) != n + 1)
                throw std::invalid_argument("DirectionalProfile: row for degree n must have n+1 entries");
            double s = 0.0;
            for (double v : row) s += v * v;
            if (std::abs(s - 1.0) > 1e-10)
                throw std::invalid_argument("DirectionalProfile: table row is not unit-normalized");
        }
        DirectionalProfile p;
        p.kind_ = ProfileKind::CustomSymmetric;
        p.d_ = d;
        p.K_ = K;
        p.sym_rows_ = std::move(rows);
        return p;
    }

    // Table rows zeta_{K,k}^n for d = 3, k = -min(K,n)..min(K,n); one row
    // per n in [1, K], the last row shared by all n >= K.
    static DirectionalProfile custom_d3(int K, std::vector<std::vector<cplx>> rows)
    {
        if (K < 1) throw std::invalid_argument("DirectionalProfile: d3 tables need K >= 1");
        if (static_cast<int>(rows.size()) != K)
            throw std::invalid_argument("DirectionalProfile: expected one table row per degree 1..K");
        for (int n = 1; n <= K; ++n) {
            const auto& row = rows[n - 1];
            if (static_cast<int>(row.size()) != 2 * n + 1)
                throw std::invalid_argument("DirectionalProfile: row for degree n must have 2n+1 entries");
            double s = 0.0;
            for (cplx v : row) s += std::norm(v);
            if (std::abs(s - 1.0) > 1e-10)
                throw std::invalid_argument("DirectionalProfile: table row is not unit-normalized");
        }
        DirectionalProfile p;
        p.kind_ = ProfileKind::CustomD3;
        p.d_ = 3;
        p.K_ = K;
        p.d3_rows_ = std::move(rows);
        return p;
    }

    ProfileKind kind() const { return kind_; }
    int K() const { return K_; }
    int bound_dim() const { return d_; } // 0 when dimension-independent

    bool symmetric() const
    {
        return kind_ == ProfileKind::Zonal || kind_ == ProfileKind::SymmetricOptimal ||
               kind_ == ProfileKind::CustomSymmetric;
    }

    // phi_{K,n}(m) for symmetric variants (zonal: delta_{m,0}).
    double sym_value(int n, int m) const
    {
        if (!symmetric()) throw std::logic_error("DirectionalProfile: not a symmetric variant");
        if (n == 0) return 0.0;
        if (kind_ == ProfileKind::Zonal) return m == 0 ? 1.0 : 0.0;
        const int kn = std::min(K_, n);
        if (m < 0 || m > kn) return 0.0;
        return sym_rows_[std::min(n, K_) - 1][m];
    }

    // zeta_{K,k}^n for d = 3 variants (zonal: delta_{k,0}).
    cplx d3_value(int n, int k) const
    {
        if (kind_ == ProfileKind::Zonal) return (n >= 1 && k == 0) ? cplx(1.0) : cplx(0.0);
        if (kind_ != ProfileKind::CustomD3) throw std::logic_error("DirectionalProfile: not a d3 variant");
        if (n == 0) return 0.0;
        const int kn = std::min(K_, n);
        if (std::abs(k) > kn) return 0.0;
        return d3_rows_[std::min(n, K_) - 1][k + kn];
    }

    // Full-chain accessor.
    cplx zeta(int d, int n, const std::vector<int>& chain) const
    {
        if (n == 0) return 0.0;
        if (d == 3) return d3_value(n, chain[0]);
        for (std::size_t i = 1; i < chain.size(); ++i)
            if (chain[i] != 0) return 0.0;
        return sym_value(n, chain[0]);
    }

private:
    friend DirectionalProfile optimal_profile(int d, int K);
    ProfileKind kind_ = ProfileKind::Zonal;
    int d_ = 0;
    int K_ = 0;
    std::vector<std::vector<double>> sym_rows_;
    std::vector<std::vector<cplx>> d3_rows_;
};

// Angular order of the optimal table at degree n: min(K, n), lowered by
// one when that would have the wrong parity. Keeping every contributing
// order congruent to K mod 2 preserves the sign symmetry of the wavelet
// under antipodal tangent directions at degrees below K.
inline int optimal_order(int K, int n) { return n >= K ? K : ((K - n) % 2 == 0 ? n : n - 1); }

// SO(d-2)-invariant tables whose directional auto-correlation collapses to
// the pure power (cos angle)^{optimal_order(K, n)} - the sharpest profile
// the directionality bound K and the sign symmetry admit. Degenerate for
// d = 3.
inline DirectionalProfile optimal_profile(int d, int K)
{
    if (d == 3) throw std::domain_error("optimal_profile: d = 3 is degenerate here; supply a d3 table");
    if (d < 4) throw std::domain_error("optimal_profile: d must be >= 4");
    if (K < 0) throw std::domain_error("optimal_profile: K must be nonnegative");
    if (K == 0) return DirectionalProfile::zonal();
    const double lambda = 0.5 * (d - 3);
    std::vector<std::vector<double>> rows(K);
    for (int n = 1; n <= K; ++n) {
        const int kn = optimal_order(K, n); // order of the row serving degree n
        rows[n - 1].assign(n + 1, 0.0);
        for (int m = kn % 2 == 0 ? 0 : 1; m <= kn; m += 2) {
            double lg = std::lgamma(lambda) - std::lgamma(2.0 * lambda);
            lg += std::lgamma(kn + 1.0);
            lg += std::log(m + lambda);
            lg += std::lgamma(2.0 * lambda + m);
            lg -= kn * 0.69314718055994530941723212145817657; // log 2
            lg -= std::lgamma(0.5 * (kn - m) + 1.0);
            lg -= std::lgamma(lambda + 0.5 * (kn + m) + 1.0);
            lg -= std::lgamma(m + 1.0);
            const double mag = std::exp(0.5 * lg);
            rows[n - 1][m] = ((m / 2) % 2 == 0 ? 1.0 : -1.0) * mag;
        }
    }
    DirectionalProfile p;
    p.kind_ = ProfileKind::SymmetricOptimal;
    p.d_ = d;
    p.K_ = K;
    p.sym_rows_ = std::move(rows);
    return p;
}

// d = 3 convention used when no explicit table is given: split the weight
// evenly between k = +min(K,n) and -min(K,n), which keeps the wavelet real
// and gives the expected sign symmetry. This is a documented convention,
// not an optimality statement.
inline DirectionalProfile d3_equal_split_profile(int K)
{
    if (K == 0) return DirectionalProfile::zonal();
    const double inv = 1.0 / std::sqrt(2.0);
    std::vector<std::vector<cplx>> rows(K);
    for (int n = 1; n <= K; ++n) {
        rows[n - 1].assign(2 * n + 1, cplx(0.0));
        rows[n - 1].front() = inv;
        rows[n - 1].back() = inv;
    }
    return DirectionalProfile::custom_d3(K, std::move(rows));
}

// Sparse complex expansion over the harmonic basis.
class CoefficientVector {
public:
    CoefficientVector() = default;
    explicit CoefficientVector(int d) : d_(d) {}

    int dim() const { return d_; }
    int max_degree() const { return entries_.empty() ? 0 : entries_.rbegin()->first.n; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    void set(const HarmonicIndex& idx, cplx v)
    {
        if (idx.d != d_) throw std::domain_error("CoefficientVector: dimension mismatch");
        validate_index(idx);
        if (v == cplx(0.0))
            entries_.erase(idx);
        else
            entries_[idx] = v;
        norms_valid_ = false;
    }

    cplx get(const HarmonicIndex& idx) const
    {
        auto it = entries_.find(idx);
        return it == entries_.end() ? cplx(0.0) : it->second;
    }

    const std::map<HarmonicIndex, cplx>& entries() const { return entries_; }

    double norm2() const
    {
        std::vector<double> sq;
        sq.reserve(entries_.size());
        for (const auto& [idx, v] : entries_) sq.push_back(std::norm(v));
        return detail::pairwise_sum(sq);
    }

    // Pointwise evaluation; normalization constants are cached across calls.
    cplx eval(const SpherePoint& p) const
    {
        if (entries_.empty()) return 0.0;
        ensure_norms();
        detail::HarmonicTable tbl(d_, max_degree(), p);
        std::vector<cplx> terms;
        terms.reserve(entries_.size());
        std::size_t i = 0;
        for (const auto& [idx, v] : entries_) {
            terms.push_back(v * norms_[i] * tbl.unnormalized(idx.n, idx.k));
            ++i;
        }
        return detail::pairwise_sum(terms);
    }

    CoefficientVector& operator+=(const CoefficientVector& rhs)
    {
        for (const auto& [idx, v] : rhs.entries_) {
            auto& slot = entries_[idx];
            slot += v;
        }
        norms_valid_ = false;
        return *this;
    }

    CoefficientVector& operator*=(cplx a)
    {
        for (auto& [idx, v] : entries_) v *= a;
        return *this;
    }

private:
    void ensure_norms() const
    {
        if (norms_valid_) return;
        norms_.clear();
        norms_.reserve(entries_.size());
        for (const auto& [idx, v] : entries_) norms_.push_back(harmonic_norm_A(idx.d, idx.n, idx.k));
        norms_valid_ = true;
    }

    int d_ = 3;
    std::map<HarmonicIndex, cplx> entries_;
    mutable std::vector<double> norms_;
    mutable bool norms_valid_ = false;
};

struct WaveletSpec {
    int d = 3;
    DirectionalProfile profile;
    FilterProfile filter;
    int bandwidth = 1; // N; the dyadic scale j corresponds to N = 2^{j-1}

    static WaveletSpec dyadic(int d, DirectionalProfile profile, FilterProfile filter, int j)
    {
        if (j < 1) throw std::domain_error("WaveletSpec: dyadic scale must be >= 1");
        return {d, std::move(profile), filter, 1 << (j - 1)};
    }
};

namespace detail {

inline void check_spec(const WaveletSpec& s)
{
    if (s.d < 3) throw std::domain_error("WaveletSpec: d must be >= 3");
    if (s.bandwidth < 1) throw std::domain_error("WaveletSpec: bandwidth must be >= 1");
    const int bd = s.profile.bound_dim();
    if (bd != 0 && bd != s.d) throw std::invalid_argument("WaveletSpec: profile built for a different dimension");
    if (s.d >= 4 && s.profile.kind() == ProfileKind::CustomD3)
        throw std::invalid_argument("WaveletSpec: d3 tables cannot be used for d >= 4");
    if (s.d == 3 && !(s.profile.kind() == ProfileKind::Zonal || s.profile.kind() == ProfileKind::CustomD3))
        throw std::invalid_argument("WaveletSpec: d = 3 supports zonal or d3 tables");
}

inline int support_min(int N) { return N / 2 + 1; }
inline int support_max(int N) { return 2 * N - 1; }

} // namespace detail

// Harmonic coefficients of the wavelet.
inline CoefficientVector wavelet_coeffs(const WaveletSpec& spec)
{
    detail::check_spec(spec);
    CoefficientVector out(spec.d);
    const double N = spec.bandwidth;
    for (int n = detail::support_min(spec.bandwidth); n <= detail::support_max(spec.bandwidth); ++n) {
        const double kap = kappa(spec.filter, n / N);
        if (kap <= 0.0) continue;
        const double base = std::sqrt(static_cast<double>(dim_harmonic({spec.d, n}))) * kap;
        if (spec.d == 3) {
            const int kn = std::min(spec.profile.K(), n);
            for (int k = -kn; k <= kn; ++k) {
                const cplx z = spec.profile.d3_value(n, k);
                if (z != cplx(0.0)) out.set({3, n, {k}}, base * z);
            }
        } else {
            std::vector<int> chain(spec.d - 2, 0);
            const int kn = std::min(spec.profile.K(), n);
            for (int m = 0; m <= kn; ++m) {
                const double v = spec.profile.sym_value(n, m);
                if (v != 0.0) {
                    chain[0] = m;
                    out.set({spec.d, n, chain}, base * v);
                }
            }
        }
    }
    return out;
}

// Harmonic coefficients of the low-pass kernel at dyadic level j: the entry
// at (n, k) is phi^2(n / 2^j) * conj(Y_k(e_d)), which is nonzero only on
// zonal chains where Y_k(e_d) = sqrt(dim H_n).
inline CoefficientVector scaling_coeffs(const FilterProfile& filter, int d, int j)
{
    if (d < 3) throw std::domain_error("scaling_coeffs: d must be >= 3");
    if (j < 0) throw std::domain_error("scaling_coeffs: j must be nonnegative");
    CoefficientVector out(d);
    const double scale = static_cast<double>(1 << j);
    std::vector<int> chain(d - 2, 0);
    for (int n = 0; n < (1 << j); ++n) {
        const double f = phi(filter, n / scale);
        if (f <= 0.0) break;
        out.set({d, n, chain}, f * f * std::sqrt(static_cast<double>(dim_harmonic({d, n}))));
    }
    return out;
}

namespace detail {

// Radial/angular factorization of SO(d-2)-invariant wavelets:
//   Psi(x) = sum_m S_m(x_d) C_m^{(d-3)/2}( x_{d-1} / sqrt(1-x_d^2) ),
//   S_m(c) = (1-c^2)^{m/2} sum_n u_{n,m} C_{n-m}^{(d-2)/2+m}(c),
// with u_{n,m} = sqrt(dim H_n) kappa(n/N) phi_{K,n}(m) A_{(m,0,...)}^n.
// Also used with K = 0 for zonal wavelets in any dimension (the m = 0
// angular factor is constant, so the degenerate d = 3 index never enters).
class SymmetricSeries {
public:
    SymmetricSeries(const WaveletSpec& spec, int max_n = -1)
    {
        check_spec(spec);
        if (!spec.profile.symmetric())
            throw std::invalid_argument("SymmetricSeries: profile is not a symmetric variant");
        d_ = spec.d;
        K_ = spec.profile.K();
        nmin_ = support_min(spec.bandwidth);
        nmax_ = support_max(spec.bandwidth);
        if (max_n >= 0) nmax_ = std::min(nmax_, max_n);
        lambda_dir_ = 0.5 * (d_ - 3);
        u_.assign(K_ + 1, {});
        if (nmax_ < nmin_) return;
        std::vector<int> chain(d_ - 2, 0);
        const double N = spec.bandwidth;
        for (int m = 0; m <= K_; ++m) {
            u_[m].assign(nmax_ - nmin_ + 1, 0.0);
            chain[0] = m;
            for (int n = std::max(nmin_, m); n <= nmax_; ++n) {
                const double pv = spec.profile.sym_value(n, m);
                if (pv == 0.0) continue;
                const double kap = kappa(spec.filter, n / N);
                if (kap <= 0.0) continue;
                u_[m][n - nmin_] = std::sqrt(static_cast<double>(dim_harmonic({d_, n}))) * kap * pv *
                                   harmonic_norm_A(d_, n, chain);
            }
        }
    }

    int order() const { return K_; }
    int dim() const { return d_; }
    int degree_min() const { return nmin_; }
    int degree_max() const { return nmax_; }

    // Gegenbauer part of S_m at cos(colatitude) = c, without the rim power
    // (1-c^2)^{m/2}; callers near the poles multiply by the rim computed
    // from the tangential coordinates, which does not cancel.
    double radial_series(int m, double c) const
    {
        if (nmax_ < nmin_) return 0.0;
        const double lam = 0.5 * (d_ - 2) + m;
        double acc = 0.0;
        double prev = 1.0, cur = 2.0 * lam * c;
        for (int a = 0; a + m <= nmax_; ++a) {
            double v;
            if (a == 0) v = 1.0;
            else if (a == 1) v = cur;
            else {
                v = (2.0 * (a + lam - 1.0) * c * cur - (a + 2.0 * lam - 2.0) * prev) / a;
                prev = cur;
                cur = v;
            }
            const int n = a + m;
            if (n >= nmin_) acc += u_[m][n - nmin_] * v;
        }
        return acc;
    }

    // S_m at cos(colatitude) = c.
    double radial(int m, double c) const
    {
        const double s2 = std::max(0.0, 1.0 - c * c);
        return radial_series(m, c) * std::pow(std::sqrt(s2), m);
    }

    // Psi at colatitude cosine c and direction cosine cphi.
    double eval(double c, double cphi) const
    {
        double acc = radial(0, c);
        for (int m = 1; m <= K_; ++m) {
            if (u_[m].empty()) continue;
            acc += radial(m, c) * gegenbauer_eval({lambda_dir_, m}, cphi);
        }
        return acc;
    }

private:
    int d_ = 0, K_ = 0, nmin_ = 0, nmax_ = -1;
    double lambda_dir_ = 0.0;
    std::vector<std::vector<double>> u_; // u_[m][n - nmin]
};

// d = 3 factorization: Psi(t1, t2) = sum_k e^{i k t1} sin^{|k|}(t2) R_k(cos t2)
// with R_k(c) = sum_n w_{n,k} C_{n-|k|}^{1/2+|k|}(c).
class D3Series {
public:
    D3Series(const WaveletSpec& spec, int max_n = -1)
    {
        check_spec(spec);
        if (spec.d != 3) throw std::invalid_argument("D3Series: d must be 3");
        K_ = spec.profile.K();
        nmin_ = support_min(spec.bandwidth);
        nmax_ = support_max(spec.bandwidth);
        if (max_n >= 0) nmax_ = std::min(nmax_, max_n);
        w_.assign(2 * K_ + 1, {});
        if (nmax_ < nmin_) return;
        const double N = spec.bandwidth;
        for (int k = -K_; k <= K_; ++k) {
            w_[k + K_].assign(nmax_ - nmin_ + 1, 0.0);
            for (int n = std::max(nmin_, std::abs(k)); n <= nmax_; ++n) {
                const cplx z = spec.profile.d3_value(n, k);
                if (z == cplx(0.0)) continue;
                const double kap = kappa(spec.filter, n / N);
                if (kap <= 0.0) continue;
                w_[k + K_][n - nmin_] = std::sqrt(2.0 * n + 1.0) * kap * z * harmonic_norm_A(3, n, {k});
            }
        }
    }

    int order() const { return K_; }
    int degree_min() const { return nmin_; }
    int degree_max() const { return nmax_; }

    cplx radial_series(int k, double c) const // without the sin^{|k|} factor
    {
        if (nmax_ < nmin_) return 0.0;
        const int ak = std::abs(k);
        const double lam = 0.5 + ak;
        cplx acc = 0.0;
        double prev = 1.0, cur = 2.0 * lam * c;
        for (int a = 0; a + ak <= nmax_; ++a) {
            double v;
            if (a == 0) v = 1.0;
            else if (a == 1) v = cur;
            else {
                v = (2.0 * (a + lam - 1.0) * c * cur - (a + 2.0 * lam - 2.0) * prev) / a;
                prev = cur;
                cur = v;
            }
            const int n = a + ak;
            if (n >= nmin_) acc += w_[k + K_][n - nmin_] * v;
        }
        return acc;
    }

    cplx radial(int k, double c) const // includes the sin^{|k|} factor
    {
        const double s2 = std::max(0.0, 1.0 - c * c);
        return radial_series(k, c) * std::pow(std::sqrt(s2), std::abs(k));
    }

    cplx eval(double theta1, double c) const
    {
        cplx acc = 0.0;
        for (int k = -K_; k <= K_; ++k) {
            if (w_[k + K_].empty()) continue;
            acc += radial(k, c) * std::polar(1.0, k * theta1);
        }
        return acc;
    }

private:
    int K_ = 0, nmin_ = 0, nmax_ = -1;
    std::vector<std::vector<cplx>> w_;
};

} // namespace detail

// Rotated wavelet value T(g)Psi(p) = Psi(g^{-1} p). Symmetric variants go
// through the factored series; the d3 table variant through the azimuthal
// mode sum. Both agree with the plain coefficient-sum evaluation.
inline cplx eval_wavelet(const WaveletSpec& spec, const Rotation& g, const SpherePoint& p)
{
    detail::check_spec(spec);
    if (g.dim() != spec.d || p.dim() != spec.d) throw std::domain_error("eval_wavelet: dimension mismatch");
    const std::vector<double> y = g.apply_inverse(p.cartesian());
    if (spec.profile.symmetric()) {
        const detail::SymmetricSeries series(spec);
        const double c = std::max(-1.0, std::min(1.0, y[spec.d - 1]));
        double head2 = 0.0;
        for (int i = 0; i < spec.d - 1; ++i) head2 += y[i] * y[i];
        const double rim = std::sqrt(head2); // tangential norm, stable at the poles
        double acc = series.radial_series(0, c);
        double rim_pow = 1.0;
        const double lam = 0.5 * (spec.d - 3);
        const double cphi = rim < 1e-290 ? 0.0 : std::max(-1.0, std::min(1.0, y[spec.d - 2] / rim));
        for (int m = 1; m <= spec.profile.K(); ++m) {
            rim_pow *= rim;
            acc += series.radial_series(m, c) * rim_pow * gegenbauer_eval({lam, m}, cphi);
        }
        return acc;
    }
    const SpherePoint py = SpherePoint::from_cartesian(y);
    const detail::D3Series series(spec);
    return series.eval(py.angles()[0], std::cos(py.angles()[1]));
}

namespace detail {

// Reference path: plain sum over the coefficient vector.
inline cplx eval_wavelet_generic(const WaveletSpec& spec, const Rotation& g, const SpherePoint& p)
{
    const CoefficientVector c = wavelet_coeffs(spec);
    return c.eval(SpherePoint::from_cartesian(g.apply_inverse(p.cartesian())));
}

} // namespace detail

// Two-variable slice of an SO(d-2)-invariant wavelet: the value at
// cos(t) e_d + sin(t) (cos(phi) e_{d-1} + sin(phi) xi) for any unit xi
// orthogonal to e_{d-1} and e_d.
inline double psi_slice(const WaveletSpec& spec, double t, double phi_angle)
{
    detail::check_spec(spec);
    if (!spec.profile.symmetric())
        throw std::invalid_argument("psi_slice: requires a symmetric (SO(d-2)-invariant) variant");
    const detail::SymmetricSeries series(spec);
    return series.eval(std::cos(t), std::cos(phi_angle));
}

} // namespace spherewave

#endif
