#ifndef SPHEREWAVE_FRAME_HPP
#define SPHEREWAVE_FRAME_HPP

// Discrete tight frames of rotated directional wavelets, with exact
// analysis and synthesis of band-limited signals.
//
// Scale 0 holds the single constant atom with weight 1. Scale j >= 1 pairs
// a position rule exact on polynomials of degree 2^{j+1} with a stabilizer
// rule exact through twice the effective directionality min(K, 2^j); an
// atom is sqrt(position weight * direction weight) times the wavelet
// rotated to that position and direction. Atom indices at a scale run as
// (latitude group, azimuth, direction), direction fastest.

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "detail/frame_engine.hpp"
#include "detail/parallel.hpp"
#include "detail/sum.hpp"
#include "filters.hpp"
#include "quadrature.hpp"
#include "wavelet.hpp"

namespace spherewave {

struct FrameScale {
    int j = 1;
    WaveletSpec wavelet;
    SphereRule positions;
    DirectionalRule directions;

    std::size_t atom_count() const { return positions.size() * directions.count(); }
};

struct FrameAtom {
    int j = 0;
    Rotation g;
    double weight = 1.0;
};

class Frame {
public:
    Frame(int d, int K, int J_max, FilterProfile filter, DirectionalProfile profile)
        : d_(d), K_(K), J_max_(J_max), filter_(filter), profile_(std::move(profile))
    {
        if (d < 3) throw std::invalid_argument("Frame: d must be >= 3");
        if (K < 0) throw std::invalid_argument("Frame: K must be nonnegative");
        if (J_max < 0) throw std::invalid_argument("Frame: J_max must be nonnegative");
        if (d >= 4 && profile_.kind() == ProfileKind::CustomD3)
            throw std::invalid_argument("Frame: d3 tables cannot build a frame for d >= 4");
        if (d == 3 && profile_.symmetric() && profile_.kind() != ProfileKind::Zonal)
            throw std::invalid_argument("Frame: symmetric tables need d >= 4");
        if (profile_.K() != K) throw std::invalid_argument("Frame: profile order does not match K");
        scales_.reserve(J_max);
        // stabilizer rules depend on scale only through min(K, 2^j) and are
        // shared across scales once that value saturates
        std::vector<std::shared_ptr<const DirectionalRule>> cache;
        for (int j = 1; j <= J_max; ++j) {
            const int keff = std::min(K, 1 << j);
            std::shared_ptr<const DirectionalRule> dir;
            for (auto& c : cache)
                if (c->exact_degree() == 2 * keff) dir = c;
            if (!dir) {
                dir = std::make_shared<const DirectionalRule>(
                    d == 3 ? DirectionalRule::so2(keff) : DirectionalRule::on_sphere(d, keff));
                cache.push_back(dir);
            }
            scales_.push_back({j, WaveletSpec::dyadic(d, profile_, filter_, j), SphereRule(d - 1, 1 << (j + 1)), *dir});
        }
    }

    int dim() const { return d_; }
    int order() const { return K_; }
    int max_scale() const { return J_max_; }
    const FilterProfile& filter() const { return filter_; }
    const DirectionalProfile& profile() const { return profile_; }
    const std::vector<FrameScale>& scales() const { return scales_; }
    const FrameScale& scale(int j) const
    {
        if (j < 1 || j > J_max_) throw std::out_of_range("Frame: scale out of range");
        return scales_[j - 1];
    }

    std::size_t atom_count(int j) const
    {
        if (j == 0) return 1;
        return scale(j).atom_count();
    }

    std::size_t total_atoms() const
    {
        std::size_t n = 1;
        for (const auto& s : scales_) n += s.atom_count();
        return n;
    }

    // Materialized view of one atom (rotation and weight).
    FrameAtom atom(int j, std::size_t idx) const
    {
        if (j == 0) {
            if (idx != 0) throw std::out_of_range("Frame: scale-0 has a single atom");
            return {0, Rotation::identity(d_), 1.0};
        }
        const FrameScale& s = scale(j);
        const std::size_t r = s.directions.count();
        if (idx >= s.atom_count()) throw std::out_of_range("Frame: atom index out of range");
        const std::size_t pos = idx / r;
        const std::size_t m = idx % r;
        const std::size_t a = pos % s.positions.azimuth_count();
        const std::size_t b = pos / s.positions.azimuth_count();
        const Rotation g_pos = detail::grid_rotation(d_, s.positions.azimuth_angle(static_cast<int>(a)),
                                                     s.positions.latitude_angles(b));
        return {j, g_pos.compose(s.directions.rotation(m)), s.positions.weight(pos) * s.directions.weight(m)};
    }

    // Frame bandwidth accepted by analyze().
    int bandwidth() const { return 1 << (J_max_ + 1); }

private:
    int d_, K_, J_max_;
    FilterProfile filter_;
    DirectionalProfile profile_;
    std::vector<FrameScale> scales_;
};

inline Frame build_frame(int d, int K, int J_max, const FilterProfile& filter, const DirectionalProfile& profile)
{
    return Frame(d, K, J_max, filter, profile);
}

class FrameCoefficients {
public:
    FrameCoefficients() = default;
    explicit FrameCoefficients(const Frame& fr)
    {
        per_scale_.resize(fr.max_scale());
        for (int j = 1; j <= fr.max_scale(); ++j) per_scale_[j - 1].assign(fr.atom_count(j), cplx(0.0));
    }

    cplx scale0() const { return scale0_; }
    cplx& scale0() { return scale0_; }
    int max_scale() const { return static_cast<int>(per_scale_.size()); }
    const std::vector<cplx>& at_scale(int j) const { return per_scale_.at(j - 1); }
    std::vector<cplx>& at_scale(int j) { return per_scale_.at(j - 1); }

    cplx get(int j, std::size_t idx) const { return j == 0 ? scale0_ : per_scale_.at(j - 1).at(idx); }
    void set(int j, std::size_t idx, cplx v)
    {
        if (j == 0) {
            if (idx != 0) throw std::out_of_range("FrameCoefficients: scale-0 has one entry");
            scale0_ = v;
        } else {
            per_scale_.at(j - 1).at(idx) = v;
        }
    }

    double norm2() const
    {
        std::vector<double> parts;
        parts.push_back(std::norm(scale0_));
        for (const auto& sc : per_scale_)
            parts.push_back(detail::pairwise_sum<double>(0, sc.size(), [&](std::size_t i) { return std::norm(sc[i]); }));
        return detail::pairwise_sum(parts);
    }

private:
    cplx scale0_ = 0.0;
    std::vector<std::vector<cplx>> per_scale_;
};

namespace detail {

// Analysis of one scale over any position/direction rules (the frame's own,
// or finer ones in verification code). For every signal table, sink is
// called once per latitude group with the finished atom slice, laid out as
// [azimuth * r + direction].
inline void analyze_scale_on_rules(const ScaleContext& C, const ComponentSet& comps,
                                   const std::vector<std::vector<cplx>>& Ftabs,
                                   const std::function<void(std::size_t, std::size_t, const std::vector<cplx>&)>& sink)
{
    const SphereRule& pos = *C.positions;
    const DirectionalRule& dir = *C.directions;
    const int A = pos.azimuth_count();
    const std::size_t B = pos.latitude_group_count();
    const std::size_t r = dir.count();
    const int n_mu = comps.count();
    const int W = C.W;
    std::vector<double> sqrt_dirw(r);
    for (std::size_t m = 0; m < r; ++m) sqrt_dirw[m] = std::sqrt(dir.weight(m));
    const auto& X = comps.stabilizer_table();

    parallel_for(B, [&](std::size_t b) {
        thread_local std::vector<cplx> J, samples, modes, R, Q, slice;
        build_kernel(C, comps, b, J, samples, modes);
        const double sqrt_posw = std::sqrt(pos.latitude_weight(b) / A);
        R.resize(static_cast<std::size_t>(n_mu) * W);
        Q.resize(n_mu);
        slice.resize(static_cast<std::size_t>(A) * r);
        for (std::size_t sig = 0; sig < Ftabs.size(); ++sig) {
            const auto& F = Ftabs[sig];
            if (F.empty()) continue;
            // R_mu(w) = sum_t F(w, t) J_mu(-w, t); ring weights folded into F
            for (int mu = 0; mu < n_mu; ++mu) {
                for (int w = -C.ntr; w <= C.ntr; ++w) {
                    const cplx* Fr = &F[static_cast<std::size_t>(w + C.ntr) * C.T];
                    const cplx* Jr = &J[(static_cast<std::size_t>(mu) * W + (-w + C.ntr)) * C.T];
                    cplx acc = 0.0;
                    for (std::size_t t = 0; t < C.T; ++t) acc += Fr[t] * Jr[t];
                    R[static_cast<std::size_t>(mu) * W + (w + C.ntr)] = acc;
                }
            }
            for (int a = 0; a < A; ++a) {
                const cplx* ph = &C.phase[static_cast<std::size_t>(a) * W];
                for (int mu = 0; mu < n_mu; ++mu) {
                    const cplx* Rr = &R[static_cast<std::size_t>(mu) * W];
                    cplx acc = 0.0;
                    for (int w = 0; w < W; ++w) acc += ph[w] * Rr[w];
                    Q[mu] = acc;
                }
                for (std::size_t m = 0; m < r; ++m) {
                    cplx acc = 0.0;
                    for (int mu = 0; mu < n_mu; ++mu) acc += X[static_cast<std::size_t>(mu) * r + m] * Q[mu];
                    slice[static_cast<std::size_t>(a) * r + m] = sqrt_posw * sqrt_dirw[m] * acc;
                }
            }
            sink(sig, b, slice);
        }
    });
}

// Adjoint pass: accumulates the ring-Fourier data of the weighted atom sum
// of one scale. Latitude groups are processed in a fixed number of blocks
// so the floating-point reduction tree does not depend on the thread count.
inline std::vector<cplx> synthesize_scale_on_rules(const ScaleContext& C, const ComponentSet& comps,
                                                   const std::vector<cplx>& coeffs)
{
    const SphereRule& pos = *C.positions;
    const DirectionalRule& dir = *C.directions;
    const int A = pos.azimuth_count();
    const std::size_t B = pos.latitude_group_count();
    const std::size_t r = dir.count();
    const int n_mu = comps.count();
    const int W = C.W;
    std::vector<double> sqrt_dirw(r);
    for (std::size_t m = 0; m < r; ++m) sqrt_dirw[m] = std::sqrt(dir.weight(m));
    const auto& X = comps.stabilizer_table();

    const std::size_t n_blocks = std::min<std::size_t>(16, B);
    std::vector<std::vector<cplx>> partial(n_blocks);
    parallel_for(n_blocks, [&](std::size_t blk) {
        std::vector<cplx> S(static_cast<std::size_t>(W) * C.T, cplx(0.0));
        std::vector<cplx> J, samples, modes;
        std::vector<cplx> D(static_cast<std::size_t>(n_mu) * A);
        std::vector<cplx> E(static_cast<std::size_t>(n_mu) * W);
        const std::size_t lo = B * blk / n_blocks;
        const std::size_t hi = B * (blk + 1) / n_blocks;
        for (std::size_t b = lo; b < hi; ++b) {
            bool group_live = false;
            for (std::size_t i = b * A * r; i < (b + 1) * A * r && !group_live; ++i)
                group_live = coeffs[i] != cplx(0.0);
            if (!group_live) continue;
            build_kernel(C, comps, b, J, samples, modes);
            const double sqrt_posw = std::sqrt(pos.latitude_weight(b) / A);
            // D_mu(a) = sum_m c(a, b, m) sqrt(w) chi_mu(h_m)
            for (int a = 0; a < A; ++a) {
                const cplx* ca = &coeffs[(b * A + a) * r];
                for (int mu = 0; mu < n_mu; ++mu) {
                    cplx acc = 0.0;
                    for (std::size_t m = 0; m < r; ++m)
                        acc += ca[m] * sqrt_dirw[m] * std::conj(X[static_cast<std::size_t>(mu) * r + m]);
                    D[static_cast<std::size_t>(mu) * A + a] = sqrt_posw * acc;
                }
            }
            // E_mu(w) = sum_a D_mu(a) e^{-i w phi_a}
            for (int mu = 0; mu < n_mu; ++mu) {
                for (int w = 0; w < W; ++w) {
                    cplx acc = 0.0;
                    for (int a = 0; a < A; ++a)
                        acc += D[static_cast<std::size_t>(mu) * A + a] *
                               std::conj(C.phase[static_cast<std::size_t>(a) * W + w]);
                    E[static_cast<std::size_t>(mu) * W + w] = acc;
                }
            }
            // S(w, t) += sum_mu conj(J_mu(-w, t)) E_mu(w)
            for (int mu = 0; mu < n_mu; ++mu) {
                for (int w = -C.ntr; w <= C.ntr; ++w) {
                    const cplx e = E[static_cast<std::size_t>(mu) * W + (w + C.ntr)];
                    if (e == cplx(0.0)) continue;
                    const cplx* Jr = &J[(static_cast<std::size_t>(mu) * W + (-w + C.ntr)) * C.T];
                    cplx* Sr = &S[static_cast<std::size_t>(w + C.ntr) * C.T];
                    for (std::size_t t = 0; t < C.T; ++t) Sr[t] += std::conj(Jr[t]) * e;
                }
            }
        }
        partial[blk] = std::move(S);
    });
    std::vector<cplx> S(static_cast<std::size_t>(W) * C.T, cplx(0.0));
    for (std::size_t blk = 0; blk < n_blocks; ++blk)
        for (std::size_t i = 0; i < S.size(); ++i) S[i] += partial[blk][i];
    return S;
}

inline void check_analyzable(const Frame& fr, const CoefficientVector& f)
{
    if (f.dim() != fr.dim()) throw std::domain_error("analyze: dimension mismatch");
    if (f.max_degree() > fr.bandwidth()) throw std::domain_error("analyze: signal exceeds the frame bandwidth");
}

// Coefficients of a single scale only.
inline std::vector<cplx> analyze_single_scale(const Frame& fr, int j, const CoefficientVector& f)
{
    const FrameScale& sc = fr.scale(j);
    std::vector<cplx> out(sc.atom_count(), cplx(0.0));
    const int deg = f.max_degree();
    const ScaleContext C = make_scale_context(fr.dim(), j, sc.wavelet, sc.positions, sc.directions, deg, deg);
    if (!C.active()) return out;
    const ComponentSet comps(sc.wavelet, sc.directions, deg);
    const std::vector<std::vector<cplx>> tabs{ring_table(f, C)};
    const int A = sc.positions.azimuth_count();
    const std::size_t r = sc.directions.count();
    analyze_scale_on_rules(C, comps, tabs, [&](std::size_t, std::size_t b, const std::vector<cplx>& slice) {
        std::copy(slice.begin(), slice.end(), out.begin() + b * A * r);
    });
    return out;
}

} // namespace detail

// Frame coefficients of a batch of signals; kernel transforms are built
// once per scale and shared across the batch.
inline std::vector<FrameCoefficients> analyze_batch(const Frame& fr, const std::vector<CoefficientVector>& signals)
{
    std::vector<FrameCoefficients> out;
    out.reserve(signals.size());
    int deg = 0;
    std::vector<int> zero(fr.dim() - 2, 0);
    for (const auto& f : signals) {
        detail::check_analyzable(fr, f);
        deg = std::max(deg, f.max_degree());
        out.emplace_back(fr);
        out.back().scale0() = f.get({fr.dim(), 0, zero});
    }
    for (int j = 1; j <= fr.max_scale(); ++j) {
        const FrameScale& sc = fr.scale(j);
        const detail::ScaleContext C =
            detail::make_scale_context(fr.dim(), j, sc.wavelet, sc.positions, sc.directions, deg, deg);
        if (!C.active()) continue;
        const detail::ComponentSet comps(sc.wavelet, sc.directions, deg);
        std::vector<std::vector<cplx>> Ftabs;
        Ftabs.reserve(signals.size());
        for (const auto& f : signals) Ftabs.push_back(detail::ring_table(f, C));
        const int A = sc.positions.azimuth_count();
        const std::size_t r = sc.directions.count();
        detail::analyze_scale_on_rules(C, comps, Ftabs, [&](std::size_t sig, std::size_t b, const std::vector<cplx>& slice) {
            std::copy(slice.begin(), slice.end(), out[sig].at_scale(j).begin() + b * A * r);
        });
    }
    return out;
}

inline FrameCoefficients analyze(const Frame& fr, const CoefficientVector& f)
{
    return analyze_batch(fr, {f})[0];
}

// Relative tight-frame defects |sum |c|^2 - |f|^2| / |f|^2 for a batch,
// without retaining the coefficients.
inline std::vector<double> parseval_gaps(const Frame& fr, const std::vector<CoefficientVector>& signals)
{
    const std::size_t S = signals.size();
    std::vector<std::vector<double>> energy(S); // per signal: per-(scale, group) partials
    std::vector<int> zero(fr.dim() - 2, 0);
    int deg = 0;
    for (const auto& f : signals) {
        detail::check_analyzable(fr, f);
        deg = std::max(deg, f.max_degree());
    }
    for (std::size_t sig = 0; sig < S; ++sig)
        energy[sig].push_back(std::norm(signals[sig].get({fr.dim(), 0, zero})));
    for (int j = 1; j <= fr.max_scale(); ++j) {
        const FrameScale& sc = fr.scale(j);
        const detail::ScaleContext C =
            detail::make_scale_context(fr.dim(), j, sc.wavelet, sc.positions, sc.directions, deg, deg);
        if (!C.active()) continue;
        const detail::ComponentSet comps(sc.wavelet, sc.directions, deg);
        std::vector<std::vector<cplx>> Ftabs;
        Ftabs.reserve(S);
        for (const auto& f : signals) Ftabs.push_back(detail::ring_table(f, C));
        const std::size_t B = sc.positions.latitude_group_count();
        std::vector<std::vector<double>> parts(S, std::vector<double>(B, 0.0));
        detail::analyze_scale_on_rules(C, comps, Ftabs, [&](std::size_t sig, std::size_t b, const std::vector<cplx>& slice) {
            parts[sig][b] =
                detail::pairwise_sum<double>(0, slice.size(), [&](std::size_t i) { return std::norm(slice[i]); });
        });
        for (std::size_t sig = 0; sig < S; ++sig) energy[sig].push_back(detail::pairwise_sum(parts[sig]));
    }
    std::vector<double> gaps(S);
    for (std::size_t sig = 0; sig < S; ++sig) {
        const double n2 = signals[sig].norm2();
        if (n2 <= 0.0) throw std::domain_error("parseval_gap: zero signal");
        gaps[sig] = std::abs(detail::pairwise_sum(energy[sig]) - n2) / n2;
    }
    return gaps;
}

inline double parseval_gap(const Frame& fr, const CoefficientVector& f)
{
    return parseval_gaps(fr, {f})[0];
}

// Weighted atom sum: harmonic coefficients of
//   c_0 + sum_j sum_i c_{j,i} sqrt(w_i) T(g_i) Psi_j
// computed exactly through degree out_degree (higher content is discarded;
// callers pick out_degree at least as large as the content they expect).
inline CoefficientVector synthesize(const Frame& fr, const FrameCoefficients& c, int out_degree)
{
    if (out_degree < 0) throw std::domain_error("synthesize: out_degree must be nonnegative");
    if (c.max_scale() != fr.max_scale()) throw std::domain_error("synthesize: coefficients do not match the frame");
    CoefficientVector out(fr.dim());
    std::vector<int> zero(fr.dim() - 2, 0);
    if (c.scale0() != cplx(0.0)) out.set({fr.dim(), 0, zero}, c.scale0());
    for (int j = 1; j <= fr.max_scale(); ++j) {
        const auto& coeffs = c.at_scale(j);
        bool any = false;
        for (const cplx& v : coeffs)
            if (v != cplx(0.0)) {
                any = true;
                break;
            }
        if (!any) continue;
        const FrameScale& sc = fr.scale(j);
        const detail::ScaleContext C =
            detail::make_scale_context(fr.dim(), j, sc.wavelet, sc.positions, sc.directions, out_degree, out_degree);
        if (!C.active()) continue;
        const detail::ComponentSet comps(sc.wavelet, sc.directions, out_degree);
        const std::vector<cplx> S = detail::synthesize_scale_on_rules(C, comps, coeffs);
        detail::project_ring(C, S, out_degree, out);
    }
    return out;
}

// Low-pass filtering: coefficients scaled by phi^2(n / 2^J).
inline CoefficientVector convolve_scaling(const CoefficientVector& f, const FilterProfile& filter, int J)
{
    CoefficientVector out(f.dim());
    const double scale = static_cast<double>(1 << J);
    for (const auto& [idx, v] : f.entries()) {
        const double p = phi(filter, idx.n / scale);
        if (p > 0.0) out.set(idx, v * p * p);
    }
    return out;
}

// Partial-expansion operator: low-pass reconstruction at level J plus the
// selected atoms of scale J+1.
inline CoefficientVector lambda_operator(const Frame& fr, const CoefficientVector& f, int J,
                                         const std::vector<std::size_t>& omega)
{
    if (J < 0 || J + 1 > fr.max_scale()) throw std::domain_error("lambda_operator: need J+1 <= J_max");
    detail::check_analyzable(fr, f);
    for (std::size_t idx : omega)
        if (idx >= fr.atom_count(J + 1)) throw std::out_of_range("lambda_operator: atom index out of range");
    CoefficientVector out = convolve_scaling(f, fr.filter(), J);
    if (omega.empty()) return out;
    const std::vector<cplx> next = detail::analyze_single_scale(fr, J + 1, f);
    FrameCoefficients masked(fr);
    for (std::size_t idx : omega) masked.set(J + 1, idx, next[idx]);
    const int out_deg = std::max(f.max_degree(), (1 << (J + 2)) - 1);
    out += synthesize(fr, masked, out_deg);
    return out;
}

namespace detail {

// Reference analysis: per-atom spatial quadrature with generic pointwise
// evaluation. Exact like the fast path, but linear in atoms times nodes;
// kept for verification on small configurations.
inline FrameCoefficients analyze_reference(const Frame& fr, const CoefficientVector& f)
{
    check_analyzable(fr, f);
    FrameCoefficients out(fr);
    std::vector<int> zero(fr.dim() - 2, 0);
    out.scale0() = f.get({fr.dim(), 0, zero});
    for (int j = 1; j <= fr.max_scale(); ++j) {
        const FrameScale& sc = fr.scale(j);
        const CoefficientVector w = wavelet_coeffs(sc.wavelet);
        if (w.empty()) continue;
        const SphereRule rule(fr.dim() - 1, f.max_degree() + support_max(sc.wavelet.bandwidth));
        std::vector<cplx> fvals(rule.size()), pts;
        std::vector<SpherePoint> nodes;
        nodes.reserve(rule.size());
        for (std::size_t i = 0; i < rule.size(); ++i) {
            nodes.push_back(rule.point(i));
            fvals[i] = f.eval(nodes.back());
        }
        parallel_for(fr.atom_count(j), [&](std::size_t idx) {
            const FrameAtom atom = fr.atom(j, idx);
            const cplx ip = pairwise_sum<cplx>(0, rule.size(), [&](std::size_t i) {
                const auto y = atom.g.apply_inverse(nodes[i].cartesian());
                return rule.weight(i) * fvals[i] * std::conj(w.eval(SpherePoint::from_cartesian(y)));
            });
            out.at_scale(j)[idx] = std::sqrt(atom.weight) * ip;
        });
    }
    return out;
}

} // namespace detail

} // namespace spherewave

#endif
