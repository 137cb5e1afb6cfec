#ifndef SPHEREWAVE_FILTERS_HPP
#define SPHEREWAVE_FILTERS_HPP

// The smooth low-pass cutoff phi and the induced band-pass kappa with
//   phi(t) = 1 on [0, 1/2],  phi(t) = 0 on [1, inf),  phi non-increasing,
//   kappa(t)^2 = phi(t/2)^2 - phi(t)^2,  supp kappa in [1/2, 2].
// Two transition shapes are provided: an infinitely smooth bump quotient
// and a piecewise-polynomial smoothstep of selectable order q.

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "specfun.hpp"

namespace spherewave {

enum class FilterKind { SmoothBump, Spline };

struct FilterProfile {
    FilterKind kind = FilterKind::SmoothBump;
    int q = 3; // smoothness order for Spline; ignored for SmoothBump

    static FilterProfile smooth_bump() { return {FilterKind::SmoothBump, 0}; }
    static FilterProfile spline(int q)
    {
        if (q < 0 || q > 20) throw std::domain_error("FilterProfile: spline order out of range");
        return {FilterKind::Spline, q};
    }
};

namespace detail {

inline double bump_piece(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

// Smoothstep of order q on [0,1]: q vanishing derivatives at both ends.
inline double smoothstep(int q, double u)
{
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    double acc = 0.0;
    double upow = 1.0;
    for (int k = 0; k <= q; ++k) {
        const double c = static_cast<double>(binomial_i64(q + k, k)) * static_cast<double>(binomial_i64(2 * q + 1, q - k));
        acc += c * upow * ((k & 1) ? -1.0 : 1.0);
        upow *= u;
    }
    double r = acc;
    for (int k = 0; k <= q; ++k) r *= u;
    return r;
}

} // namespace detail

inline double phi(const FilterProfile& profile, double t)
{
    if (t < 0.0) throw std::domain_error("phi: argument must be nonnegative");
    if (t <= 0.5) return 1.0;
    if (t >= 1.0) return 0.0;
    if (profile.kind == FilterKind::SmoothBump) {
        const double a = detail::bump_piece(2.0 - 2.0 * t);
        const double b = detail::bump_piece(2.0 * t - 1.0);
        return a / (a + b);
    }
    return 1.0 - detail::smoothstep(profile.q, 2.0 * t - 1.0);
}

inline double kappa(const FilterProfile& profile, double t)
{
    if (t < 0.0) throw std::domain_error("kappa: argument must be nonnegative");
    const double lo = phi(profile, 0.5 * t);
    const double hi = phi(profile, t);
    const double rad = lo * lo - hi * hi; // can round to -1e-17 inside the plateaus
    return std::sqrt(std::max(0.0, rad));
}

} // namespace spherewave

#endif
