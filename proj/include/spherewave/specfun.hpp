#ifndef SPHEREWAVE_SPECFUN_HPP
#define SPHEREWAVE_SPECFUN_HPP

// Scalar special-function kernels: Gegenbauer (ultraspherical) polynomials
// and their derivatives, stable log-gamma ratios, orthonormalization
// constants for the hyperspherical harmonic basis, and dimension counts of
// harmonic polynomial spaces. Everything here is a pure function of its
// arguments and safe to call concurrently.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace spherewave {

constexpr double pi = 3.14159265358979323846264338327950288;

struct GegenbauerParams {
    double lambda; // index, > 0
    int degree;    // >= 0
};

struct DimQuery {
    int d;      // ambient dimension, >= 3
    int n_or_N; // harmonic degree / polynomial degree bound, >= 0
};

// C_m^lambda(t) by the forward three-term recurrence
//   C_0 = 1,  C_1 = 2 lambda t,  m C_m = 2(m+lambda-1) t C_{m-1} - (m+2lambda-2) C_{m-2}.
inline double gegenbauer_eval(const GegenbauerParams& p, double t)
{
    if (!(p.lambda > 0.0)) throw std::domain_error("gegenbauer_eval: lambda must be positive");
    if (p.degree < 0) throw std::domain_error("gegenbauer_eval: degree must be nonnegative");
    if (std::abs(t) > 1.0) throw std::domain_error("gegenbauer_eval: t outside [-1,1]");
    if (p.degree == 0) return 1.0;
    double prev = 1.0;
    double cur = 2.0 * p.lambda * t;
    for (int m = 2; m <= p.degree; ++m) {
        const double next = (2.0 * (m + p.lambda - 1.0) * t * cur - (m + 2.0 * p.lambda - 2.0) * prev) / m;
        prev = cur;
        cur = next;
    }
    return cur;
}

// r-th derivative through the index shift (d/dt) C_m^l = 2 l C_{m-1}^{l+1}.
inline double gegenbauer_deriv(const GegenbauerParams& p, int order, double t)
{
    if (order < 0) throw std::domain_error("gegenbauer_deriv: order must be nonnegative");
    if (order > p.degree) return 0.0;
    double scale = 1.0;
    double lam = p.lambda;
    for (int r = 0; r < order; ++r) {
        scale *= 2.0 * lam;
        lam += 1.0;
    }
    return scale * gegenbauer_eval({lam, p.degree - order}, t);
}

// sum(log Gamma(num)) - sum(log Gamma(den)); all arguments must be positive.
inline double log_gamma_ratio(const std::vector<double>& num_args, const std::vector<double>& den_args)
{
    double acc = 0.0;
    for (double a : num_args) {
        if (!(a > 0.0)) throw std::domain_error("log_gamma_ratio: nonpositive argument");
        acc += std::lgamma(a);
    }
    for (double a : den_args) {
        if (!(a > 0.0)) throw std::domain_error("log_gamma_ratio: nonpositive argument");
        acc -= std::lgamma(a);
    }
    return acc;
}

namespace detail {

inline std::int64_t binomial_i64(int n, int k)
{
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

inline void check_dim_query(const DimQuery& q, const char* who)
{
    if (q.d < 3) throw std::domain_error(std::string(who) + ": dimension must be >= 3");
    if (q.n_or_N < 0) throw std::domain_error(std::string(who) + ": degree must be nonnegative");
}

} // namespace detail

// dim of the degree-n harmonic subspace on the sphere in R^d.
inline std::int64_t dim_harmonic(const DimQuery& q)
{
    detail::check_dim_query(q, "dim_harmonic");
    const int n = q.n_or_N;
    return detail::binomial_i64(n + q.d - 1, q.d - 1) - detail::binomial_i64(n + q.d - 3, q.d - 1);
}

// dim of the space of spherical polynomials of degree <= N.
inline std::int64_t dim_poly(const DimQuery& q)
{
    detail::check_dim_query(q, "dim_poly");
    const int N = q.n_or_N;
    return detail::binomial_i64(N + q.d - 1, q.d - 1) + detail::binomial_i64(N + q.d - 2, q.d - 1);
}

namespace detail {

inline void validate_chain(int d, int n, const std::vector<int>& k, const char* who)
{
    if (d < 3) throw std::out_of_range(std::string(who) + ": dimension must be >= 3");
    if (n < 0) throw std::out_of_range(std::string(who) + ": degree must be nonnegative");
    if (static_cast<int>(k.size()) != d - 2)
        throw std::out_of_range(std::string(who) + ": chain must have d-2 entries");
    int prev = n;
    for (int j = 0; j + 1 < d - 2; ++j) {
        if (k[j] < 0 || k[j] > prev)
            throw std::out_of_range(std::string(who) + ": chain not monotone");
        prev = k[j];
    }
    if (std::abs(k[d - 3]) > prev)
        throw std::out_of_range(std::string(who) + ": last chain entry out of range");
}

} // namespace detail

// Orthonormalization constant A for the basis function indexed by (n, k) in
// dimension d. Evaluated entirely in log space; the raw factorial products
// overflow doubles already near n ~ 150.
inline double harmonic_norm_A(int d, int n, const std::vector<int>& k)
{
    detail::validate_chain(d, n, k, "harmonic_norm_A");
    const double ln2 = 0.69314718055994530941723212145817657;
    const double lnpi = 1.14472988584940017414342735135305871; // log(pi)
    double log_a2 = static_cast<double>(d - 4) * static_cast<double>(d - 2) * ln2 - std::lgamma(0.5 * d);
    int kj = n;
    for (int j = 0; j <= d - 3; ++j) {
        const int kj1 = std::abs(k[j]);
        const double half = 0.5 * (d - j - 2);
        log_a2 += (2.0 * kj1 - j) * ln2;
        log_a2 += std::lgamma(static_cast<double>(kj - kj1) + 1.0);
        log_a2 += std::log(static_cast<double>(2 * kj + d - j - 2));
        log_a2 += 2.0 * std::lgamma(half + kj1);
        log_a2 -= 0.5 * lnpi;
        log_a2 -= std::lgamma(static_cast<double>(kj + kj1 + d - j - 2));
        kj = kj1;
    }
    return std::exp(0.5 * log_a2);
}

} // namespace spherewave

#endif
