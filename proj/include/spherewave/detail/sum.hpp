#ifndef SPHEREWAVE_DETAIL_SUM_HPP
#define SPHEREWAVE_DETAIL_SUM_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace spherewave::detail {

// Pairwise summation over a fixed index range. The reduction tree depends
// only on the range, so results are reproducible bit-for-bit no matter how
// the caller partitions work across threads.
template <typename T, typename F>
T pairwise_sum(std::size_t lo, std::size_t hi, F&& term)
{
    const std::size_t n = hi - lo;
    if (n == 0) return T{};
    if (n <= 8) {
        T acc = term(lo);
        for (std::size_t i = lo + 1; i < hi; ++i) acc += term(i);
        return acc;
    }
    const std::size_t mid = lo + n / 2;
    return pairwise_sum<T>(lo, mid, term) + pairwise_sum<T>(mid, hi, std::forward<F>(term));
}

template <typename T>
T pairwise_sum(const std::vector<T>& v)
{
    return pairwise_sum<T>(0, v.size(), [&](std::size_t i) { return v[i]; });
}

// Neumaier-compensated accumulator for long runs of nonnegative terms
// (frame energy sums reach millions of addends; plain doubles drift past
// the 1e-10 verification tolerances).
class CompensatedSum {
public:
    void add(double x)
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace spherewave::detail

#endif
