#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace cascadelab {

// Pairwise (cascade) summation with a fixed association tree determined only
// by the element count, so the result is reproducible bit-for-bit for a given
// input order. Error grows like O(log n) ulps instead of O(n).
template <typename T>
T pairwise_sum(const T* v, std::size_t n) {
    if (n == 0) return T{};
    if (n <= 8) {
        T s = v[0];
        for (std::size_t i = 1; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

template <typename T>
T pairwise_sum(const std::vector<T>& v) {
    return pairwise_sum(v.data(), v.size());
}

inline double pairwise_mean(const std::vector<double>& v) {
    return v.empty() ? 0.0 : pairwise_sum(v) / static_cast<double>(v.size());
}

// Unbiased sample variance (divides by n-1), pairwise-summed squared deviations.
double sample_variance(const std::vector<double>& v);

// Sample quantile, linear interpolation between order statistics (the common
// "type 7" rule). q in [0,1].
double sample_quantile(std::vector<double> v, double q);

}  // namespace cascadelab
