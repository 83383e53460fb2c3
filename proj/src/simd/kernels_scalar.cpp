#include "kernels_impl.hpp"

namespace pcv::simd::scalar {

void add(double* dst, const double* src, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i) {
        dst[i] += src[i];
    }
}

void axpy(double* dst, const double* src, double alpha, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i) {
        dst[i] += alpha * src[i];
    }
}

std::size_t above(const double* src, double threshold, std::uint8_t* mask, std::size_t n)
{
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const bool hit = src[i] > threshold;
        mask[i] = hit ? 1 : 0;
        count += hit ? 1 : 0;
    }
    return count;
}

} // namespace pcv::simd::scalar
