// Compiled with -mavx2 only (no -mfma) so mul + add stay two roundings.

#include "kernels_impl.hpp"

#include <immintrin.h>

namespace pcv::simd::avx2 {

void add(double* dst, const double* src, std::size_t n)
{
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d a0 = _mm256_loadu_pd(dst + i);
        const __m256d a1 = _mm256_loadu_pd(dst + i + 4);
        const __m256d b0 = _mm256_loadu_pd(src + i);
        const __m256d b1 = _mm256_loadu_pd(src + i + 4);
        _mm256_storeu_pd(dst + i, _mm256_add_pd(a0, b0));
        _mm256_storeu_pd(dst + i + 4, _mm256_add_pd(a1, b1));
    }
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_loadu_pd(dst + i), _mm256_loadu_pd(src + i)));
    }
    for (; i < n; ++i) {
        dst[i] += src[i];
    }
}

void axpy(double* dst, const double* src, double alpha, std::size_t n)
{
    const __m256d a = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d p0 = _mm256_mul_pd(a, _mm256_loadu_pd(src + i));
        const __m256d p1 = _mm256_mul_pd(a, _mm256_loadu_pd(src + i + 4));
        _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_loadu_pd(dst + i), p0));
        _mm256_storeu_pd(dst + i + 4, _mm256_add_pd(_mm256_loadu_pd(dst + i + 4), p1));
    }
    for (; i + 4 <= n; i += 4) {
        const __m256d p = _mm256_mul_pd(a, _mm256_loadu_pd(src + i));
        _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_loadu_pd(dst + i), p));
    }
    for (; i < n; ++i) {
        dst[i] += alpha * src[i];
    }
}

std::size_t above(const double* src, double threshold, std::uint8_t* mask, std::size_t n)
{
    const __m256d t = _mm256_set1_pd(threshold);
    std::size_t count = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        // Ordered, non-signalling: NaN compares false like the scalar path.
        const int bits = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(src + i), t, _CMP_GT_OQ));
        mask[i] = bits & 1;
        mask[i + 1] = (bits >> 1) & 1;
        mask[i + 2] = (bits >> 2) & 1;
        mask[i + 3] = (bits >> 3) & 1;
        count += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(bits)));
    }
    for (; i < n; ++i) {
        const bool hit = src[i] > threshold;
        mask[i] = hit ? 1 : 0;
        count += hit ? 1 : 0;
    }
    return count;
}

} // namespace pcv::simd::avx2
