#include "kernels_impl.hpp"

#include <arm_neon.h>

namespace pcv::simd::neon {

void add(double* dst, const double* src, std::size_t n)
{
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(dst + i, vaddq_f64(vld1q_f64(dst + i), vld1q_f64(src + i)));
    }
    for (; i < n; ++i) {
        dst[i] += src[i];
    }
}

void axpy(double* dst, const double* src, double alpha, std::size_t n)
{
    const float64x2_t a = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        // vmulq + vaddq rather than vfmaq to match the scalar rounding.
        vst1q_f64(dst + i, vaddq_f64(vld1q_f64(dst + i), vmulq_f64(a, vld1q_f64(src + i))));
    }
    for (; i < n; ++i) {
        dst[i] += alpha * src[i];
    }
}

std::size_t above(const double* src, double threshold, std::uint8_t* mask, std::size_t n)
{
    const float64x2_t t = vdupq_n_f64(threshold);
    std::size_t count = 0;
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const uint64x2_t gt = vcgtq_f64(vld1q_f64(src + i), t);
        mask[i] = vgetq_lane_u64(gt, 0) ? 1 : 0;
        mask[i + 1] = vgetq_lane_u64(gt, 1) ? 1 : 0;
        count += mask[i] + mask[i + 1];
    }
    for (; i < n; ++i) {
        const bool hit = src[i] > threshold;
        mask[i] = hit ? 1 : 0;
        count += hit ? 1 : 0;
    }
    return count;
}

} // namespace pcv::simd::neon
