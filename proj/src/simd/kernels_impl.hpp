#pragma once

#include "pcv/simd/kernels.hpp"

namespace pcv::simd {

namespace scalar {
void add(double* dst, const double* src, std::size_t n);
void axpy(double* dst, const double* src, double alpha, std::size_t n);
std::size_t above(const double* src, double threshold, std::uint8_t* mask, std::size_t n);
} // namespace scalar

namespace avx2 {
void add(double* dst, const double* src, std::size_t n);
void axpy(double* dst, const double* src, double alpha, std::size_t n);
std::size_t above(const double* src, double threshold, std::uint8_t* mask, std::size_t n);
} // namespace avx2

namespace neon {
void add(double* dst, const double* src, std::size_t n);
void axpy(double* dst, const double* src, double alpha, std::size_t n);
std::size_t above(const double* src, double threshold, std::uint8_t* mask, std::size_t n);
} // namespace neon

} // namespace pcv::simd
