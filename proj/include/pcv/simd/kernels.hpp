#pragma once

// Row kernels behind the vote accumulator and the peak threshold.
//
// Every kernel has a scalar reference implementation. SIMD variants are
// compiled into their own translation units and picked at runtime from what
// the CPU reports. Variants are bit-identical to the scalar reference: each
// lane performs the same single IEEE operation per element and no FMA
// contraction is allowed.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace pcv::simd {

enum class Isa { Scalar, Avx2, Neon };

struct KernelTable {
    Isa isa;
    const char* name;
    /// dst[i] += src[i]
    void (*add)(double* dst, const double* src, std::size_t n);
    /// dst[i] += alpha * src[i]
    void (*axpy)(double* dst, const double* src, double alpha, std::size_t n);
    /// mask[i] = src[i] > threshold; returns the number of set entries.
    std::size_t (*above)(const double* src, double threshold, std::uint8_t* mask, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;

/// Table for the given ISA, or nullptr if it is not compiled in or the CPU lacks it.
const KernelTable* kernels_for(Isa isa) noexcept;

/// Every table usable on this machine, scalar first.
std::vector<const KernelTable*> available_kernels();

/// The widest usable ISA.
Isa best_isa() noexcept;

/// Currently selected table; starts at best_isa().
const KernelTable& active_kernels() noexcept;

/// Selects the table used by active_kernels(). Returns false if unavailable.
bool set_active_isa(Isa isa) noexcept;

std::optional<Isa> parse_isa(std::string_view name);

} // namespace pcv::simd
