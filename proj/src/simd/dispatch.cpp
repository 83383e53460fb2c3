#include "kernels_impl.hpp"

#include <atomic>

namespace pcv::simd {

namespace {

constexpr KernelTable kScalar{Isa::Scalar, "scalar", &scalar::add, &scalar::axpy, &scalar::above};
#if defined(PCV_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::Avx2, "avx2", &avx2::add, &avx2::axpy, &avx2::above};
#endif
#if defined(PCV_HAVE_NEON)
constexpr KernelTable kNeon{Isa::Neon, "neon", &neon::add, &neon::axpy, &neon::above};
#endif

bool cpu_has_avx2() noexcept
{
#if defined(PCV_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const KernelTable* initial_table() noexcept
{
    const KernelTable* t = kernels_for(best_isa());
    return t != nullptr ? t : &kScalar;
}

std::atomic<const KernelTable*>& active_slot() noexcept
{
    static std::atomic<const KernelTable*> slot{initial_table()};
    return slot;
}

} // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

const KernelTable* kernels_for(Isa isa) noexcept
{
    switch (isa) {
    case Isa::Scalar: return &kScalar;
    case Isa::Avx2:
#if defined(PCV_HAVE_AVX2)
        return cpu_has_avx2() ? &kAvx2 : nullptr;
#else
        return nullptr;
#endif
    case Isa::Neon:
#if defined(PCV_HAVE_NEON)
        return &kNeon; // mandatory on AArch64
#else
        return nullptr;
#endif
    }
    return nullptr;
}

std::vector<const KernelTable*> available_kernels()
{
    std::vector<const KernelTable*> out;
    for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
        if (const KernelTable* t = kernels_for(isa)) {
            out.push_back(t);
        }
    }
    return out;
}

Isa best_isa() noexcept
{
    if (kernels_for(Isa::Avx2) != nullptr) return Isa::Avx2;
    if (kernels_for(Isa::Neon) != nullptr) return Isa::Neon;
    return Isa::Scalar;
}

const KernelTable& active_kernels() noexcept { return *active_slot().load(std::memory_order_acquire); }

bool set_active_isa(Isa isa) noexcept
{
    const KernelTable* t = kernels_for(isa);
    if (t == nullptr) {
        return false;
    }
    active_slot().store(t, std::memory_order_release);
    return true;
}

std::optional<Isa> parse_isa(std::string_view name)
{
    if (name == "scalar") return Isa::Scalar;
    if (name == "avx2") return Isa::Avx2;
    if (name == "neon") return Isa::Neon;
    return std::nullopt;
}

} // namespace pcv::simd
