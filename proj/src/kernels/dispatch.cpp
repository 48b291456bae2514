// Built without ISA flags: CPUID probing must not itself require AVX.
#include "qnnent/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace qnnent::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(QNNENT_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa detect() {
    if(const char *env = std::getenv("QNNENT_SIMD"); env && std::strcmp(env, "scalar") == 0) return Isa::Scalar;
    return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa> &selected() {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

} // namespace

Isa active_isa() { return selected().load(std::memory_order_relaxed); }

const char *isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) { return isa == Isa::Scalar || cpu_has_avx2(); }

void force_isa(Isa isa) {
    if(!isa_available(isa)) throw std::invalid_argument(std::string("ISA not available: ") + isa_name(isa));
    selected().store(isa);
}

cplx inner_product(std::span<const cplx> a, std::span<const cplx> b) {
    if(a.size() != b.size()) throw std::invalid_argument("inner_product: length mismatch");
    return active_isa() == Isa::Avx2 ? avx2::inner_product(a, b) : scalar::inner_product(a, b);
}

double norm_squared(std::span<const cplx> a) {
    return active_isa() == Isa::Avx2 ? avx2::norm_squared(a) : scalar::norm_squared(a);
}

void scale(std::span<cplx> a, double s) {
    if(active_isa() == Isa::Avx2)
        avx2::scale(a, s);
    else
        scalar::scale(a, s);
}

void apply_z_parity(std::span<cplx> a, std::uint64_t zmask) {
    if(active_isa() == Isa::Avx2)
        avx2::apply_z_parity(a, zmask);
    else
        scalar::apply_z_parity(a, zmask);
}

} // namespace qnnent::kernels
