#pragma once

// Data-parallel inner loops over dense amplitude vectors.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2+FMA
// variant compiled in its own translation unit. The variant is chosen once at
// runtime from CPUID; QNNENT_SIMD=scalar forces the reference path. The two
// paths are equivalence-tested (tests/kernels_test.cpp); they agree to rounding,
// not bit-for-bit, because the vector path sums in four interleaved lanes.

#include <complex>
#include <cstdint>
#include <span>

namespace qnnent::kernels {

using cplx = std::complex<double>;

enum class Isa { Scalar, Avx2 };

[[nodiscard]] Isa         active_isa();
[[nodiscard]] const char *isa_name(Isa isa);
[[nodiscard]] bool        isa_available(Isa isa);
/// Test hook; throws std::invalid_argument if the ISA is not available on this CPU.
void force_isa(Isa isa);

/// sum_i conj(a_i) * b_i
[[nodiscard]] cplx inner_product(std::span<const cplx> a, std::span<const cplx> b);
/// sum_i |a_i|^2
[[nodiscard]] double norm_squared(std::span<const cplx> a);
/// a_i *= s
void scale(std::span<cplx> a, double s);
/// a_i *= (-1)^popcount(i & zmask)
void apply_z_parity(std::span<cplx> a, std::uint64_t zmask);

namespace scalar {
cplx   inner_product(std::span<const cplx> a, std::span<const cplx> b);
double norm_squared(std::span<const cplx> a);
void   scale(std::span<cplx> a, double s);
void   apply_z_parity(std::span<cplx> a, std::uint64_t zmask);
} // namespace scalar

namespace avx2 {
cplx   inner_product(std::span<const cplx> a, std::span<const cplx> b);
double norm_squared(std::span<const cplx> a);
void   scale(std::span<cplx> a, double s);
void   apply_z_parity(std::span<cplx> a, std::uint64_t zmask);
} // namespace avx2

} // namespace qnnent::kernels
