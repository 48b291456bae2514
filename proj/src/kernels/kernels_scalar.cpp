#include "qnnent/kernels.hpp"

#include <bit>

namespace qnnent::kernels::scalar {

cplx inner_product(std::span<const cplx> a, std::span<const cplx> b) {
    double re = 0.0, im = 0.0;
    for(std::size_t i = 0; i < a.size(); ++i) {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

double norm_squared(std::span<const cplx> a) {
    double acc = 0.0;
    for(const auto &z : a) acc += z.real() * z.real() + z.imag() * z.imag();
    return acc;
}

void scale(std::span<cplx> a, double s) {
    for(auto &z : a) z *= s;
}

void apply_z_parity(std::span<cplx> a, std::uint64_t zmask) {
    for(std::uint64_t i = 0; i < a.size(); ++i)
        if(std::popcount(i & zmask) & 1) a[i] = -a[i];
}

} // namespace qnnent::kernels::scalar
