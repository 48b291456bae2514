#include "qnnent/errors.hpp"
#include "qnnent/state.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace qnnent {

namespace {

constexpr std::array<char, 4> kMagic   = {'Q', 'N', 'N', 'S'};
constexpr std::uint32_t       kVersion = 1;

void put_u32(std::ostream &os, std::uint32_t v) {
    char b[4];
    for(int k = 0; k < 4; ++k) b[k] = static_cast<char>((v >> (8 * k)) & 0xFFU);
    os.write(b, 4);
}

void put_f64(std::ostream &os, double d) {
    auto bits = std::bit_cast<std::uint64_t>(d);
    char b[8];
    for(int k = 0; k < 8; ++k) b[k] = static_cast<char>((bits >> (8 * k)) & 0xFFU);
    os.write(b, 8);
}

std::uint64_t get_le(std::istream &is, int nbytes, const char *what) {
    unsigned char b[8] = {};
    if(!is.read(reinterpret_cast<char *>(b), nbytes)) throw InputError(std::string("corrupt state file: truncated ") + what);
    std::uint64_t v = 0;
    for(int k = 0; k < nbytes; ++k) v |= static_cast<std::uint64_t>(b[k]) << (8 * k);
    return v;
}

} // namespace

void write_qns(std::ostream &os, const DenseState &state) {
    os.write(kMagic.data(), 4);
    put_u32(os, kVersion);
    put_u32(os, static_cast<std::uint32_t>(state.n_sites()));
    os.put(state.normalized() ? 1 : 0);
    for(const auto &z : state.amplitudes()) {
        put_f64(os, z.real());
        put_f64(os, z.imag());
    }
    if(!os) throw Error("failed writing state");
}

DenseState read_qns(std::istream &is) {
    std::array<char, 4> magic{};
    if(!is.read(magic.data(), 4) || magic != kMagic) throw InputError("corrupt state file: bad magic");
    auto version = get_le(is, 4, "version");
    if(version != kVersion) throw InputError("unsupported state file version " + std::to_string(version));
    auto n = get_le(is, 4, "site count");
    if(n > 40) throw InputError("corrupt state file: site count " + std::to_string(n));
    limits::require_dense(static_cast<int>(n), "state file");
    auto flag = get_le(is, 1, "normalized flag");
    if(flag > 1) throw InputError("corrupt state file: bad normalized flag");
    std::vector<cplx> amps(std::uint64_t{1} << n);
    for(auto &z : amps) {
        double re = std::bit_cast<double>(get_le(is, 8, "amplitudes"));
        double im = std::bit_cast<double>(get_le(is, 8, "amplitudes"));
        z         = {re, im};
    }
    if(is.peek() != std::char_traits<char>::eof()) throw InputError("corrupt state file: trailing bytes");
    return {static_cast<int>(n), std::move(amps), flag == 1};
}

void save_qns(const std::string &path, const DenseState &state) {
    std::ofstream os(path, std::ios::binary);
    if(!os) throw Error("cannot open " + path + " for writing");
    write_qns(os, state);
}

DenseState load_qns(const std::string &path) {
    std::ifstream is(path, std::ios::binary);
    if(!is) throw InputError("cannot open state file " + path);
    return read_qns(is);
}

} // namespace qnnent
