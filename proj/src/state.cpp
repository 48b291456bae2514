#include "qnnent/state.hpp"

#include "qnnent/errors.hpp"
#include "qnnent/kernels.hpp"
#include "qnnent/parallel.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <cmath>
#include <limits>

#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

namespace qnnent {

const char *alphabet_name(Alphabet a) { return a == Alphabet::PlusMinus ? "plus_minus" : "zero_one"; }

Alphabet parse_alphabet(const std::string &name) {
    if(name == "plus_minus" || name == "pm" || name == "+-1") return Alphabet::PlusMinus;
    if(name == "zero_one" || name == "01") return Alphabet::ZeroOne;
    throw InputError("unknown alphabet '" + name + "' (expected zero_one or plus_minus)");
}

SpinConfiguration::SpinConfiguration(int n_sites, std::uint64_t bits, Alphabet alphabet)
    : n_sites_(n_sites), bits_(bits), alphabet_(alphabet) {
    if(n_sites < 0 || n_sites > 63) throw InputError("configuration size out of range");
    if(n_sites < 63 && (bits >> n_sites) != 0) throw InputError("configuration bits exceed site count");
}

DenseState::DenseState(int n_sites, std::vector<cplx> amplitudes, bool normalized)
    : n_sites_(n_sites), amps_(std::move(amplitudes)), normalized_(normalized) {
    if(n_sites < 0 || n_sites > 40) throw InputError("state size out of range");
    if(amps_.size() != (std::uint64_t{1} << n_sites))
        throw InputError("amplitude vector length " + std::to_string(amps_.size()) + " is not 2^" + std::to_string(n_sites));
}

double DenseState::norm_squared() const { return kernels::norm_squared(amps_); }

DenseState evaluate_all(const AmplitudeFn &amp, int n_sites, Alphabet alphabet) {
    limits::require_dense(n_sites, "evaluate_all");
    std::vector<cplx> amps(std::uint64_t{1} << n_sites);
    parallel_for(0, amps.size(), [&](std::uint64_t lo, std::uint64_t hi) {
        for(std::uint64_t i = lo; i < hi; ++i) amps[i] = amp(SpinConfiguration(n_sites, i, alphabet));
    });
    return {n_sites, std::move(amps), false};
}

DenseState evaluate_all_log(const AmplitudeFn &log_amp, int n_sites, Alphabet alphabet) {
    limits::require_dense(n_sites, "evaluate_all");
    std::vector<cplx> logs(std::uint64_t{1} << n_sites);
    parallel_for(0, logs.size(), [&](std::uint64_t lo, std::uint64_t hi) {
        for(std::uint64_t i = lo; i < hi; ++i) logs[i] = log_amp(SpinConfiguration(n_sites, i, alphabet));
    });
    double shift = -std::numeric_limits<double>::infinity();
    for(const auto &l : logs)
        if(std::isfinite(l.real())) shift = std::max(shift, l.real());
    if(!std::isfinite(shift)) shift = 0.0;
    for(auto &l : logs) l = std::isfinite(l.real()) ? std::exp(l - shift) : cplx{0.0, 0.0};
    return {n_sites, std::move(logs), false};
}

DenseState normalize(const DenseState &state) {
    double n2 = state.norm_squared();
    if(!(n2 > 0.0) || !std::isfinite(n2)) throw DegenerateStateError("cannot normalize a zero (or non-finite) state");
    std::vector<cplx> amps(state.amplitudes().begin(), state.amplitudes().end());
    kernels::scale(amps, 1.0 / std::sqrt(n2));
    return {state.n_sites(), std::move(amps), true};
}

cplx inner_product(const DenseState &a, const DenseState &b) {
    if(a.n_sites() != b.n_sites()) throw InputError("inner_product: site count mismatch");
    return kernels::inner_product(a.amplitudes(), b.amplitudes());
}

std::string pauli_string_label(const PauliString &ps) {
    std::string out;
    for(const auto &p : ps) {
        if(!out.empty()) out += ' ';
        out += static_cast<char>(p.op);
        out += std::to_string(p.site);
    }
    return out;
}

DenseState apply_pauli_string(const DenseState &state, const PauliString &ops) {
    std::uint64_t xmask = 0, zmask = 0, seen = 0;
    int           n_y   = 0;
    for(const auto &p : ops) {
        if(p.site < 0 || p.site >= state.n_sites()) throw InputError("Pauli on invalid site " + std::to_string(p.site));
        std::uint64_t bit = std::uint64_t{1} << p.site;
        if(seen & bit) throw InputError("duplicate site " + std::to_string(p.site) + " in Pauli string");
        seen |= bit;
        if(p.op == Pauli::X || p.op == Pauli::Y) xmask |= bit;
        if(p.op == Pauli::Z || p.op == Pauli::Y) zmask |= bit;
        if(p.op == Pauli::Y) ++n_y;
    }
    // P = i^{n_y} X^x Z^z : first the Z phases, then the bit flips.
    std::vector<cplx> tmp(state.amplitudes().begin(), state.amplitudes().end());
    kernels::apply_z_parity(tmp, zmask);
    static constexpr cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    cplx                  global  = ipow[n_y % 4];
    std::vector<cplx>     out(tmp.size());
    for(std::uint64_t i = 0; i < tmp.size(); ++i) out[i ^ xmask] = global * tmp[i];
    return {state.n_sites(), std::move(out), state.normalized()};
}

Bipartition::Bipartition(int n_sites, std::vector<int> region_a) : n_sites_(n_sites), region_(std::move(region_a)) {
    if(n_sites < 2 || n_sites > 63) throw InputError("bipartition needs 2..63 sites");
    std::sort(region_.begin(), region_.end());
    if(std::adjacent_find(region_.begin(), region_.end()) != region_.end()) throw InputError("duplicate site in region");
    for(int s : region_) {
        if(s < 0 || s >= n_sites) throw InputError("region site " + std::to_string(s) + " out of range");
        mask_ |= std::uint64_t{1} << s;
    }
    if(region_.empty() || static_cast<int>(region_.size()) == n_sites)
        throw InputError("region must be a nonempty proper subset of the sites");
}

std::vector<int> Bipartition::complement() const {
    std::vector<int> out;
    for(int s = 0; s < n_sites_; ++s)
        if(!contains(s)) out.push_back(s);
    return out;
}

Bipartition Bipartition::flipped() const { return {n_sites_, complement()}; }

SchmidtSpectrum schmidt(const DenseState &state, const Bipartition &part) {
    if(!state.normalized()) throw PreconditionError("schmidt: state must be normalized");
    if(state.n_sites() != part.n_sites()) throw InputError("schmidt: site count mismatch");
    const auto         region = part.region();
    const auto         comp   = part.complement();
    const auto rows = std::uint64_t{1} << region.size();
    const auto cols = std::uint64_t{1} << comp.size();
    // Column-major rows x cols amplitude matrix for LAPACK.
    std::vector<cplx> m(rows * cols);
    auto              amps = state.amplitudes();
    for(std::uint64_t i = 0; i < amps.size(); ++i) {
        std::uint64_t r = 0, c = 0;
        for(std::size_t k = 0; k < region.size(); ++k) r |= ((i >> region[k]) & 1U) << k;
        for(std::size_t k = 0; k < comp.size(); ++k) c |= ((i >> comp[k]) & 1U) << k;
        m[r + c * rows] = amps[i];
    }
    std::vector<double> sv(std::min(rows, cols));
    const auto          lr   = static_cast<lapack_int>(rows);
    const auto          lc   = static_cast<lapack_int>(cols);
    lapack_int          info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', lr, lc, reinterpret_cast<lapack_complex_double *>(m.data()),
                                              lr, sv.data(), nullptr, 1, nullptr, 1);
    if(info != 0) throw Error("schmidt: singular value decomposition failed (info " + std::to_string(info) + ")");
    SchmidtSpectrum out;
    out.values = std::move(sv);
    std::sort(out.values.begin(), out.values.end(), std::greater<>());
    return out;
}

double renyi_entropy(const SchmidtSpectrum &spectrum, double alpha) {
    if(!(alpha > 0.0) || !std::isfinite(alpha)) throw InputError("Renyi index alpha must be a positive finite number");
    if(alpha == 1.0) {
        double s = 0.0;
        for(double v : spectrum.values) {
            double p = v * v;
            if(p > 0.0) s -= p * std::log(p);
        }
        return std::max(0.0, s);
    }
    double acc = 0.0;
    for(double v : spectrum.values) {
        double p = v * v;
        if(p > 0.0) acc += std::pow(p, alpha);
    }
    return std::max(0.0, std::log(acc) / (1.0 - alpha));
}

int numerical_rank(const SchmidtSpectrum &spectrum, double rel_tol) {
    double vmax = 0.0;
    for(double v : spectrum.values) vmax = std::max(vmax, v);
    if(vmax <= 0.0) return 0;
    return static_cast<int>(std::count_if(spectrum.values.begin(), spectrum.values.end(),
                                          [&](double v) { return v > rel_tol * vmax; }));
}

} // namespace qnnent
