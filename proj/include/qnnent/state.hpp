#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace qnnent {

using cplx = std::complex<double>;

/// How a stored bit maps to the value a formula sees. PlusMinus maps bit b to
/// s = 1 - 2b (bit 0 <-> s = +1); ZeroOne maps it to b itself.
enum class Alphabet { ZeroOne, PlusMinus };

[[nodiscard]] constexpr int alphabet_value(bool bit, Alphabet a) {
    return a == Alphabet::PlusMinus ? 1 - 2 * static_cast<int>(bit) : static_cast<int>(bit);
}
[[nodiscard]] const char *alphabet_name(Alphabet a);
[[nodiscard]] Alphabet    parse_alphabet(const std::string &name);

/// One basis configuration of N binary sites, bit-packed with site 0 as the least
/// significant bit; index() is the position in a dense amplitude vector.
class SpinConfiguration {
  public:
    SpinConfiguration(int n_sites, std::uint64_t bits, Alphabet alphabet);

    [[nodiscard]] int           n_sites() const { return n_sites_; }
    [[nodiscard]] std::uint64_t index() const { return bits_; }
    [[nodiscard]] Alphabet      alphabet() const { return alphabet_; }
    [[nodiscard]] bool          bit(int site) const { return (bits_ >> site) & 1U; }
    [[nodiscard]] int           value(int site) const { return alphabet_value(bit(site), alphabet_); }

  private:
    int           n_sites_;
    std::uint64_t bits_;
    Alphabet      alphabet_;
};

/// Full amplitude vector of length 2^n.
class DenseState {
  public:
    DenseState() = default;
    DenseState(int n_sites, std::vector<cplx> amplitudes, bool normalized = false);

    [[nodiscard]] int                     n_sites() const { return n_sites_; }
    [[nodiscard]] std::size_t             dim() const { return amps_.size(); }
    [[nodiscard]] bool                    normalized() const { return normalized_; }
    [[nodiscard]] std::span<const cplx>   amplitudes() const { return amps_; }
    [[nodiscard]] const cplx             &operator[](std::uint64_t i) const { return amps_[i]; }
    [[nodiscard]] double                  norm_squared() const;
    [[nodiscard]] std::vector<cplx>       take_amplitudes() && { return std::move(amps_); }

    bool operator==(const DenseState &) const = default;

  private:
    int               n_sites_ = 0;
    std::vector<cplx> amps_;
    bool              normalized_ = false;
};

using AmplitudeFn = std::function<cplx(const SpinConfiguration &)>;

/// Materializes amp over all 2^n configurations (parallel over index ranges).
/// Throws ResourceError above limits::max_sites().
DenseState evaluate_all(const AmplitudeFn &amp, int n_sites, Alphabet alphabet);

/// Same, for functions returning log-amplitudes: the global maximum real part is
/// subtracted before exponentiating so large exponents do not overflow.
DenseState evaluate_all_log(const AmplitudeFn &log_amp, int n_sites, Alphabet alphabet);

/// Throws DegenerateStateError on a zero vector.
DenseState normalize(const DenseState &state);

[[nodiscard]] cplx inner_product(const DenseState &a, const DenseState &b);

enum class Pauli : char { X = 'X', Y = 'Y', Z = 'Z' };

struct PauliOp {
    int   site = 0;
    Pauli op   = Pauli::Z;
};

using PauliString = std::vector<PauliOp>;

[[nodiscard]] std::string pauli_string_label(const PauliString &ps);

/// Applies the tensor product of the listed single-site Paulis. Z is the phase
/// (-1)^bit, X flips the bit, Y = iXZ. Throws InputError on duplicate or invalid sites.
DenseState apply_pauli_string(const DenseState &state, const PauliString &ops);

/// Region A of a bipartition; the complement is derived.
class Bipartition {
  public:
    Bipartition(int n_sites, std::vector<int> region_a);

    [[nodiscard]] int                     n_sites() const { return n_sites_; }
    [[nodiscard]] const std::vector<int> &region() const { return region_; }
    [[nodiscard]] std::vector<int>        complement() const;
    [[nodiscard]] bool                    contains(int site) const { return (mask_ >> site) & 1U; }
    [[nodiscard]] std::uint64_t           mask() const { return mask_; }
    [[nodiscard]] Bipartition             flipped() const;

  private:
    int              n_sites_;
    std::vector<int> region_;
    std::uint64_t    mask_ = 0;
};

/// Singular values of the amplitude matrix reshaped to 2^|A| x 2^|A^c|, non-increasing.
struct SchmidtSpectrum {
    std::vector<double> values;
};

/// Rows are indexed by region-A bits in ascending site order, columns by A^c bits.
/// Requires a normalized state (PreconditionError otherwise).
SchmidtSpectrum schmidt(const DenseState &state, const Bipartition &part);

/// Rényi entropy in nats; alpha == 1 is the von Neumann branch. InputError for alpha <= 0.
double renyi_entropy(const SchmidtSpectrum &spectrum, double alpha);

[[nodiscard]] inline double nats_to_bits(double nats) { return nats / 0.69314718055994530942; }

/// Number of singular values above rel_tol * max.
int numerical_rank(const SchmidtSpectrum &spectrum, double rel_tol = 1e-10);

// .qns binary state files: "QNNS", u32 version = 1, u32 n_sites, u8 normalized,
// then 2^n (re, im) f64 pairs, all little-endian, in index order.
void       write_qns(std::ostream &os, const DenseState &state);
DenseState read_qns(std::istream &is);
void       save_qns(const std::string &path, const DenseState &state);
DenseState load_qns(const std::string &path);

} // namespace qnnent
