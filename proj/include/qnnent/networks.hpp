#pragma once

#include "qnnent/geometry.hpp"
#include "qnnent/quasi_product.hpp"
#include "qnnent/state.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace qnnent {

/// Complex weights between two adjacent layers. Entry (i, j) couples lower-layer
/// neuron i to upper-layer neuron j. A connection exists iff the mask bit is set
/// and the weight is nonzero; masked-out weights must be exactly zero.
class LayerWeights {
  public:
    LayerWeights() = default;
    LayerWeights(int rows, int cols);

    [[nodiscard]] int  rows() const { return rows_; }
    [[nodiscard]] int  cols() const { return cols_; }
    [[nodiscard]] cplx at(int i, int j) const { return w_[idx(i, j)]; }
    [[nodiscard]] bool masked(int i, int j) const { return mask_[idx(i, j)] != 0; }
    [[nodiscard]] bool connected(int i, int j) const { return masked(i, j) && at(i, j) != cplx{}; }

    /// Sets the weight and marks the entry as present in the mask.
    void set(int i, int j, cplx w);
    /// Sets weight and mask bit independently (deserialization path).
    void set_raw(int i, int j, cplx w, bool mask);

    /// For each upper neuron, its connected lower neurons (ascending).
    [[nodiscard]] std::vector<std::vector<int>> upper_neighbors() const;
    /// For each lower neuron, its connected upper neurons (ascending).
    [[nodiscard]] std::vector<std::vector<int>> lower_neighbors() const;

    void validate(const std::string &what) const;

    bool operator==(const LayerWeights &) const = default;

  private:
    [[nodiscard]] std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(j);
    }
    int                       rows_ = 0, cols_ = 0;
    std::vector<cplx>         w_;
    std::vector<std::uint8_t> mask_;
};

/// Restricted Boltzmann machine with complex parameters.
struct RbmSpec {
    int               n_visible = 0;
    int               n_hidden  = 0;
    std::vector<cplx> visible_bias; // a_i
    std::vector<cplx> hidden_bias;  // b_j
    LayerWeights      weights;      // n_visible x n_hidden
    Alphabet          visible_alphabet = Alphabet::PlusMinus;
    Alphabet          hidden_alphabet  = Alphabet::PlusMinus;
    /// Site of each hidden neuron on the duplicated lattice; empty means "same index".
    std::vector<std::optional<int>> hidden_positions;

    void validate() const;
    bool operator==(const RbmSpec &) const = default;
};

/// Activation whitelist for feed-forward neurons.
struct Activation {
    enum class Kind { Cos, Cosh, Exp, Tanh, Polynomial };
    Kind              kind = Kind::Exp;
    std::vector<cplx> coeffs; // polynomial only: sum_k coeffs[k] z^k

    [[nodiscard]] cplx        operator()(cplx z) const;
    [[nodiscard]] std::string name() const;
    static Activation         parse(const std::string &name);
    bool                      operator==(const Activation &) const = default;
};

/// Layered feed-forward network; each layer only reads the previous one.
struct FeedForwardSpec {
    struct Layer {
        int                             size = 0;
        std::vector<cplx>               bias;       // neuron output is F(sum w x - bias)
        LayerWeights                    weights;    // previous layer size x size
        std::vector<Activation>         activation; // one per neuron
        std::vector<std::optional<int>> positions;  // empty means "same index"
        bool                            operator==(const Layer &) const = default;
    };
    int                n_visible        = 0;
    Alphabet           visible_alphabet = Alphabet::ZeroOne;
    std::vector<Layer> layers;

    void validate() const;
    bool operator==(const FeedForwardSpec &) const = default;
};

/// Deep Boltzmann machine with two hidden layers (visible - shallow - deep).
struct DbmSpec {
    int               n_visible = 0;
    int               n_shallow = 0;
    int               n_deep    = 0;
    std::vector<cplx> visible_bias; // a_i
    std::vector<cplx> shallow_bias; // b_j
    std::vector<cplx> deep_bias;    // c_k
    LayerWeights      w_vh;         // n_visible x n_shallow
    LayerWeights      w_hg;         // n_shallow x n_deep
    Alphabet          visible_alphabet = Alphabet::PlusMinus;
    Alphabet          shallow_alphabet = Alphabet::ZeroOne;
    Alphabet          deep_alphabet    = Alphabet::ZeroOne;
    std::vector<std::optional<int>> shallow_positions;
    std::vector<std::optional<int>> deep_positions;

    void validate() const;
    bool operator==(const DbmSpec &) const = default;
};

using NetworkSpec = std::variant<RbmSpec, DbmSpec, FeedForwardSpec>;

/// Gamma(theta) = 2 cosh(theta) for +-1 hidden units, 1 + exp(theta) for 0/1 units.
[[nodiscard]] cplx hidden_factor(cplx theta, Alphabet hidden);
[[nodiscard]] cplx log_hidden_factor(cplx theta, Alphabet hidden);

/// e^{sum a_i v_i} prod_j Gamma_j(b_j + sum_i W_ij v_i).
cplx rbm_amplitude(const RbmSpec &spec, const SpinConfiguration &v);
cplx rbm_log_amplitude(const RbmSpec &spec, const SpinConfiguration &v);

/// One cluster per hidden unit (its connected visibles, table = Gamma_j), plus one
/// 1-site cluster e^{a_i v_i} per visible with a bias or with no hidden coupling.
/// Unconnected hidden units contribute a constant folded into cluster 0.
ClusterCover rbm_to_quasi_product(const RbmSpec &spec);

/// Product of the output-layer activations.
cplx ffnn_amplitude(const FeedForwardSpec &spec, const SpinConfiguration &v);

/// Shallow layer summed analytically, deep layer enumerated (2^n_deep terms) and
/// reduced by a pairwise tree sum.
cplx dbm_amplitude(const DbmSpec &spec, const SpinConfiguration &v);
cplx dbm_log_amplitude(const DbmSpec &spec, const SpinConfiguration &v);

/// True when some exponent can exceed 300 in real part; amplitudes are then
/// accumulated in log space.
[[nodiscard]] bool needs_log_space(const RbmSpec &spec);
[[nodiscard]] bool needs_log_space(const DbmSpec &spec);

/// Unnormalized dense states (log-space materialization when needed).
DenseState network_state(const RbmSpec &spec);
DenseState network_state(const DbmSpec &spec);
DenseState network_state(const FeedForwardSpec &spec);
DenseState network_state(const NetworkSpec &spec);

[[nodiscard]] int n_visible(const NetworkSpec &spec);

LayeredConnectivity connectivity(const RbmSpec &spec);
LayeredConnectivity connectivity(const DbmSpec &spec);
LayeredConnectivity connectivity(const FeedForwardSpec &spec);
LayeredConnectivity connectivity(const NetworkSpec &spec);

LocalityReport validate_k_local(const NetworkSpec &spec, const LatticeGeometry &g, double eps);

enum class NetworkKind { Rbm, Dbm };

struct Locality {
    bool   dense = false;
    int    K     = 3;
    double eps   = 1.0;
    static Locality local(int K, double eps) { return {false, K, eps}; }
    static Locality all_to_all() { return {true, 0, 0.0}; }
};

struct RandomNetworkOptions {
    NetworkKind                    kind = NetworkKind::Rbm;
    int                            n    = 0;
    Locality                       locality;
    std::uint64_t                  seed  = 0;
    double                         scale = 1.0;
    std::optional<LatticeGeometry> geometry; // default: periodic chain of n sites
    int                            n_hidden = -1; // default n
    int                            n_deep   = -1; // default n
    Alphabet                       visible_alphabet = Alphabet::PlusMinus;
    Alphabet                       hidden_alphabet  = Alphabet::PlusMinus;
    Alphabet                       deep_alphabet    = Alphabet::PlusMinus;
};

/// Seeded generator (mt19937_64). Real and imaginary parts are uniform in
/// [-scale, scale], drawn in the order: visible bias, hidden bias, visible-hidden
/// weights (row-major, connected entries only), then for DBMs deep bias and
/// hidden-deep weights. A K-local request connects each hidden neuron to the K
/// members of its eps-ball closest to it (ties: forward offset first).
NetworkSpec random_network(const RandomNetworkOptions &opts);
RbmSpec     random_rbm(RandomNetworkOptions opts);
DbmSpec     random_dbm(RandomNetworkOptions opts);

/// Visible/deep neurons grouped around a cut (the "six groups" on each layer) and
/// the Schmidt-rank ceiling they imply.
///
/// Left neurons are visibles in A and deep neurons positioned in A; the rest are
/// right. Group 3 holds neurons that share a shallow unit with the other side,
/// group 2 those sharing a unit with a group-3 neuron of their own side, group 1
/// the rest. Fixing the deep group-3 neurons and the smaller visible group 3
/// decouples the two sides, so rank(rho_A) <= 2^bound_log2 with
/// bound_log2 = |B3| + |Bc3| + min(|A3|, |Ac3|).
struct SixGroupDecomposition {
    std::vector<int> a1, a2, a3, ac1, ac2, ac3; // visible neurons
    std::vector<int> b1, b2, b3, bc1, bc2, bc3; // deep neurons
    std::vector<int> c_int, c_ext, c_bd;        // shallow units
    int              bound_log2      = 0;
    int              full_sum_log2   = 0; // |A2 u A3 u Ac3 u Ac2| + |B2 u B3 u Bc3 u Bc2|
};

SixGroupDecomposition six_group(const DbmSpec &spec, const Bipartition &part);

} // namespace qnnent
