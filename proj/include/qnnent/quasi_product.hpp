#pragma once

#include "qnnent/state.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace qnnent {

/// One factor of a quasi-product state: a complex table over the 2^|sites| local
/// configurations, indexed by sum_k bit(sites[k]) << k.
struct LocalCluster {
    std::vector<int>  sites;
    std::vector<cplx> table;

    [[nodiscard]] std::size_t size() const { return sites.size(); }
    [[nodiscard]] cplx        lookup(std::uint64_t config_bits) const;
};

/// Builds a cluster by evaluating f on every local configuration, passing the
/// site values in `alphabet` in the order of `sites`.
LocalCluster tabulate_cluster(std::vector<int> sites, Alphabet alphabet,
                              const std::function<cplx(std::span<const int>)> &f);

/// A local K-cluster cover: clusters whose union is every site, K = max |C_i|.
class ClusterCover {
  public:
    static constexpr int max_cluster_size = 16;

    /// Throws InputError if a table has the wrong length, a cluster repeats a site,
    /// the clusters do not cover every site, or K exceeds max_cluster_size.
    ClusterCover(int n_sites, Alphabet alphabet, std::vector<LocalCluster> clusters);

    [[nodiscard]] int                              n_sites() const { return n_sites_; }
    [[nodiscard]] Alphabet                         alphabet() const { return alphabet_; }
    [[nodiscard]] const std::vector<LocalCluster> &clusters() const { return clusters_; }
    [[nodiscard]] int                              K() const { return k_; }

  private:
    int                       n_sites_;
    Alphabet                  alphabet_;
    std::vector<LocalCluster> clusters_;
    int                       k_ = 0;
};

/// Product of the cluster-table lookups.
cplx qp_amplitude(const ClusterCover &cover, const SpinConfiguration &config);

/// Dense (unnormalized) state of the cover.
DenseState materialize(const ClusterCover &cover);

/// Periodic 1D cluster state: cluster k on (k-1, k, k+1) mod n with
/// Phi_k = 2 cos((pi + 2 pi s_{k-1} + 3 pi s_k + pi s_{k+1}) / 4), s = +-1.
ClusterCover build_cluster_state_1d(int n);

/// The n stabilizers Z_{k-1} X_k Z_{k+1} of the periodic cluster state.
std::vector<PauliString> cluster_state_stabilizers(int n);

/// Graph state with one 2-site cluster (1, 1, 1, -1)/sqrt(2) per edge, ZeroOne alphabet.
/// Isolated vertices get a constant 1-site cluster.
ClusterCover build_graph_state(const std::vector<std::pair<int, int>> &edges, int n);

/// The graph-state stabilizers X_v prod_{u ~ v} Z_u.
std::vector<PauliString> graph_state_stabilizers(const std::vector<std::pair<int, int>> &edges, int n);

struct StabilizerCheck {
    std::string label;
    cplx        expectation; // <psi|P|psi>
    double      fidelity = 0.0; // |<psi|P|psi>|
    bool        pass     = false;
};

struct StabilizerReport {
    bool                         all_pass = true;
    std::vector<StabilizerCheck> checks;
};

/// A stabilizer passes when Re<psi|P|psi> >= 1 - tol, i.e. P|psi> = |psi>.
/// Requires a normalized state.
StabilizerReport verify_stabilizers(const DenseState &state, const std::vector<PauliString> &stabilizers,
                                    double tol = 1e-9);

struct ClusterClassification {
    std::vector<int> internal;       // cluster indices inside A
    std::vector<int> external;       // inside A^c
    std::vector<int> boundary;       // straddling the cut
    std::vector<int> boundary_sites; // B, sorted
};

ClusterClassification classify_clusters(const ClusterCover &cover, const Bipartition &part);

struct RankBound {
    int                          log2 = 0;  // |B|
    std::optional<std::uint64_t> value;     // 2^|B| when it fits in 63 bits
};

/// Schmidt-rank ceiling 2^|B| from the boundary clusters.
RankBound rank_bound(const ClusterCover &cover, const Bipartition &part);

} // namespace qnnent
