#include "qnnent/quasi_product.hpp"

#include "qnnent/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qnnent {

cplx LocalCluster::lookup(std::uint64_t config_bits) const {
    std::uint64_t local = 0;
    for(std::size_t k = 0; k < sites.size(); ++k) local |= ((config_bits >> sites[k]) & 1U) << k;
    return table[local];
}

LocalCluster tabulate_cluster(std::vector<int> sites, Alphabet alphabet,
                              const std::function<cplx(std::span<const int>)> &f) {
    LocalCluster c{std::move(sites), {}};
    c.table.resize(std::size_t{1} << c.sites.size());
    std::vector<int> values(c.sites.size());
    for(std::size_t local = 0; local < c.table.size(); ++local) {
        for(std::size_t k = 0; k < values.size(); ++k) values[k] = alphabet_value((local >> k) & 1U, alphabet);
        c.table[local] = f(values);
    }
    return c;
}

ClusterCover::ClusterCover(int n_sites, Alphabet alphabet, std::vector<LocalCluster> clusters)
    : n_sites_(n_sites), alphabet_(alphabet), clusters_(std::move(clusters)) {
    if(n_sites < 1 || n_sites > 63) throw InputError("cover site count out of range");
    std::uint64_t covered = 0;
    for(std::size_t i = 0; i < clusters_.size(); ++i) {
        const auto &c = clusters_[i];
        if(c.sites.empty()) throw InputError("cluster " + std::to_string(i) + " is empty");
        if(c.sites.size() > static_cast<std::size_t>(max_cluster_size))
            throw InputError("cluster " + std::to_string(i) + " exceeds the cluster size bound");
        if(c.table.size() != (std::size_t{1} << c.sites.size()))
            throw InputError("cluster " + std::to_string(i) + " table length must be 2^|sites|");
        std::uint64_t mine = 0;
        for(int s : c.sites) {
            if(s < 0 || s >= n_sites) throw InputError("cluster " + std::to_string(i) + " references site " + std::to_string(s));
            std::uint64_t bit = std::uint64_t{1} << s;
            if(mine & bit) throw InputError("cluster " + std::to_string(i) + " repeats site " + std::to_string(s));
            mine |= bit;
        }
        covered |= mine;
        k_ = std::max(k_, static_cast<int>(c.sites.size()));
    }
    std::uint64_t all = n_sites == 63 ? ~std::uint64_t{0} >> 1 : (std::uint64_t{1} << n_sites) - 1;
    if(covered != all) throw InputError("clusters do not cover every site");
}

cplx qp_amplitude(const ClusterCover &cover, const SpinConfiguration &config) {
    if(config.n_sites() != cover.n_sites()) throw InputError("qp_amplitude: site count mismatch");
    if(config.alphabet() != cover.alphabet()) throw InputError("qp_amplitude: alphabet mismatch");
    cplx prod{1.0, 0.0};
    for(const auto &c : cover.clusters()) prod *= c.lookup(config.index());
    return prod;
}

DenseState materialize(const ClusterCover &cover) {
    return evaluate_all([&cover](const SpinConfiguration &c) { return qp_amplitude(cover, c); }, cover.n_sites(),
                        cover.alphabet());
}

ClusterCover build_cluster_state_1d(int n) {
    if(n < 3) throw InputError("cluster state needs n >= 3");
    using std::numbers::pi;
    std::vector<LocalCluster> clusters;
    clusters.reserve(static_cast<std::size_t>(n));
    for(int k = 0; k < n; ++k) {
        std::vector<int> sites = {(k - 1 + n) % n, k, (k + 1) % n};
        clusters.push_back(tabulate_cluster(std::move(sites), Alphabet::PlusMinus, [](std::span<const int> s) {
            return cplx{2.0 * std::cos((pi + 2.0 * pi * s[0] + 3.0 * pi * s[1] + pi * s[2]) / 4.0), 0.0};
        }));
    }
    return {n, Alphabet::PlusMinus, std::move(clusters)};
}

std::vector<PauliString> cluster_state_stabilizers(int n) {
    if(n < 3) throw InputError("cluster state needs n >= 3");
    std::vector<PauliString> out;
    for(int k = 0; k < n; ++k)
        out.push_back({{(k - 1 + n) % n, Pauli::Z}, {k, Pauli::X}, {(k + 1) % n, Pauli::Z}});
    return out;
}

namespace {
void check_graph(const std::vector<std::pair<int, int>> &edges, int n) {
    if(n < 1) throw InputError("graph needs at least one vertex");
    for(auto [i, j] : edges) {
        if(i < 0 || j < 0 || i >= n || j >= n) throw InputError("edge references an invalid vertex");
        if(i == j) throw InputError("self-loop on vertex " + std::to_string(i));
    }
}
} // namespace

ClusterCover build_graph_state(const std::vector<std::pair<int, int>> &edges, int n) {
    check_graph(edges, n);
    const double              h = 1.0 / std::numbers::sqrt2;
    std::vector<LocalCluster> clusters;
    std::vector<bool>         touched(static_cast<std::size_t>(n), false);
    for(auto [i, j] : edges) {
        clusters.push_back({{i, j}, {h, h, h, -h}});
        touched[static_cast<std::size_t>(i)] = touched[static_cast<std::size_t>(j)] = true;
    }
    for(int v = 0; v < n; ++v)
        if(!touched[static_cast<std::size_t>(v)]) clusters.push_back({{v}, {1.0, 1.0}});
    return {n, Alphabet::ZeroOne, std::move(clusters)};
}

std::vector<PauliString> graph_state_stabilizers(const std::vector<std::pair<int, int>> &edges, int n) {
    check_graph(edges, n);
    std::vector<int> zcount(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
    for(auto [i, j] : edges) {
        ++zcount[static_cast<std::size_t>(i * n + j)];
        ++zcount[static_cast<std::size_t>(j * n + i)];
    }
    std::vector<PauliString> out;
    for(int v = 0; v < n; ++v) {
        PauliString ps{{v, Pauli::X}};
        for(int u = 0; u < n; ++u)
            if(zcount[static_cast<std::size_t>(v * n + u)] % 2 == 1) ps.push_back({u, Pauli::Z});
        out.push_back(std::move(ps));
    }
    return out;
}

StabilizerReport verify_stabilizers(const DenseState &state, const std::vector<PauliString> &stabilizers, double tol) {
    if(!state.normalized()) throw PreconditionError("verify_stabilizers: state must be normalized");
    StabilizerReport report;
    for(const auto &p : stabilizers) {
        cplx            e = inner_product(state, apply_pauli_string(state, p));
        StabilizerCheck check{pauli_string_label(p), e, std::abs(e), e.real() >= 1.0 - tol};
        report.all_pass = report.all_pass && check.pass;
        report.checks.push_back(std::move(check));
    }
    return report;
}

ClusterClassification classify_clusters(const ClusterCover &cover, const Bipartition &part) {
    if(cover.n_sites() != part.n_sites()) throw InputError("classify_clusters: site count mismatch");
    ClusterClassification out;
    std::uint64_t         bsites = 0;
    for(std::size_t i = 0; i < cover.clusters().size(); ++i) {
        bool in_a = false, in_ac = false;
        for(int s : cover.clusters()[i].sites) (part.contains(s) ? in_a : in_ac) = true;
        int idx = static_cast<int>(i);
        if(in_a && in_ac) {
            out.boundary.push_back(idx);
            for(int s : cover.clusters()[i].sites) bsites |= std::uint64_t{1} << s;
        } else if(in_a) {
            out.internal.push_back(idx);
        } else {
            out.external.push_back(idx);
        }
    }
    for(int s = 0; s < cover.n_sites(); ++s)
        if((bsites >> s) & 1U) out.boundary_sites.push_back(s);
    return out;
}

RankBound rank_bound(const ClusterCover &cover, const Bipartition &part) {
    RankBound rb;
    rb.log2 = static_cast<int>(classify_clusters(cover, part).boundary_sites.size());
    if(rb.log2 < 63) rb.value = std::uint64_t{1} << rb.log2;
    return rb;
}

} // namespace qnnent
