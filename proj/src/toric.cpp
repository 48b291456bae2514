#include "qnnent/toric.hpp"

#include "qnnent/errors.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace qnnent::toric {

namespace {
void check_L(int L) {
    if(L < 2) throw InputError("toric code needs L >= 2");
    limits::require_dense(2 * L * L, "toric code");
}
int wrap(int v, int L) { return ((v % L) + L) % L; }

std::uint64_t mask_of(const std::array<int, 4> &edges) {
    std::uint64_t m = 0;
    for(int e : edges) m |= std::uint64_t{1} << e;
    return m;
}
} // namespace

int edge_id(int L, int x, int y, EdgeDir dir) { return 2 * (wrap(y, L) * L + wrap(x, L)) + static_cast<int>(dir); }

std::array<int, 4> star(int L, int x, int y) {
    return {edge_id(L, x, y, EdgeDir::Horizontal), edge_id(L, x - 1, y, EdgeDir::Horizontal),
            edge_id(L, x, y, EdgeDir::Vertical), edge_id(L, x, y - 1, EdgeDir::Vertical)};
}

std::array<int, 4> plaquette(int L, int x, int y) {
    return {edge_id(L, x, y, EdgeDir::Horizontal), edge_id(L, x, y + 1, EdgeDir::Horizontal),
            edge_id(L, x, y, EdgeDir::Vertical), edge_id(L, x + 1, y, EdgeDir::Vertical)};
}

std::vector<PauliString> vertex_stabilizers(int L) {
    std::vector<PauliString> out;
    for(int y = 0; y < L; ++y)
        for(int x = 0; x < L; ++x) {
            PauliString ps;
            for(int e : star(L, x, y)) ps.push_back({e, Pauli::X});
            out.push_back(std::move(ps));
        }
    return out;
}

std::vector<PauliString> plaquette_stabilizers(int L) {
    std::vector<PauliString> out;
    for(int y = 0; y < L; ++y)
        for(int x = 0; x < L; ++x) {
            PauliString ps;
            for(int e : plaquette(L, x, y)) ps.push_back({e, Pauli::Z});
            out.push_back(std::move(ps));
        }
    return out;
}

std::vector<PauliString> stabilizers(int L) {
    auto out = vertex_stabilizers(L);
    auto p   = plaquette_stabilizers(L);
    out.insert(out.end(), p.begin(), p.end());
    return out;
}

Sector parse_sector(const std::string &text) {
    if(text.size() != 2 || (text[0] != '0' && text[0] != '1') || (text[1] != '0' && text[1] != '1'))
        throw InputError("sector must be one of 00, 01, 10, 11");
    return {text[0] - '0', text[1] - '0'};
}

bool is_closed_dual_loop(int L, std::uint64_t bits) {
    for(int y = 0; y < L; ++y)
        for(int x = 0; x < L; ++x)
            if(std::popcount(bits & mask_of(plaquette(L, x, y))) & 1) return false;
    return true;
}

Sector winding(int L, std::uint64_t bits) {
    int wx = 0, wy = 0;
    for(int y = 0; y < L; ++y) wx ^= static_cast<int>((bits >> edge_id(L, 0, y, EdgeDir::Vertical)) & 1U);
    for(int x = 0; x < L; ++x) wy ^= static_cast<int>((bits >> edge_id(L, x, 0, EdgeDir::Horizontal)) & 1U);
    return {wx, wy};
}

std::vector<PauliString> logical_z(int L) {
    PauliString column, row;
    for(int y = 0; y < L; ++y) column.push_back({edge_id(L, 0, y, EdgeDir::Vertical), Pauli::Z});
    for(int x = 0; x < L; ++x) row.push_back({edge_id(L, x, 0, EdgeDir::Horizontal), Pauli::Z});
    return {column, row};
}

ClusterCover build_toric_cover(int L) {
    if(L < 2) throw InputError("toric code needs L >= 2");
    using std::numbers::pi;
    std::vector<LocalCluster> clusters;
    auto sum = [](std::span<const int> s) { return static_cast<double>(s[0] + s[1] + s[2] + s[3]); };
    for(int y = 0; y < L; ++y)
        for(int x = 0; x < L; ++x) {
            auto e = star(L, x, y);
            clusters.push_back(tabulate_cluster({e.begin(), e.end()}, Alphabet::PlusMinus,
                                                [&](std::span<const int> s) { return cplx{std::cos(pi / 2.0 * sum(s)), 0.0}; }));
        }
    for(int y = 0; y < L; ++y)
        for(int x = 0; x < L; ++x) {
            auto e = plaquette(L, x, y);
            clusters.push_back(tabulate_cluster({e.begin(), e.end()}, Alphabet::PlusMinus,
                                                [&](std::span<const int> s) { return cplx{std::cos(pi / 4.0 * sum(s)), 0.0}; }));
        }
    return {2 * L * L, Alphabet::PlusMinus, std::move(clusters)};
}

DenseState toric_quasi_product_state(int L) {
    check_L(L);
    return normalize(materialize(build_toric_cover(L)));
}

DenseState build_toric_ground(int L, Sector sector) {
    check_L(L);
    if((sector.wx != 0 && sector.wx != 1) || (sector.wy != 0 && sector.wy != 1)) throw InputError("sector parities must be 0 or 1");
    int               n = 2 * L * L;
    std::vector<cplx> amps(std::uint64_t{1} << n);
    for(std::uint64_t bits = 0; bits < amps.size(); ++bits)
        if(is_closed_dual_loop(L, bits) && winding(L, bits) == sector) amps[bits] = 1.0;
    return normalize(DenseState(n, std::move(amps)));
}

FanPartition fan_partition(int L) {
    if(L < 3) throw InputError("fan partition needs L >= 3");
    using enum EdgeDir;
    auto e = [L](int x, int y, EdgeDir d) { return edge_id(L, x, y, d); };
    // Sectors ordered by angle around vertex (1, 1); each holds one spoke of its star.
    return {{e(1, 1, Horizontal), e(2, 1, Vertical), e(1, 2, Horizontal)},
            {e(1, 1, Vertical), e(0, 2, Horizontal), e(0, 1, Vertical)},
            {e(0, 1, Horizontal), e(0, 0, Vertical), e(0, 0, Horizontal), e(1, 0, Vertical)}};
}

} // namespace qnnent::toric
