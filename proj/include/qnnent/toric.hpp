#pragma once

#include "qnnent/geometry.hpp"
#include "qnnent/quasi_product.hpp"
#include "qnnent/state.hpp"

#include <array>
#include <cstdint>
#include <vector>

// Toric code on the edges of an L x L torus. Edge ids follow LatticeGeometry::torus_edges:
// edge (x, y, dir) -> 2 * (y * L + x) + dir. Bit 1 on an edge is a |1> spin (s = -1).
namespace qnnent::toric {

[[nodiscard]] int edge_id(int L, int x, int y, EdgeDir dir);

/// The four edges incident to vertex (x, y).
[[nodiscard]] std::array<int, 4> star(int L, int x, int y);
/// The four edges bounding the face whose lower-left corner is vertex (x, y).
[[nodiscard]] std::array<int, 4> plaquette(int L, int x, int y);

/// A_v = prod_{star} X, one per vertex.
std::vector<PauliString> vertex_stabilizers(int L);
/// B_p = prod_{plaquette} Z, one per face.
std::vector<PauliString> plaquette_stabilizers(int L);
/// Vertex stabilizers followed by plaquette stabilizers.
std::vector<PauliString> stabilizers(int L);

/// Logical sector: winding parities of the closed dual-loop configuration.
struct Sector {
    int  wx = 0; // parity of occupied vertical edges on the column x = 0
    int  wy = 0; // parity of occupied horizontal edges on the row y = 0
    bool operator==(const Sector &) const = default;
};

Sector parse_sector(const std::string &text); // "00", "01", "10", "11"

/// True iff every plaquette holds an even number of occupied edges.
[[nodiscard]] bool   is_closed_dual_loop(int L, std::uint64_t bits);
[[nodiscard]] Sector winding(int L, std::uint64_t bits);

/// Z strings whose eigenvalues (-1)^wx and (-1)^wy label the sectors.
std::vector<PauliString> logical_z(int L);

/// Quasi-product cover with one cluster per vertex, Phi_v = cos(pi/2 sum s), and one
/// per plaquette, Phi_p = cos(pi/4 sum s), PlusMinus alphabet.
ClusterCover build_toric_cover(int L);

/// Normalized dense state of build_toric_cover: the equal-weight superposition of
/// every closed dual-loop configuration, i.e. the sum of the four sector states.
DenseState toric_quasi_product_state(int L);

/// Normalized sector state: equal amplitudes over closed dual loops with winding
/// parities `sector`, by direct enumeration of all 2^(2L^2) edge configurations.
DenseState build_toric_ground(int L, Sector sector);

/// Three fan-shaped regions around vertex (1, 1) whose union is a disc of ten edges.
struct FanPartition {
    std::vector<int> a, b, c;
};
FanPartition fan_partition(int L);

} // namespace qnnent::toric
