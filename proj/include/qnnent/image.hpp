#pragma once

#include "qnnent/geometry.hpp"
#include "qnnent/state.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

// Binary images on the edges of an L x L torus, using the same edge ids as the
// toric code: (x, y, dir) -> 2 * (y * L + x) + dir. Pixel value 1 is black.
namespace qnnent::image {

inline constexpr int max_pixels = 63;

/// A Z2 one-chain: one bit per edge.
struct TorusImage {
    int           L     = 0;
    std::uint64_t edges = 0;

    TorusImage() = default;
    TorusImage(int L, std::uint64_t edges);

    [[nodiscard]] int  n_edges() const { return 2 * L * L; }
    [[nodiscard]] bool edge(int x, int y, EdgeDir dir) const;
    void               set(int x, int y, EdgeDir dir, bool value);
};

/// A Z2 zero-chain: one bit per vertex, vertex (x, y) at bit y * L + x.
struct ZeroChain {
    int           L        = 0;
    std::uint64_t vertices = 0;

    [[nodiscard]] bool trivial() const { return vertices == 0; }
    [[nodiscard]] bool at(int x, int y) const { return (vertices >> (y * L + x)) & 1U; }
};

/// Each vertex gets the parity of its occupied incident edges.
ZeroChain boundary_map(const TorusImage &img);
bool      is_cycle(const TorusImage &img);

/// An explicit set of images over n_pixels bits. Members are distinct and sorted.
struct TargetSet {
    int                        n_pixels = 0;
    int                        L        = 0; // 0 when the pixels carry no torus layout
    std::string                provenance;   // "cycles(L)", "random(seed,count)", "custom"
    std::vector<std::uint64_t> members;

    [[nodiscard]] bool contains(std::uint64_t bits) const;
    [[nodiscard]] std::size_t size() const { return members.size(); }
};

/// Sorts, rejects duplicates and members wider than n_pixels.
TargetSet make_target_set(int n_pixels, std::vector<std::uint64_t> members, std::string provenance, int L = 0);

/// All one-chains with trivial boundary, by brute force over 2^(2L^2) images.
TargetSet enumerate_cycles(int L);

/// Indicator of membership; InputError when the pixel counts differ.
int classify(const TorusImage &img, const TargetSet &t);

/// Equal-weight superposition of the members; DegenerateStateError when empty.
DenseState target_state(const TargetSet &t);

/// log2 of the rank ceiling (B + 1) * Area(A).
int smooth_rank_bound(const LatticeGeometry &g, const Bipartition &region, int B);

/// Uniform sample of `count` distinct images without replacement (Floyd's algorithm).
TargetSet random_target_set(int n_pixels, std::uint64_t count, std::uint64_t seed);

/// Relabels image edges as toric-code edges so that the cycle condition at vertex
/// (x, y) becomes the plaquette condition at face (x, y):
/// h(x, y) -> v(x+1, y), v(x, y) -> h(x, y+1).
std::uint64_t to_toric_edges(int L, std::uint64_t image_bits);
DenseState    to_toric_state(int L, const DenseState &image_state);

/// Header line {"L", "n_pixels", "provenance"} then one hex bitstring per member
/// (most significant digit first, pixel i is bit i).
void      write_image_set(std::ostream &os, const TargetSet &t);
TargetSet read_image_set(std::istream &is);

} // namespace qnnent::image
