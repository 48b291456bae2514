#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qnnent {

enum class Boundary { Open, Periodic };

/// Vertex lattices carry sites on lattice points; edge lattices carry them on the
/// bonds of an L x L torus (toric code, torus images).
enum class LatticeKind { Vertex, Edge };

enum class EdgeDir { Horizontal = 0, Vertical = 1 };

/// Integer lattice coordinate. `dir` is only meaningful on edge lattices.
struct SiteCoord {
    int     x   = 0;
    int     y   = 0;
    EdgeDir dir = EdgeDir::Horizontal;
    bool    operator==(const SiteCoord &) const = default;
};

struct Neighborhood {
    int              center = 0;
    double           radius = 0.0;
    std::vector<int> members; // sorted
};

/// Immutable 1D/2D square-lattice geometry with the L-infinity metric.
///
/// Site ids are dense 0..N-1. On vertex lattices site = y * lx + x. On the edge
/// lattice of an L x L torus, edge (x, y, dir) has id 2 * (y * L + x) + dir, where a
/// horizontal edge joins vertex (x, y) to (x+1, y) and a vertical edge joins (x, y)
/// to (x, y+1), all mod L. Distances are computed on doubled integer coordinates
/// (edge midpoints sit on the half-integer grid) and halved on return, so they are exact.
class LatticeGeometry {
  public:
    static LatticeGeometry chain(int n, Boundary boundary);
    static LatticeGeometry square(int lx, int ly, Boundary boundary);
    static LatticeGeometry torus_edges(int L);

    [[nodiscard]] int                size() const { return n_sites_; }
    [[nodiscard]] int                dimensionality() const { return dims_[1] > 1 || kind_ == LatticeKind::Edge ? 2 : 1; }
    [[nodiscard]] Boundary           boundary() const { return boundary_; }
    [[nodiscard]] LatticeKind        kind() const { return kind_; }
    [[nodiscard]] std::array<int, 2> dims() const { return dims_; }

    [[nodiscard]] SiteCoord coord(int site) const;
    [[nodiscard]] int       site_at(SiteCoord c) const;

    /// L-infinity distance, wrapped on periodic lattices.
    [[nodiscard]] double distance(int a, int b) const;
    /// 2 * distance(a, b), exact integer.
    [[nodiscard]] int doubled_distance(int a, int b) const;

    [[nodiscard]] Neighborhood epsilon_ball(int center, double eps) const;
    /// Sites at distance <= 1 other than `site` (the lattice adjacency used for
    /// region connectivity and boundary counting).
    [[nodiscard]] std::vector<int> neighbors(int site) const;

    [[nodiscard]] std::string describe() const;

    bool operator==(const LatticeGeometry &) const = default;

  private:
    LatticeGeometry(LatticeKind kind, std::array<int, 2> dims, Boundary boundary);
    void                             check_site(int site) const;
    [[nodiscard]] std::array<int, 2> doubled_coord(int site) const;

    LatticeKind        kind_;
    std::array<int, 2> dims_;
    Boundary           boundary_;
    int                n_sites_;
};

/// Connectivity of a layered network, reduced to what locality checks need.
/// Layer 0 is the physical layer whose neuron i sits on site i.
struct LayeredConnectivity {
    struct Link {
        int                              lower = 0; // layer index
        int                              upper = 0;
        std::vector<std::pair<int, int>> edges;     // (lower neuron, upper neuron), nonzero weights only
    };
    std::vector<std::string>                     layer_names;
    std::vector<std::vector<std::optional<int>>> positions; // site id per neuron, per layer
    std::vector<Link>                            links;
};

struct LocalityViolation {
    std::string lower_layer;
    std::string upper_layer;
    int         lower    = 0;
    int         upper    = 0;
    double      distance = 0.0;
};

struct LocalityReport {
    bool                           is_local = true;
    int                            K        = 0;
    std::vector<LocalityViolation> violations;
};

/// Checks that every connection spans at most `eps` and reports K, the largest
/// number of connections any non-physical neuron has into one adjacent layer.
/// Throws ConfigError if a non-physical neuron has no position.
LocalityReport validate_k_local(const LayeredConnectivity &net, const LatticeGeometry &g, double eps);

} // namespace qnnent
