#pragma once

#include "qnnent/geometry.hpp"
#include "qnnent/networks.hpp"
#include "qnnent/quasi_product.hpp"
#include "qnnent/state.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qnnent {

/// A bipartition together with its lattice bookkeeping.
struct Region {
    std::string label;
    Bipartition part;
    int         area   = 0; // sites of A with a neighbour (distance <= 1) in A^c
    int         volume = 0; // |A|
};

enum class RegionKind { Contiguous, Rectangle, Connected, Custom };

struct RegionFamily {
    RegionKind kind = RegionKind::Contiguous;
    // Contiguous: arcs starting at `start` with lengths in [min_length, max_length]
    // (max_length < 0 means N - 1).
    int start      = 0;
    int min_length = 1;
    int max_length = -1;
    // Rectangle: every placement of a width x height box of vertices.
    int width  = 0;
    int height = 0;
    // Connected: lattices with more than `exhaustive_limit` sites are sampled.
    int           exhaustive_limit = 12;
    int           samples          = 200;
    std::uint64_t seed             = 0;
    // Custom: explicit site lists.
    std::vector<std::vector<int>> custom;
};

/// Parses "contiguous", "connected" or "rect:WxH".
RegionFamily parse_region_family(const std::string &text);

/// Deterministic region list, sorted by (volume, sites) and deduplicated.
/// Throws InputError for empty or full regions and out-of-lattice parameters.
std::vector<Region> make_regions(const LatticeGeometry &g, const RegionFamily &family);

Region make_region(const LatticeGeometry &g, std::vector<int> sites, std::string label = {});
int    region_area(const LatticeGeometry &g, const Bipartition &part);

/// Where the per-region Schmidt-rank ceiling comes from.
struct BoundContext {
    enum class Kind { Cover, Dbm, Smooth };
    Kind                        kind = Kind::Cover;
    std::optional<ClusterCover> cover;
    std::optional<DbmSpec>      dbm;
    int                         smooth_range = 1; // B in (B + 1) * Area

    static BoundContext from_cover(ClusterCover c);
    static BoundContext from_dbm(DbmSpec d);
    static BoundContext smooth(int B);

    /// log2 of the rank ceiling for one region.
    [[nodiscard]] int bound_log2(const Region &region) const;
};

struct EntropyRow {
    std::string        region;
    int                area   = 0;
    int                volume = 0;
    double             alpha  = 1.0;
    double             entropy_nats = 0.0;
    int                rank         = 0;
    std::optional<int> rank_bound_log2;
    bool               bound_ok      = true;
    bool               bound_vacuous = false;
};

struct EntropyReport {
    int                     n_sites = 0;
    std::vector<EntropyRow> rows;
};

/// One row per (region, alpha). Bound columns are filled when `ctx` is given.
/// Parallel over regions; output order and values do not depend on the thread count.
EntropyReport entropy_sweep(const DenseState &state, const std::vector<Region> &regions, const std::vector<double> &alphas,
                            const BoundContext *ctx = nullptr);

struct AreaLawRow {
    std::string region;
    int         area       = 0;
    int         bound_log2 = 0;
    double      ratio      = 0.0; // |B| / Area
    double      max_entropy_nats = 0.0;
    int         rank     = 0;
    bool        pass     = true;
    bool        vacuous  = false;
};

struct AreaLawReport {
    std::vector<AreaLawRow> rows;
    int                     violations = 0;
    double                  max_ratio  = 0.0; // empirical R over non-vacuous rows
    [[nodiscard]] bool      pass() const { return violations == 0; }
};

/// Checks rank <= 2^bound and S_alpha <= bound * ln 2 for every region and alpha.
/// A missing context is a configuration error.
AreaLawReport area_law_check(const DenseState &state, const std::optional<BoundContext> &ctx,
                             const std::vector<Region> &regions, const std::vector<double> &alphas);

struct TopologicalEntropy {
    double value            = 0.0; // S(AB) + S(CB) + S(AC) - S(A) - S(B) - S(C) - S(D)
    double kitaev_preskill  = 0.0; // -value
    double s_a = 0, s_b = 0, s_c = 0, s_ab = 0, s_bc = 0, s_ac = 0, s_abc = 0;
};

/// Seven-term combination in nats. A, B, C must be nonempty and pairwise disjoint,
/// and D = A u B u C a proper subset of the sites.
TopologicalEntropy topological_entropy(const DenseState &state, const std::vector<int> &a, const std::vector<int> &b,
                                       const std::vector<int> &c, double alpha = 1.0);

/// "%.12g"
std::string format_real(double x);

void write_csv(std::ostream &os, const EntropyReport &report);
void write_json(std::ostream &os, const EntropyReport &report);

} // namespace qnnent
