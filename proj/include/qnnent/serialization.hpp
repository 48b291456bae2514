#pragma once

#include "qnnent/geometry.hpp"
#include "qnnent/networks.hpp"
#include "qnnent/quasi_product.hpp"

#include <optional>
#include <string>

namespace qnnent {

/// Contents of a network-spec file: exactly one of `network` / `cover` is set.
struct SpecDocument {
    std::optional<NetworkSpec>     network;
    std::optional<ClusterCover>    cover;
    std::optional<LatticeGeometry> lattice;
    std::optional<double>          eps; // locality radius for the build report

    [[nodiscard]] int n_sites() const;
    /// Declared lattice, or a periodic chain over the visible sites.
    [[nodiscard]] LatticeGeometry geometry() const;
};

/// Parses a spec document (see docs/network-spec.md). Structural problems raise
/// SchemaError carrying a JSON path such as "$.weights[3][1]"; malformed JSON
/// raises SchemaError at "$".
SpecDocument parse_spec(const std::string &text);
SpecDocument load_spec(const std::string &path);

std::string dump_spec(const SpecDocument &doc);
std::string dump_spec(const NetworkSpec &spec, const std::optional<LatticeGeometry> &lattice = std::nullopt);
std::string dump_cover(const ClusterCover &cover, const std::optional<LatticeGeometry> &lattice = std::nullopt);

} // namespace qnnent
