#include "qnnent/geometry.hpp"

#include "qnnent/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace qnnent {

LatticeGeometry::LatticeGeometry(LatticeKind kind, std::array<int, 2> dims, Boundary boundary)
    : kind_(kind), dims_(dims), boundary_(boundary),
      n_sites_(kind == LatticeKind::Edge ? 2 * dims[0] * dims[1] : dims[0] * dims[1]) {}

LatticeGeometry LatticeGeometry::chain(int n, Boundary boundary) {
    if(n < 1) throw InputError("chain length must be positive");
    return {LatticeKind::Vertex, {n, 1}, boundary};
}

LatticeGeometry LatticeGeometry::square(int lx, int ly, Boundary boundary) {
    if(lx < 1 || ly < 1) throw InputError("square lattice dimensions must be positive");
    return {LatticeKind::Vertex, {lx, ly}, boundary};
}

LatticeGeometry LatticeGeometry::torus_edges(int L) {
    if(L < 1) throw InputError("torus size must be positive");
    return {LatticeKind::Edge, {L, L}, Boundary::Periodic};
}

void LatticeGeometry::check_site(int site) const {
    if(site < 0 || site >= n_sites_)
        throw InputError("unknown site id " + std::to_string(site) + " (lattice has " + std::to_string(n_sites_) + " sites)");
}

SiteCoord LatticeGeometry::coord(int site) const {
    check_site(site);
    if(kind_ == LatticeKind::Edge) {
        int cell = site / 2;
        return {cell % dims_[0], cell / dims_[0], static_cast<EdgeDir>(site % 2)};
    }
    return {site % dims_[0], site / dims_[0], EdgeDir::Horizontal};
}

int LatticeGeometry::site_at(SiteCoord c) const {
    int x = c.x, y = c.y;
    if(boundary_ == Boundary::Periodic) {
        x = ((x % dims_[0]) + dims_[0]) % dims_[0];
        y = ((y % dims_[1]) + dims_[1]) % dims_[1];
    }
    if(x < 0 || x >= dims_[0] || y < 0 || y >= dims_[1]) throw InputError("coordinate outside open lattice");
    if(kind_ == LatticeKind::Edge) return 2 * (y * dims_[0] + x) + static_cast<int>(c.dir);
    return y * dims_[0] + x;
}

std::array<int, 2> LatticeGeometry::doubled_coord(int site) const {
    SiteCoord c = coord(site);
    if(kind_ == LatticeKind::Edge) {
        if(c.dir == EdgeDir::Horizontal) return {2 * c.x + 1, 2 * c.y};
        return {2 * c.x, 2 * c.y + 1};
    }
    return {2 * c.x, 2 * c.y};
}

int LatticeGeometry::doubled_distance(int a, int b) const {
    auto ca = doubled_coord(a);
    auto cb = doubled_coord(b);
    int  d  = 0;
    for(int k = 0; k < 2; ++k) {
        int delta = std::abs(ca[k] - cb[k]);
        if(boundary_ == Boundary::Periodic) {
            int period = 2 * dims_[k];
            delta %= period;
            delta = std::min(delta, period - delta);
        }
        d = std::max(d, delta);
    }
    return d;
}

double LatticeGeometry::distance(int a, int b) const { return doubled_distance(a, b) / 2.0; }

Neighborhood LatticeGeometry::epsilon_ball(int center, double eps) const {
    check_site(center);
    if(!(eps >= 0.0)) throw InputError("epsilon must be non-negative");
    Neighborhood nb{center, eps, {}};
    for(int s = 0; s < n_sites_; ++s)
        if(distance(center, s) <= eps) nb.members.push_back(s);
    return nb;
}

std::vector<int> LatticeGeometry::neighbors(int site) const {
    check_site(site);
    std::vector<int> out;
    for(int s = 0; s < n_sites_; ++s)
        if(s != site && doubled_distance(site, s) <= 2) out.push_back(s);
    return out;
}

std::string LatticeGeometry::describe() const {
    std::ostringstream os;
    const char        *bc = boundary_ == Boundary::Periodic ? "periodic" : "open";
    if(kind_ == LatticeKind::Edge)
        os << "torus-edges " << dims_[0] << "x" << dims_[1];
    else if(dims_[1] == 1)
        os << "chain " << dims_[0] << " " << bc;
    else
        os << "square " << dims_[0] << "x" << dims_[1] << " " << bc;
    return os.str();
}

LocalityReport validate_k_local(const LayeredConnectivity &net, const LatticeGeometry &g, double eps) {
    if(!(eps >= 0.0)) throw InputError("epsilon must be non-negative");
    auto position = [&](int layer, int neuron) -> int {
        const auto &pos = net.positions.at(static_cast<std::size_t>(layer));
        if(neuron < 0 || static_cast<std::size_t>(neuron) >= pos.size())
            throw InputError("neuron index out of range in layer " + net.layer_names.at(static_cast<std::size_t>(layer)));
        if(!pos[static_cast<std::size_t>(neuron)])
            throw ConfigError("neuron " + std::to_string(neuron) + " of layer " +
                              net.layer_names.at(static_cast<std::size_t>(layer)) + " has no lattice position");
        return *pos[static_cast<std::size_t>(neuron)];
    };
    for(std::size_t layer = 1; layer < net.positions.size(); ++layer)
        for(std::size_t j = 0; j < net.positions[layer].size(); ++j) (void) position(static_cast<int>(layer), static_cast<int>(j));

    LocalityReport report;
    for(const auto &link : net.links) {
        std::vector<int> upper_count(net.positions.at(static_cast<std::size_t>(link.upper)).size(), 0);
        std::vector<int> lower_count(net.positions.at(static_cast<std::size_t>(link.lower)).size(), 0);
        for(auto [lo, up] : link.edges) {
            double d = g.distance(position(link.lower, lo), position(link.upper, up));
            if(d > eps) {
                report.is_local = false;
                report.violations.push_back({net.layer_names[static_cast<std::size_t>(link.lower)],
                                             net.layer_names[static_cast<std::size_t>(link.upper)], lo, up, d});
            }
            ++upper_count[static_cast<std::size_t>(up)];
            ++lower_count[static_cast<std::size_t>(lo)];
        }
        for(int c : upper_count) report.K = std::max(report.K, c);
        if(link.lower != 0)
            for(int c : lower_count) report.K = std::max(report.K, c);
    }
    return report;
}

} // namespace qnnent
