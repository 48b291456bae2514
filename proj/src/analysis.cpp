#include "qnnent/analysis.hpp"

#include "qnnent/errors.hpp"
#include "qnnent/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <bit>
#include <ostream>
#include <random>
#include <set>

namespace qnnent {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

std::string join_sites(const std::vector<int> &sites) {
    std::string out;
    for(int s : sites) {
        if(!out.empty()) out += '.';
        out += std::to_string(s);
    }
    return out;
}

int parse_positive(const std::string &text, const std::string &what) {
    std::size_t pos = 0;
    int         v   = 0;
    try {
        v = std::stoi(text, &pos);
    } catch(const std::exception &) {
        throw InputError("bad " + what + " '" + text + "'");
    }
    if(pos != text.size() || v < 1) throw InputError("bad " + what + " '" + text + "'");
    return v;
}

std::vector<std::uint64_t> neighbor_masks(const LatticeGeometry &g) {
    std::vector<std::uint64_t> masks(static_cast<std::size_t>(g.size()), 0);
    for(int s = 0; s < g.size(); ++s)
        for(int t : g.neighbors(s)) masks[static_cast<std::size_t>(s)] |= std::uint64_t{1} << t;
    return masks;
}

bool mask_connected(std::uint64_t mask, const std::vector<std::uint64_t> &nbr) {
    if(mask == 0) return false;
    std::uint64_t seen     = mask & (~mask + 1);
    std::uint64_t frontier = seen;
    while(frontier) {
        std::uint64_t next = 0;
        for(std::uint64_t f = frontier; f; f &= f - 1) next |= nbr[static_cast<std::size_t>(std::countr_zero(f))];
        next &= mask & ~seen;
        seen |= next;
        frontier = next;
    }
    return seen == mask;
}

std::vector<int> mask_sites(std::uint64_t mask) {
    std::vector<int> out;
    for(; mask; mask &= mask - 1) out.push_back(std::countr_zero(mask));
    return out;
}

void add_arcs(const LatticeGeometry &g, int length, std::vector<std::pair<std::vector<int>, std::string>> &out) {
    int n = g.size();
    if(length < 1 || length >= n) throw InputError("arc length " + std::to_string(length) + " out of range for " + std::to_string(n) + " sites");
    int starts = g.boundary() == Boundary::Periodic ? n : n - length + 1;
    for(int s = 0; s < starts; ++s) {
        std::vector<int> sites;
        for(int k = 0; k < length; ++k) sites.push_back((s + k) % n);
        out.emplace_back(std::move(sites), "arc@" + std::to_string(s) + "+" + std::to_string(length));
    }
}

void add_rectangles(const LatticeGeometry &g, int w, int h, std::vector<std::pair<std::vector<int>, std::string>> &out) {
    if(g.dimensionality() == 1) {
        if(h != 1) throw InputError("rectangles on a chain must have height 1");
        add_arcs(g, w, out);
        return;
    }
    auto [lx, ly] = g.dims();
    if(w < 1 || h < 1 || w > lx || h > ly) throw InputError("rectangle " + std::to_string(w) + "x" + std::to_string(h) + " does not fit the lattice");
    bool edge = g.kind() == LatticeKind::Edge;
    if(w == lx && h == ly) throw InputError("rectangle covers the full lattice");
    bool periodic = g.boundary() == Boundary::Periodic;
    int  nx = periodic ? lx : lx - w + 1;
    int  ny = periodic ? ly : ly - h + 1;
    for(int y0 = 0; y0 < ny; ++y0)
        for(int x0 = 0; x0 < nx; ++x0) {
            std::vector<int> sites;
            for(int dy = 0; dy < h; ++dy)
                for(int dx = 0; dx < w; ++dx) {
                    int x = (x0 + dx) % lx, y = (y0 + dy) % ly;
                    if(edge) {
                        sites.push_back(g.site_at({x, y, EdgeDir::Horizontal}));
                        sites.push_back(g.site_at({x, y, EdgeDir::Vertical}));
                    } else {
                        sites.push_back(g.site_at({x, y, EdgeDir::Horizontal}));
                    }
                }
            out.emplace_back(std::move(sites), "rect@" + std::to_string(x0) + "." + std::to_string(y0) + "+" +
                                                   std::to_string(w) + "x" + std::to_string(h));
        }
}

void add_connected(const LatticeGeometry &g, const RegionFamily &f, std::vector<std::pair<std::vector<int>, std::string>> &out) {
    int n = g.size();
    if(g.dimensionality() == 1) {
        for(int len = 1; len < n; ++len) add_arcs(g, len, out);
        return;
    }
    auto nbr = neighbor_masks(g);
    if(n <= f.exhaustive_limit) {
        std::uint64_t full = (std::uint64_t{1} << n) - 1;
        for(std::uint64_t m = 1; m < full; ++m)
            if(mask_connected(m, nbr)) out.emplace_back(mask_sites(m), "set@" + join_sites(mask_sites(m)));
        return;
    }
    auto [lx, ly] = g.dims();
    for(int h = 1; h <= ly; ++h)
        for(int w = 1; w <= lx; ++w)
            if(w != lx || h != ly) add_rectangles(g, w, h, out);
    // Seeded connected growth: random seed site, random target size, random frontier picks.
    std::mt19937_64 rng(f.seed);
    for(int k = 0; k < f.samples; ++k) {
        int           start  = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
        int           target = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n - 1));
        std::uint64_t mask   = std::uint64_t{1} << start;
        while(std::popcount(mask) < target) {
            std::uint64_t frontier = 0;
            for(std::uint64_t m = mask; m; m &= m - 1) frontier |= nbr[static_cast<std::size_t>(std::countr_zero(m))];
            frontier &= ~mask;
            if(!frontier) break;
            int pick = static_cast<int>(rng() % static_cast<std::uint64_t>(std::popcount(frontier)));
            for(int i = 0; i < pick; ++i) frontier &= frontier - 1;
            mask |= frontier & (~frontier + 1);
        }
        out.emplace_back(mask_sites(mask), "set@" + join_sites(mask_sites(mask)));
    }
}

} // namespace

RegionFamily parse_region_family(const std::string &text) {
    RegionFamily f;
    if(text == "contiguous") {
        f.kind = RegionKind::Contiguous;
    } else if(text == "connected") {
        f.kind = RegionKind::Connected;
    } else if(text.rfind("rect:", 0) == 0) {
        auto spec = text.substr(5);
        auto x    = spec.find('x');
        if(x == std::string::npos) throw InputError("bad rectangle '" + text + "' (expected rect:WxH)");
        f.kind   = RegionKind::Rectangle;
        f.width  = parse_positive(spec.substr(0, x), "rectangle width");
        f.height = parse_positive(spec.substr(x + 1), "rectangle height");
    } else {
        throw InputError("unknown region family '" + text + "' (expected contiguous, connected or rect:WxH)");
    }
    return f;
}

int region_area(const LatticeGeometry &g, const Bipartition &part) {
    int area = 0;
    for(int s : part.region()) {
        auto nb = g.neighbors(s);
        if(std::any_of(nb.begin(), nb.end(), [&](int t) { return !part.contains(t); })) ++area;
    }
    return area;
}

Region make_region(const LatticeGeometry &g, std::vector<int> sites, std::string label) {
    std::sort(sites.begin(), sites.end());
    if(label.empty()) label = "set@" + join_sites(sites);
    Bipartition part(g.size(), sites);
    int         area = region_area(g, part);
    int         vol  = static_cast<int>(part.region().size());
    return {std::move(label), std::move(part), area, vol};
}

std::vector<Region> make_regions(const LatticeGeometry &g, const RegionFamily &f) {
    std::vector<std::pair<std::vector<int>, std::string>> raw;
    switch(f.kind) {
        case RegionKind::Contiguous: {
            if(g.dimensionality() != 1) throw InputError("contiguous regions need a 1D lattice");
            int n  = g.size();
            int hi = f.max_length < 0 ? n - 1 : f.max_length;
            if(f.start < 0 || f.start >= n) throw InputError("arc start out of range");
            if(f.min_length < 1 || hi >= n || f.min_length > hi) throw InputError("arc lengths out of range");
            if(g.boundary() == Boundary::Open && f.start + hi > n) throw InputError("arc runs past the open chain end");
            for(int len = f.min_length; len <= hi; ++len) {
                std::vector<int> sites;
                for(int k = 0; k < len; ++k) sites.push_back((f.start + k) % n);
                raw.emplace_back(std::move(sites), "arc@" + std::to_string(f.start) + "+" + std::to_string(len));
            }
            break;
        }
        case RegionKind::Rectangle: add_rectangles(g, f.width, f.height, raw); break;
        case RegionKind::Connected: add_connected(g, f, raw); break;
        case RegionKind::Custom:
            for(const auto &sites : f.custom) raw.emplace_back(sites, std::string{});
            break;
    }
    std::vector<Region>        out;
    std::set<std::vector<int>> seen;
    for(auto &[sites, label] : raw) {
        std::sort(sites.begin(), sites.end());
        if(sites.empty()) throw InputError("empty region");
        if(static_cast<int>(sites.size()) >= g.size()) throw InputError("region covers the full lattice");
        if(!seen.insert(sites).second) continue;
        out.push_back(make_region(g, sites, label));
    }
    std::stable_sort(out.begin(), out.end(), [](const Region &a, const Region &b) {
        if(a.volume != b.volume) return a.volume < b.volume;
        return a.part.region() < b.part.region();
    });
    return out;
}

BoundContext BoundContext::from_cover(ClusterCover c) {
    BoundContext ctx;
    ctx.kind  = Kind::Cover;
    ctx.cover = std::move(c);
    return ctx;
}

BoundContext BoundContext::from_dbm(DbmSpec d) {
    BoundContext ctx;
    ctx.kind = Kind::Dbm;
    ctx.dbm  = std::move(d);
    return ctx;
}

BoundContext BoundContext::smooth(int B) {
    if(B < 0) throw InputError("boundary range must be >= 0");
    BoundContext ctx;
    ctx.kind         = Kind::Smooth;
    ctx.smooth_range = B;
    return ctx;
}

int BoundContext::bound_log2(const Region &region) const {
    switch(kind) {
        case Kind::Cover:
            if(!cover) throw ConfigError("bound context has no cluster cover");
            return rank_bound(*cover, region.part).log2;
        case Kind::Dbm:
            if(!dbm) throw ConfigError("bound context has no DBM");
            return six_group(*dbm, region.part).bound_log2;
        case Kind::Smooth: return (smooth_range + 1) * region.area;
    }
    return 0;
}

EntropyReport entropy_sweep(const DenseState &state, const std::vector<Region> &regions, const std::vector<double> &alphas,
                            const BoundContext *ctx) {
    if(!state.normalized()) throw PreconditionError("entropy_sweep needs a normalized state");
    for(double a : alphas)
        if(!(a > 0.0)) throw InputError("Renyi index must be positive");
    for(const auto &r : regions)
        if(r.part.n_sites() != state.n_sites()) throw InputError("region " + r.label + " does not match the state size");
    EntropyReport report;
    report.n_sites = state.n_sites();
    report.rows.resize(regions.size() * alphas.size());
    parallel_for(
        0, regions.size(),
        [&](std::uint64_t lo, std::uint64_t hi) {
            for(std::uint64_t r = lo; r < hi; ++r) {
                const Region      &reg   = regions[r];
                auto               spec  = schmidt(state, reg.part);
                int                rank  = numerical_rank(spec);
                std::optional<int> bound = ctx ? std::optional<int>(ctx->bound_log2(reg)) : std::nullopt;
                for(std::size_t k = 0; k < alphas.size(); ++k) {
                    EntropyRow row;
                    row.region       = reg.label;
                    row.area         = reg.area;
                    row.volume       = reg.volume;
                    row.alpha        = alphas[k];
                    row.entropy_nats = renyi_entropy(spec, alphas[k]);
                    row.rank         = rank;
                    if(bound) {
                        row.rank_bound_log2 = bound;
                        bool rank_ok        = *bound >= 62 || static_cast<std::uint64_t>(rank) <= (std::uint64_t{1} << *bound);
                        row.bound_ok        = rank_ok && row.entropy_nats <= *bound * kLn2 + 1e-9;
                        row.bound_vacuous   = 2 * *bound >= state.n_sites();
                    }
                    report.rows[r * alphas.size() + k] = std::move(row);
                }
            }
        },
        2);
    return report;
}

AreaLawReport area_law_check(const DenseState &state, const std::optional<BoundContext> &ctx,
                             const std::vector<Region> &regions, const std::vector<double> &alphas) {
    if(!ctx) throw ConfigError("area-law check needs a cluster cover or DBM context");
    auto          sweep = entropy_sweep(state, regions, alphas, &*ctx);
    AreaLawReport out;
    for(std::size_t r = 0; r < regions.size(); ++r) {
        AreaLawRow row;
        row.region     = regions[r].label;
        row.area       = regions[r].area;
        row.bound_log2 = ctx->bound_log2(regions[r]);
        row.ratio      = row.area > 0 ? static_cast<double>(row.bound_log2) / row.area : 0.0;
        for(std::size_t k = 0; k < alphas.size(); ++k) {
            const auto &e        = sweep.rows[r * alphas.size() + k];
            row.max_entropy_nats = std::max(row.max_entropy_nats, e.entropy_nats);
            row.rank             = e.rank;
            row.pass             = row.pass && e.bound_ok;
            row.vacuous          = e.bound_vacuous;
        }
        if(!row.pass) ++out.violations;
        if(!row.vacuous) out.max_ratio = std::max(out.max_ratio, row.ratio);
        out.rows.push_back(std::move(row));
    }
    return out;
}

TopologicalEntropy topological_entropy(const DenseState &state, const std::vector<int> &a, const std::vector<int> &b,
                                       const std::vector<int> &c, double alpha) {
    int n = state.n_sites();
    if(a.empty() || b.empty() || c.empty()) throw InputError("topological entropy regions must be nonempty");
    std::set<int> all;
    for(const auto *part : {&a, &b, &c})
        for(int s : *part) {
            if(s < 0 || s >= n) throw InputError("region site " + std::to_string(s) + " out of range");
            if(!all.insert(s).second) throw InputError("topological entropy regions overlap at site " + std::to_string(s));
        }
    if(static_cast<int>(all.size()) >= n) throw InputError("A u B u C must be a proper subset of the sites");
    auto S = [&](std::initializer_list<const std::vector<int> *> parts) {
        std::vector<int> sites;
        for(const auto *p : parts) sites.insert(sites.end(), p->begin(), p->end());
        return renyi_entropy(schmidt(state, Bipartition(n, sites)), alpha);
    };
    TopologicalEntropy t;
    t.s_a   = S({&a});
    t.s_b   = S({&b});
    t.s_c   = S({&c});
    t.s_ab  = S({&a, &b});
    t.s_bc  = S({&b, &c});
    t.s_ac  = S({&a, &c});
    t.s_abc = S({&a, &b, &c});
    t.value           = t.s_ab + t.s_bc + t.s_ac - t.s_a - t.s_b - t.s_c - t.s_abc;
    t.kitaev_preskill = -t.value;
    return t;
}

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

namespace {
double rounded(double x) { return std::stod(format_real(x)); }
} // namespace

void write_csv(std::ostream &os, const EntropyReport &report) {
    os << "region,area,volume,alpha,entropy_nats,entropy_bits,rank,rank_bound_log2,bound_ok,bound_vacuous\n";
    for(const auto &r : report.rows) {
        os << r.region << ',' << r.area << ',' << r.volume << ',' << format_real(r.alpha) << ',' << format_real(r.entropy_nats)
           << ',' << format_real(nats_to_bits(r.entropy_nats)) << ',' << r.rank << ',';
        if(r.rank_bound_log2)
            os << *r.rank_bound_log2 << ',' << (r.bound_ok ? "true" : "false") << ',' << (r.bound_vacuous ? "true" : "false");
        else
            os << ",,";
        os << '\n';
    }
}

void write_json(std::ostream &os, const EntropyReport &report) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for(const auto &r : report.rows) {
        nlohmann::ordered_json j;
        j["region"]       = r.region;
        j["area"]         = r.area;
        j["volume"]       = r.volume;
        j["alpha"]        = rounded(r.alpha);
        j["entropy_nats"] = rounded(r.entropy_nats);
        j["entropy_bits"] = rounded(nats_to_bits(r.entropy_nats));
        j["rank"]         = r.rank;
        if(r.rank_bound_log2) {
            j["rank_bound_log2"] = *r.rank_bound_log2;
            j["bound_ok"]        = r.bound_ok;
            j["bound_vacuous"]   = r.bound_vacuous;
        } else {
            j["rank_bound_log2"] = nullptr;
            j["bound_ok"]        = nullptr;
            j["bound_vacuous"]   = nullptr;
        }
        rows.push_back(std::move(j));
    }
    nlohmann::ordered_json doc;
    doc["n_sites"] = report.n_sites;
    doc["rows"]    = std::move(rows);
    os << doc.dump(2) << '\n';
}

} // namespace qnnent
