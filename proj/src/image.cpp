#include "qnnent/image.hpp"

#include "qnnent/analysis.hpp"
#include "qnnent/errors.hpp"
#include "qnnent/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <unordered_set>

namespace qnnent::image {

namespace {

void check_L(int L) {
    if(L < 1 || 2 * L * L > max_pixels) throw InputError("torus side " + std::to_string(L) + " out of range");
}

int edge_bit(int L, int x, int y, EdgeDir dir) {
    x = ((x % L) + L) % L;
    y = ((y % L) + L) % L;
    return 2 * (y * L + x) + static_cast<int>(dir);
}

} // namespace

TorusImage::TorusImage(int side, std::uint64_t bits) : L(side), edges(bits) {
    check_L(side);
    if(n_edges() < 64 && (bits >> n_edges()) != 0) throw InputError("image bits exceed the edge count");
}

bool TorusImage::edge(int x, int y, EdgeDir dir) const { return (edges >> edge_bit(L, x, y, dir)) & 1U; }

void TorusImage::set(int x, int y, EdgeDir dir, bool value) {
    std::uint64_t m = std::uint64_t{1} << edge_bit(L, x, y, dir);
    edges           = value ? edges | m : edges & ~m;
}

ZeroChain boundary_map(const TorusImage &img) {
    int       L = img.L;
    ZeroChain z{L, 0};
    for(int y = 0; y < L; ++y)
        for(int x = 0; x < L; ++x) {
            for(EdgeDir d : {EdgeDir::Horizontal, EdgeDir::Vertical}) {
                if(!img.edge(x, y, d)) continue;
                int x2 = d == EdgeDir::Horizontal ? (x + 1) % L : x;
                int y2 = d == EdgeDir::Vertical ? (y + 1) % L : y;
                z.vertices ^= std::uint64_t{1} << (y * L + x);
                z.vertices ^= std::uint64_t{1} << (y2 * L + x2);
            }
        }
    return z;
}

bool is_cycle(const TorusImage &img) { return boundary_map(img).trivial(); }

bool TargetSet::contains(std::uint64_t bits) const { return std::binary_search(members.begin(), members.end(), bits); }

TargetSet make_target_set(int n_pixels, std::vector<std::uint64_t> members, std::string provenance, int L) {
    if(n_pixels < 1 || n_pixels > max_pixels) throw InputError("pixel count out of range");
    if(L != 0 && 2 * L * L != n_pixels) throw InputError("torus side does not match the pixel count");
    std::sort(members.begin(), members.end());
    if(std::adjacent_find(members.begin(), members.end()) != members.end()) throw InputError("target set has duplicate members");
    if(!members.empty() && n_pixels < 64 && (members.back() >> n_pixels) != 0) throw InputError("target member wider than the pixel count");
    return {n_pixels, L, std::move(provenance), std::move(members)};
}

TargetSet enumerate_cycles(int L) {
    check_L(L);
    int n = 2 * L * L;
    limits::require_dense(n, "enumerate_cycles");
    std::vector<std::uint8_t> hit(std::uint64_t{1} << n);
    parallel_for(0, hit.size(), [&](std::uint64_t lo, std::uint64_t hi) {
        for(std::uint64_t b = lo; b < hi; ++b) hit[b] = is_cycle(TorusImage(L, b)) ? 1 : 0;
    });
    std::vector<std::uint64_t> members;
    for(std::uint64_t b = 0; b < hit.size(); ++b)
        if(hit[b]) members.push_back(b);
    return make_target_set(n, std::move(members), "cycles(" + std::to_string(L) + ")", L);
}

int classify(const TorusImage &img, const TargetSet &t) {
    if(img.n_edges() != t.n_pixels)
        throw InputError("image has " + std::to_string(img.n_edges()) + " pixels, target set has " + std::to_string(t.n_pixels));
    return t.contains(img.edges) ? 1 : 0;
}

DenseState target_state(const TargetSet &t) {
    if(t.members.empty()) throw DegenerateStateError("target set is empty");
    limits::require_dense(t.n_pixels, "target_state");
    std::vector<cplx> amps(std::uint64_t{1} << t.n_pixels);
    double            a = 1.0 / std::sqrt(static_cast<double>(t.members.size()));
    for(auto m : t.members) amps[m] = a;
    return {t.n_pixels, std::move(amps), true};
}

int smooth_rank_bound(const LatticeGeometry &g, const Bipartition &region, int B) {
    if(B < 0) throw InputError("boundary range must be >= 0");
    return (B + 1) * region_area(g, region);
}

TargetSet random_target_set(int n_pixels, std::uint64_t count, std::uint64_t seed) {
    if(n_pixels < 1 || n_pixels > max_pixels) throw InputError("pixel count out of range");
    std::uint64_t universe = std::uint64_t{1} << n_pixels;
    if(count > universe) throw InputError("cannot draw " + std::to_string(count) + " distinct images from 2^" + std::to_string(n_pixels));
    std::mt19937_64                   rng(seed);
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(count);
    for(std::uint64_t j = universe - count; j < universe; ++j) {
        std::uint64_t t = std::uniform_int_distribution<std::uint64_t>(0, j)(rng);
        if(!chosen.insert(t).second) chosen.insert(j);
    }
    std::vector<std::uint64_t> members(chosen.begin(), chosen.end());
    return make_target_set(n_pixels, std::move(members), "random(" + std::to_string(seed) + "," + std::to_string(count) + ")");
}

std::uint64_t to_toric_edges(int L, std::uint64_t image_bits) {
    check_L(L);
    std::uint64_t out = 0;
    for(int y = 0; y < L; ++y)
        for(int x = 0; x < L; ++x) {
            if((image_bits >> edge_bit(L, x, y, EdgeDir::Horizontal)) & 1U)
                out |= std::uint64_t{1} << edge_bit(L, x + 1, y, EdgeDir::Vertical);
            if((image_bits >> edge_bit(L, x, y, EdgeDir::Vertical)) & 1U)
                out |= std::uint64_t{1} << edge_bit(L, x, y + 1, EdgeDir::Horizontal);
        }
    return out;
}

DenseState to_toric_state(int L, const DenseState &image_state) {
    check_L(L);
    if(image_state.n_sites() != 2 * L * L) throw InputError("state size does not match the torus");
    std::vector<cplx> amps(image_state.dim());
    for(std::uint64_t b = 0; b < image_state.dim(); ++b) amps[to_toric_edges(L, b)] = image_state[b];
    return {image_state.n_sites(), std::move(amps), image_state.normalized()};
}

void write_image_set(std::ostream &os, const TargetSet &t) {
    nlohmann::ordered_json header;
    header["L"]          = t.L;
    header["n_pixels"]   = t.n_pixels;
    header["provenance"] = t.provenance;
    os << header.dump() << '\n';
    int  digits = (t.n_pixels + 3) / 4;
    char buf[20];
    for(auto m : t.members) {
        std::snprintf(buf, sizeof buf, "%0*llx", digits, static_cast<unsigned long long>(m));
        os << buf << '\n';
    }
}

TargetSet read_image_set(std::istream &is) {
    std::string line;
    if(!std::getline(is, line)) throw InputError("image set: missing header line");
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(line);
    } catch(const nlohmann::json::exception &e) {
        throw SchemaError("$", std::string("image set header is not JSON: ") + e.what());
    }
    if(!header.is_object()) throw SchemaError("$", "image set header must be an object");
    for(const char *key : {"L", "n_pixels", "provenance"})
        if(!header.contains(key)) throw SchemaError(std::string("$.") + key, "missing field");
    if(!header["L"].is_number_integer()) throw SchemaError("$.L", "expected an integer");
    if(!header["n_pixels"].is_number_integer()) throw SchemaError("$.n_pixels", "expected an integer");
    if(!header["provenance"].is_string()) throw SchemaError("$.provenance", "expected a string");
    int  n      = header["n_pixels"].get<int>();
    int  L      = header["L"].get<int>();
    auto digits = static_cast<std::size_t>((n + 3) / 4);
    std::vector<std::uint64_t> members;
    int                        lineno = 1;
    while(std::getline(is, line)) {
        ++lineno;
        if(line.empty()) continue;
        if(line.size() != digits || line.find_first_not_of("0123456789abcdefABCDEF") != std::string::npos)
            throw InputError("image set line " + std::to_string(lineno) + ": expected " + std::to_string(digits) + " hex digits");
        members.push_back(std::stoull(line, nullptr, 16));
    }
    return make_target_set(n, std::move(members), header["provenance"].get<std::string>(), L);
}

} // namespace qnnent::image
