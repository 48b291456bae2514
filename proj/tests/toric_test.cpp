#include "oracles.hpp"

#include "qnnent/analysis.hpp"
#include "qnnent/errors.hpp"
#include "qnnent/toric.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>

using namespace qnnent;
using namespace qnnent::toric;

namespace {

const std::array<Sector, 4> kSectors = {Sector{0, 0}, Sector{0, 1}, Sector{1, 0}, Sector{1, 1}};

std::vector<cplx> amps(const DenseState &s) { return {s.amplitudes().begin(), s.amplitudes().end()}; }

std::uint64_t mask_of(const std::array<int, 4> &e) {
    std::uint64_t m = 0;
    for(int k : e) m |= 1ULL << k;
    return m;
}

} // namespace

TEST(toric, stencils_match_independent_layout) {
    for(int L : {2, 3}) {
        oracle::Torus t{L};
        for(int y = 0; y < L; ++y)
            for(int x = 0; x < L; ++x) {
                EXPECT_EQ(mask_of(star(L, x, y)), t.star(x, y));
                EXPECT_EQ(mask_of(plaquette(L, x, y)), t.plaquette(x, y));
            }
    }
}

TEST(toric, stabilizers_pass_in_every_sector) {
    for(int L : {2, 3}) {
        for(auto s : kSectors) {
            auto rep = verify_stabilizers(build_toric_ground(L, s), stabilizers(L));
            EXPECT_TRUE(rep.all_pass) << L;
            EXPECT_EQ(rep.checks.size(), static_cast<std::size_t>(2 * L * L));
        }
        EXPECT_TRUE(verify_stabilizers(toric_quasi_product_state(L), stabilizers(L)).all_pass);
    }
}

TEST(toric, sector_states_are_orthogonal) {
    for(int L : {2, 3}) {
        std::vector<DenseState> s;
        for(auto sec : kSectors) s.push_back(build_toric_ground(L, sec));
        for(std::size_t i = 0; i < 4; ++i)
            for(std::size_t j = 0; j < 4; ++j) {
                double ov = std::abs(inner_product(s[i], s[j]));
                EXPECT_NEAR(ov, i == j ? 1.0 : 0.0, 1e-10);
            }
    }
}

TEST(toric, logical_z_labels_the_sector) {
    auto lz = logical_z(2);
    for(auto sec : kSectors) {
        auto psi = build_toric_ground(2, sec);
        auto ex  = inner_product(psi, apply_pauli_string(psi, lz[0])).real();
        auto ey  = inner_product(psi, apply_pauli_string(psi, lz[1])).real();
        EXPECT_NEAR(ex, sec.wx ? -1.0 : 1.0, 1e-12);
        EXPECT_NEAR(ey, sec.wy ? -1.0 : 1.0, 1e-12);
    }
}

TEST(toric, trivial_sector_support_at_L2) {
    auto psi = build_toric_ground(2, {0, 0});
    int  nz  = 0;
    for(auto z : psi.amplitudes())
        if(std::abs(z) > 1e-12) {
            ++nz;
            EXPECT_NEAR(std::abs(z), 1 / std::sqrt(8.0), 1e-14);
        }
    EXPECT_EQ(nz, 8);
    int closed = 0;
    for(std::uint64_t b = 0; b < 256; ++b) closed += is_closed_dual_loop(2, b);
    EXPECT_EQ(closed, 32);
}

// The cover state lies in the ground space with equal weight on every sector. At L = 2
// all relative signs are +1; at odd L the all-plus plaquette factors contribute a sign
// that differs between sectors, so only the magnitudes are sector independent.
TEST(toric, cover_state_spreads_evenly_over_sectors) {
    for(int L : {2, 3}) {
        auto   q     = amps(toric_quasi_product_state(L));
        double total = 0;
        std::vector<cplx> sum(q.size());
        for(auto sec : kSectors) {
            auto s = amps(build_toric_ground(L, sec));
            EXPECT_NEAR(oracle::fidelity(s, q), 0.25, 1e-12);
            total += oracle::fidelity(s, q);
            for(std::size_t i = 0; i < sum.size(); ++i) sum[i] += s[i];
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
        if(L == 2) {
            EXPECT_GE(oracle::fidelity(sum, q), 1 - 1e-12);
        }
    }
    auto c = build_toric_cover(2);
    EXPECT_EQ(c.K(), 4);
    EXPECT_EQ(c.clusters().size(), 8u);
}

TEST(toric, sizes_and_sector_parsing) {
    EXPECT_THROW(build_toric_ground(1, {0, 0}), InputError);
    EXPECT_THROW(build_toric_ground(4, {0, 0}), ResourceError);
    EXPECT_EQ(parse_sector("10"), (Sector{1, 0}));
    EXPECT_THROW(parse_sector("2"), InputError);
    EXPECT_THROW(parse_sector("012"), InputError);
}

TEST(toric, entropies_match_stabilizer_rank_oracle) {
    const int     L = 3;
    oracle::Torus t{L};
    auto          gens = t.sector_generators();
    auto          psi  = build_toric_ground(L, {0, 0});
    auto          fan  = fan_partition(L);
    std::vector<std::vector<int>> regions = {fan.a, fan.b, fan.c};
    auto join = [](std::vector<int> x, const std::vector<int> &y) {
        x.insert(x.end(), y.begin(), y.end());
        std::sort(x.begin(), x.end());
        return x;
    };
    regions.push_back(join(fan.a, fan.b));
    regions.push_back(join(fan.b, fan.c));
    regions.push_back(join(fan.a, fan.c));
    regions.push_back(join(join(fan.a, fan.b), fan.c));
    regions.push_back({0, 1, 2, 3, 4, 5, 6, 7, 8});
    for(const auto &r : regions) {
        double s = renyi_entropy(schmidt(psi, Bipartition(18, r)), 1.0);
        EXPECT_NEAR(nats_to_bits(s), oracle::stabilizer_entropy_bits(gens, r), 1e-9);
    }
}

TEST(toric, topological_entropy_is_ln2_under_printed_sign) {
    auto fan = fan_partition(3);
    EXPECT_EQ(fan.a.size() + fan.b.size() + fan.c.size(), 10u);
    for(auto sec : kSectors) {
        auto te = topological_entropy(build_toric_ground(3, sec), fan.a, fan.b, fan.c);
        EXPECT_NEAR(te.value, std::log(2.0), 1e-9);
        EXPECT_NEAR(te.kitaev_preskill, -std::log(2.0), 1e-9);
    }
}

TEST(toric, topological_entropy_is_permutation_invariant) {
    auto                                  psi = build_toric_ground(3, {0, 0});
    auto                                  fan = fan_partition(3);
    std::array<std::vector<int>, 3>       r{fan.a, fan.b, fan.c};
    std::array<int, 3>                    idx{0, 1, 2};
    double                                ref = topological_entropy(psi, r[0], r[1], r[2]).value;
    do {
        double v = topological_entropy(psi, r[static_cast<std::size_t>(idx[0])], r[static_cast<std::size_t>(idx[1])],
                                       r[static_cast<std::size_t>(idx[2])])
                       .value;
        EXPECT_NEAR(v, ref, 1e-9);
    } while(std::next_permutation(idx.begin(), idx.end()));
}

TEST(toric, fan_needs_L3) { EXPECT_THROW(fan_partition(2), InputError); }
