#include "qnnent/errors.hpp"
#include "qnnent/geometry.hpp"
#include "qnnent/networks.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace qnnent;

TEST(geometry, chain_distances) {
    auto p = LatticeGeometry::chain(8, Boundary::Periodic);
    auto o = LatticeGeometry::chain(8, Boundary::Open);
    EXPECT_EQ(p.distance(0, 7), 1.0);
    EXPECT_EQ(o.distance(0, 7), 7.0);
    EXPECT_EQ(p.distance(2, 6), 4.0);
}

TEST(geometry, square_diagonal_wrap) {
    auto g = LatticeGeometry::square(3, 3, Boundary::Periodic);
    EXPECT_EQ(g.distance(g.site_at({0, 0}), g.site_at({2, 2})), 1.0);
}

TEST(geometry, unknown_site_is_rejected) {
    auto g = LatticeGeometry::chain(4, Boundary::Open);
    EXPECT_THROW((void)g.distance(0, 4), InputError);
    EXPECT_THROW((void)g.coord(-1), InputError);
}

TEST(geometry, epsilon_balls) {
    auto o = LatticeGeometry::chain(9, Boundary::Open);
    EXPECT_EQ(o.epsilon_ball(4, 1.0).members, (std::vector<int>{3, 4, 5}));
    EXPECT_EQ(o.epsilon_ball(0, 1.0).members, (std::vector<int>{0, 1}));
    auto sq = LatticeGeometry::square(3, 3, Boundary::Periodic);
    EXPECT_EQ(sq.epsilon_ball(sq.site_at({1, 1}), 1.0).members.size(), 9u);
}

TEST(geometry, edge_lattice_midpoints) {
    auto g = LatticeGeometry::torus_edges(3);
    EXPECT_EQ(g.size(), 18);
    int h00 = g.site_at({0, 0, EdgeDir::Horizontal});
    int v00 = g.site_at({0, 0, EdgeDir::Vertical});
    EXPECT_EQ(h00, 0);
    EXPECT_EQ(v00, 1);
    // Edges meeting at a vertex sit half a lattice unit apart in each direction.
    EXPECT_EQ(g.distance(h00, v00), 0.5);
    int h10 = g.site_at({1, 0, EdgeDir::Horizontal});
    EXPECT_EQ(g.distance(h00, h10), 1.0);
}

TEST(geometry, distance_is_a_metric) {
    std::mt19937_64 rng(4);
    for(const auto &g : {LatticeGeometry::chain(11, Boundary::Periodic), LatticeGeometry::square(4, 5, Boundary::Open),
                         LatticeGeometry::square(4, 4, Boundary::Periodic), LatticeGeometry::torus_edges(3)}) {
        for(int t = 0; t < 500; ++t) {
            int a = static_cast<int>(rng() % static_cast<std::uint64_t>(g.size()));
            int b = static_cast<int>(rng() % static_cast<std::uint64_t>(g.size()));
            int c = static_cast<int>(rng() % static_cast<std::uint64_t>(g.size()));
            EXPECT_EQ(g.distance(a, b), g.distance(b, a));
            EXPECT_EQ(g.distance(a, b) == 0.0, a == b);
            EXPECT_LE(g.distance(a, c), g.distance(a, b) + g.distance(b, c));
        }
    }
}

TEST(geometry, epsilon_ball_is_monotone) {
    auto g = LatticeGeometry::square(5, 5, Boundary::Periodic);
    for(int c = 0; c < g.size(); ++c) {
        auto small = g.epsilon_ball(c, 1.0).members;
        auto large = g.epsilon_ball(c, 2.0).members;
        EXPECT_TRUE(std::includes(large.begin(), large.end(), small.begin(), small.end()));
        for(int m : small) EXPECT_LE(g.distance(c, m), 1.0);
    }
}

namespace {

// 1D 3-local RBM: hidden unit j couples to visibles j-1, j, j+1 (open chain).
RbmSpec three_local_rbm(int n) {
    RbmSpec s;
    s.n_visible    = n;
    s.n_hidden     = n;
    s.visible_bias = std::vector<cplx>(static_cast<std::size_t>(n));
    s.hidden_bias  = std::vector<cplx>(static_cast<std::size_t>(n));
    s.weights      = LayerWeights(n, n);
    for(int j = 0; j < n; ++j)
        for(int i = std::max(0, j - 1); i <= std::min(n - 1, j + 1); ++i) s.weights.set(i, j, {0.1 * (i + 1), 0.05 * j});
    return s;
}

} // namespace

TEST(k_locality, three_local_rbm_on_a_chain) {
    auto rep = validate_k_local(NetworkSpec{three_local_rbm(9)}, LatticeGeometry::chain(9, Boundary::Open), 1.0);
    EXPECT_TRUE(rep.is_local);
    EXPECT_EQ(rep.K, 3);
    EXPECT_TRUE(rep.violations.empty());
}

TEST(k_locality, dense_rbm_violates_unit_ball) {
    RandomNetworkOptions o;
    o.n        = 6;
    o.locality = Locality::all_to_all();
    auto rep   = validate_k_local(random_network(o), LatticeGeometry::chain(6, Boundary::Open), 1.0);
    EXPECT_FALSE(rep.is_local);
    EXPECT_FALSE(rep.violations.empty());
}

TEST(k_locality, zero_weights_mean_no_connections) {
    RbmSpec s;
    s.n_visible    = 4;
    s.n_hidden     = 4;
    s.visible_bias = std::vector<cplx>(4);
    s.hidden_bias  = std::vector<cplx>(4);
    s.weights      = LayerWeights(4, 4);
    for(int i = 0; i < 4; ++i)
        for(int j = 0; j < 4; ++j) s.weights.set(i, j, 0.0);
    auto rep = validate_k_local(NetworkSpec{s}, LatticeGeometry::chain(4, Boundary::Open), 0.0);
    EXPECT_TRUE(rep.is_local);
    EXPECT_EQ(rep.K, 0);
}

TEST(k_locality, missing_hidden_position_is_a_config_error) {
    auto s = three_local_rbm(5);
    s.hidden_positions.assign(5, std::nullopt);
    s.hidden_positions[0] = 0;
    EXPECT_THROW(validate_k_local(NetworkSpec{s}, LatticeGeometry::chain(5, Boundary::Open), 1.0), ConfigError);
}

TEST(k_locality, invariant_under_hidden_relabeling) {
    auto s = three_local_rbm(8);
    // Permute hidden neurons together with their positions.
    std::vector<int> perm{3, 7, 0, 5, 1, 6, 2, 4};
    RbmSpec          t = s;
    t.weights          = LayerWeights(8, 8);
    t.hidden_positions.resize(8);
    for(int j = 0; j < 8; ++j) {
        int src                                          = perm[static_cast<std::size_t>(j)];
        t.hidden_positions[static_cast<std::size_t>(j)] = src;
        for(int i = 0; i < 8; ++i)
            if(s.weights.masked(i, src)) t.weights.set(i, j, s.weights.at(i, src));
    }
    auto g  = LatticeGeometry::chain(8, Boundary::Open);
    auto r1 = validate_k_local(NetworkSpec{s}, g, 1.0);
    auto r2 = validate_k_local(NetworkSpec{t}, g, 1.0);
    EXPECT_EQ(r1.is_local, r2.is_local);
    EXPECT_EQ(r1.K, r2.K);
    EXPECT_EQ(r1.violations.size(), r2.violations.size());
}

TEST(k_locality, random_local_networks_pass_their_own_check) {
    for(int K : {2, 3, 4}) {
        RandomNetworkOptions o;
        o.n        = 10;
        o.seed     = static_cast<std::uint64_t>(K);
        o.locality = Locality::local(K, K == 4 ? 2.0 : 1.0);
        auto rep   = validate_k_local(random_network(o), LatticeGeometry::chain(10, Boundary::Periodic), o.locality.eps);
        EXPECT_TRUE(rep.is_local) << K;
        EXPECT_EQ(rep.K, K);
        o.kind = NetworkKind::Dbm;
        rep    = validate_k_local(random_network(o), LatticeGeometry::chain(10, Boundary::Periodic), o.locality.eps);
        EXPECT_TRUE(rep.is_local) << K;
    }
}
