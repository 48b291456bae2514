#include "oracles.hpp"

#include "qnnent/errors.hpp"
#include "qnnent/networks.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace qnnent;

namespace {

RbmSpec zero_rbm(int n, int m, Alphabet hidden) {
    RbmSpec s;
    s.n_visible       = n;
    s.n_hidden        = m;
    s.visible_bias    = std::vector<cplx>(static_cast<std::size_t>(n));
    s.hidden_bias     = std::vector<cplx>(static_cast<std::size_t>(m));
    s.weights         = LayerWeights(n, m);
    s.hidden_alphabet = hidden;
    return s;
}

oracle::BruteNet brute(const RbmSpec &s) {
    oracle::BruteNet b;
    b.n          = s.n_visible;
    b.m          = s.n_hidden;
    b.pm_visible = s.visible_alphabet == Alphabet::PlusMinus;
    b.pm_hidden  = s.hidden_alphabet == Alphabet::PlusMinus;
    b.a          = s.visible_bias;
    b.b          = s.hidden_bias;
    for(int i = 0; i < b.n; ++i)
        for(int j = 0; j < b.m; ++j) b.w.push_back(s.weights.at(i, j));
    return b;
}

oracle::BruteNet brute(const DbmSpec &s) {
    oracle::BruteNet b;
    b.n          = s.n_visible;
    b.m          = s.n_shallow;
    b.l          = s.n_deep;
    b.pm_visible = s.visible_alphabet == Alphabet::PlusMinus;
    b.pm_hidden  = s.shallow_alphabet == Alphabet::PlusMinus;
    b.pm_deep    = s.deep_alphabet == Alphabet::PlusMinus;
    b.a          = s.visible_bias;
    b.b          = s.shallow_bias;
    b.c          = s.deep_bias;
    for(int i = 0; i < b.n; ++i)
        for(int j = 0; j < b.m; ++j) b.w.push_back(s.w_vh.at(i, j));
    for(int j = 0; j < b.m; ++j)
        for(int k = 0; k < b.l; ++k) b.w2.push_back(s.w_hg.at(j, k));
    return b;
}

double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

RandomNetworkOptions local_opts(int n, int K, std::uint64_t seed) {
    RandomNetworkOptions o;
    o.n        = n;
    o.seed     = seed;
    o.locality = Locality::local(K, K <= 3 ? 1.0 : 2.0);
    return o;
}

} // namespace

TEST(rbm, zero_parameters_give_two_to_the_m) {
    for(auto h : {Alphabet::PlusMinus, Alphabet::ZeroOne}) {
        auto s = zero_rbm(3, 4, h);
        for(std::uint64_t v = 0; v < 8; ++v) EXPECT_NEAR(std::abs(rbm_amplitude(s, SpinConfiguration(3, v, Alphabet::PlusMinus)) - 16.0), 0, 1e-13);
    }
}

TEST(rbm, single_hidden_unit_with_imaginary_bias) {
    auto s           = zero_rbm(2, 1, Alphabet::ZeroOne);
    s.hidden_bias[0] = {0, std::numbers::pi / 2};
    for(std::uint64_t v = 0; v < 4; ++v) {
        auto z = rbm_amplitude(s, SpinConfiguration(2, v, Alphabet::PlusMinus));
        EXPECT_NEAR(z.real(), 1.0, 1e-15);
        EXPECT_NEAR(z.imag(), 1.0, 1e-15);
    }
}

TEST(rbm, dimension_mismatch) {
    auto s = zero_rbm(3, 2, Alphabet::PlusMinus);
    EXPECT_THROW((void)rbm_amplitude(s, SpinConfiguration(4, 0, Alphabet::PlusMinus)), InputError);
    s.visible_bias.pop_back();
    EXPECT_THROW(s.validate(), InputError);
}

TEST(rbm, masked_out_weight_must_be_zero) {
    auto s = zero_rbm(2, 2, Alphabet::PlusMinus);
    s.weights.set_raw(0, 1, 0.5, false);
    EXPECT_THROW(s.validate(), InputError);
}

TEST(rbm, matches_explicit_hidden_sum) {
    for(auto h : {Alphabet::PlusMinus, Alphabet::ZeroOne})
        for(auto vis : {Alphabet::PlusMinus, Alphabet::ZeroOne}) {
            auto o             = local_opts(6, 3, 12);
            o.hidden_alphabet  = h;
            o.visible_alphabet = vis;
            auto s             = random_rbm(o);
            auto b             = brute(s);
            for(std::uint64_t v = 0; v < 64; ++v)
                EXPECT_LT(rel_err(rbm_amplitude(s, SpinConfiguration(6, v, vis)), b.amplitude(v)), 1e-12);
        }
}

TEST(rbm, quasi_product_conversion_is_exact) {
    for(int t = 0; t < 10; ++t)
        for(auto h : {Alphabet::PlusMinus, Alphabet::ZeroOne}) {
            auto o            = local_opts(8, 2 + t % 3, 100 + static_cast<std::uint64_t>(t));
            o.hidden_alphabet = h;
            auto   s          = random_rbm(o);
            auto   cover      = rbm_to_quasi_product(s);
            auto   a          = network_state(s);
            auto   q          = materialize(cover);
            double amax       = 0;
            for(auto z : a.amplitudes()) amax = std::max(amax, std::abs(z));
            for(std::uint64_t v = 0; v < a.dim(); ++v) EXPECT_LE(std::abs(a[v] - q[v]), 1e-12 * amax);
            EXPECT_LE(cover.K(), o.locality.K);
        }
}

TEST(rbm, three_local_chain_gives_three_site_clusters) {
    // Hidden j couples to j-1, j, j+1 on an open chain, so the end clusters have two sites.
    auto s = zero_rbm(9, 9, Alphabet::PlusMinus);
    for(int j = 0; j < 9; ++j)
        for(int i = std::max(0, j - 1); i <= std::min(8, j + 1); ++i) s.weights.set(i, j, {0.1 * i, 0.2});
    auto c = rbm_to_quasi_product(s);
    EXPECT_EQ(c.K(), 3);
    ASSERT_EQ(c.clusters().size(), 9u);
    EXPECT_EQ(c.clusters()[0].sites, (std::vector<int>{0, 1}));
    EXPECT_EQ(c.clusters()[4].sites, (std::vector<int>{3, 4, 5}));
    EXPECT_EQ(c.clusters()[8].sites, (std::vector<int>{7, 8}));
    auto b = brute(s);
    for(std::uint64_t v = 0; v < 512; v += 7)
        EXPECT_LT(rel_err(qp_amplitude(c, SpinConfiguration(9, v, Alphabet::PlusMinus)), b.amplitude(v)), 1e-12);
}

TEST(rbm, zero_weights_give_a_constant_product_cover) {
    auto s = zero_rbm(3, 2, Alphabet::PlusMinus);
    auto c = rbm_to_quasi_product(s);
    EXPECT_EQ(c.K(), 1);
    for(std::uint64_t v = 0; v < 8; ++v) EXPECT_NEAR(std::abs(qp_amplitude(c, SpinConfiguration(3, v, Alphabet::PlusMinus)) - 4.0), 0, 1e-14);
}

TEST(rbm, log_space_path_matches_shifted_direct_evaluation) {
    // Real parts far beyond exp's range: only the normalized state is meaningful.
    auto s = zero_rbm(4, 4, Alphabet::PlusMinus);
    for(int j = 0; j < 4; ++j) {
        s.weights.set(j, j, {400.0 + j, 0.3});
        s.weights.set((j + 1) % 4, j, {-2.0, 0.1 * j});
    }
    ASSERT_TRUE(needs_log_space(s));
    auto psi = normalize(network_state(s));
    for(auto z : psi.amplitudes()) EXPECT_TRUE(std::isfinite(z.real()) && std::isfinite(z.imag()));

    auto small = s;
    for(int j = 0; j < 4; ++j) small.weights.set(j, j, {4.0 + 0.01 * j, 0.3});
    EXPECT_FALSE(needs_log_space(small));
    // Both evaluation paths applied to the same moderate spec must agree.
    auto direct = normalize(network_state(small));
    auto logged = normalize(evaluate_all_log([&](const SpinConfiguration &c) { return rbm_log_amplitude(small, c); }, 4,
                                             Alphabet::PlusMinus));
    for(std::uint64_t v = 0; v < 16; ++v) EXPECT_NEAR(std::abs(direct[v] - logged[v]), 0, 1e-12);
}

TEST(hidden_factor, log_form_is_stable_and_consistent) {
    for(cplx t : {cplx(0.3, 0.2), cplx(-1.7, 2.0), cplx(5, -1), cplx(-12, 0.4)})
        for(auto a : {Alphabet::PlusMinus, Alphabet::ZeroOne})
            EXPECT_LT(rel_err(std::exp(log_hidden_factor(t, a)), hidden_factor(t, a)), 1e-12);
    EXPECT_TRUE(std::isfinite(log_hidden_factor({800, 0}, Alphabet::PlusMinus).real()));
    EXPECT_TRUE(std::isfinite(log_hidden_factor({-800, 0}, Alphabet::ZeroOne).real()));
}

TEST(ffnn, zero_exp_network_is_one) {
    FeedForwardSpec s;
    s.n_visible = 3;
    s.layers.push_back({2, {0, 0}, LayerWeights(3, 2), {Activation::parse("exp"), Activation::parse("exp")}, {}});
    for(std::uint64_t v = 0; v < 8; ++v) EXPECT_EQ(ffnn_amplitude(s, SpinConfiguration(3, v, Alphabet::ZeroOne)), 1.0);
}

TEST(ffnn, unknown_activation) {
    EXPECT_THROW(Activation::parse("relu"), ConfigError);
    EXPECT_EQ(Activation::parse("tanh").name(), "tanh");
    Activation p{Activation::Kind::Polynomial, {1.0, 2.0, 3.0}};
    EXPECT_EQ(p(2.0), 17.0);
}

TEST(ffnn, cos_neuron_reproduces_the_graph_state_edge) {
    // cos((pi/2)(s_i + s_j) - pi/4) = (1, 1, 1, -1) / sqrt(2) on 0/1 inputs.
    FeedForwardSpec s;
    s.n_visible = 2;
    LayerWeights w(2, 1);
    w.set(0, 0, std::numbers::pi / 2);
    w.set(1, 0, std::numbers::pi / 2);
    s.layers.push_back({1, {std::numbers::pi / 4}, w, {Activation::parse("cos")}, {}});
    auto psi = network_state(s);
    auto ref = oracle::cz_graph_state(2, {{0, 1}});
    for(std::uint64_t v = 0; v < 4; ++v) EXPECT_NEAR(std::abs(psi[v] - ref[v] * std::sqrt(2.0)), 0, 1e-15);
}

namespace {

/// Two-layer network with |i - j| <= 1 masks; the output layer is one neuron at `center`.
FeedForwardSpec light_cone_net(int n, int center, std::uint64_t seed) {
    std::mt19937_64                        rng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    FeedForwardSpec                        s;
    s.n_visible = n;
    LayerWeights w1(n, n), w2(n, 1);
    for(int j = 0; j < n; ++j)
        for(int i = std::max(0, j - 1); i <= std::min(n - 1, j + 1); ++i) w1.set(i, j, {u(rng), u(rng)});
    for(int i = std::max(0, center - 1); i <= std::min(n - 1, center + 1); ++i) w2.set(i, 0, {u(rng), u(rng)});
    std::vector<cplx> b1(static_cast<std::size_t>(n));
    for(auto &z : b1) z = {u(rng), u(rng)};
    s.layers.push_back({n, b1, w1, std::vector<Activation>(static_cast<std::size_t>(n), Activation::parse("cos")), {}});
    s.layers.push_back({1, {cplx(u(rng), 0)}, w2, {Activation::parse("cosh")}, {center}});
    return s;
}

} // namespace

TEST(ffnn, output_neuron_only_sees_its_light_cone) {
    const int n = 9;
    for(int center : {1, 4, 7}) {
        auto            s = light_cone_net(n, center, static_cast<std::uint64_t>(center));
        std::mt19937_64 rng(3);
        for(int t = 0; t < 50; ++t) {
            std::uint64_t v = rng() & 511U, w = v;
            for(int site = 0; site < n; ++site)
                if(std::abs(site - center) > 2 && (rng() & 1U)) w ^= 1ULL << site;
            EXPECT_EQ(ffnn_amplitude(s, SpinConfiguration(n, v, Alphabet::ZeroOne)),
                      ffnn_amplitude(s, SpinConfiguration(n, w, Alphabet::ZeroOne)));
        }
        // A site inside the cone does matter.
        EXPECT_NE(ffnn_amplitude(s, SpinConfiguration(n, 0, Alphabet::ZeroOne)),
                  ffnn_amplitude(s, SpinConfiguration(n, 1ULL << center, Alphabet::ZeroOne)));
    }
}

TEST(dbm, zero_parameters) {
    auto o     = local_opts(4, 3, 1);
    o.kind     = NetworkKind::Dbm;
    o.n_hidden = 3;
    o.n_deep   = 2;
    auto s     = random_dbm(o);
    for(auto &z : s.visible_bias) z = 0;
    for(auto &z : s.shallow_bias) z = 0;
    for(auto &z : s.deep_bias) z = 0;
    for(int i = 0; i < 4; ++i)
        for(int j = 0; j < 3; ++j)
            if(s.w_vh.masked(i, j)) s.w_vh.set(i, j, 0);
    for(int j = 0; j < 3; ++j)
        for(int k = 0; k < 2; ++k)
            if(s.w_hg.masked(j, k)) s.w_hg.set(j, k, 0);
    for(std::uint64_t v = 0; v < 16; ++v) EXPECT_NEAR(std::abs(dbm_amplitude(s, SpinConfiguration(4, v, Alphabet::PlusMinus)) - 32.0), 0, 1e-12);
}

TEST(dbm, decoupled_deep_layer_reduces_to_rbm) {
    auto o            = local_opts(6, 3, 44);
    o.kind            = NetworkKind::Dbm;
    o.hidden_alphabet = Alphabet::PlusMinus;
    o.deep_alphabet   = Alphabet::ZeroOne;
    auto d            = random_dbm(o);
    d.w_hg            = LayerWeights(d.n_shallow, d.n_deep);
    RbmSpec r;
    r.n_visible       = d.n_visible;
    r.n_hidden        = d.n_shallow;
    r.visible_bias    = d.visible_bias;
    r.hidden_bias     = d.shallow_bias;
    r.weights         = d.w_vh;
    r.hidden_alphabet = d.shallow_alphabet;
    cplx deep         = 1;
    for(auto c : d.deep_bias) deep *= 1.0 + std::exp(c);
    for(std::uint64_t v = 0; v < 64; ++v) {
        SpinConfiguration c(6, v, Alphabet::PlusMinus);
        EXPECT_LT(rel_err(dbm_amplitude(d, c), rbm_amplitude(r, c) * deep), 1e-12);
    }
}

TEST(dbm, matches_full_hidden_enumeration) {
    for(auto h : {Alphabet::PlusMinus, Alphabet::ZeroOne}) {
        auto o            = local_opts(8, 3, 7);
        o.kind            = NetworkKind::Dbm;
        o.hidden_alphabet = h;
        o.deep_alphabet   = h;
        auto d            = random_dbm(o);
        auto b            = brute(d);
        for(std::uint64_t v = 0; v < 256; v += 5)
            EXPECT_LT(rel_err(dbm_amplitude(d, SpinConfiguration(8, v, Alphabet::PlusMinus)), b.amplitude(v)), 1e-10);
    }
}

TEST(dbm, log_amplitude_agrees) {
    auto o = local_opts(6, 3, 9);
    o.kind = NetworkKind::Dbm;
    auto d = random_dbm(o);
    for(std::uint64_t v = 0; v < 64; ++v) {
        SpinConfiguration c(6, v, Alphabet::PlusMinus);
        EXPECT_LT(rel_err(std::exp(dbm_log_amplitude(d, c)), dbm_amplitude(d, c)), 1e-11);
    }
}

TEST(dbm, deep_layer_cap) {
    auto o   = local_opts(4, 3, 1);
    o.kind   = NetworkKind::Dbm;
    o.n_deep = 21;
    EXPECT_THROW(random_dbm(o), ResourceError);
}

TEST(dbm, six_group_bound_holds) {
    for(int t = 0; t < 5; ++t) {
        auto o = local_opts(8, 3, 60 + static_cast<std::uint64_t>(t));
        o.kind = NetworkKind::Dbm;
        auto d   = random_dbm(o);
        auto psi = normalize(network_state(d));
        for(int len = 1; len < 8; ++len) {
            std::vector<int> a;
            for(int s = 0; s < len; ++s) a.push_back(s);
            Bipartition p(8, a);
            auto        g  = six_group(d, p);
            auto        sp = schmidt(psi, p);
            EXPECT_LE(numerical_rank(sp), 1 << g.bound_log2);
            EXPECT_LE(g.bound_log2, g.full_sum_log2);
            EXPECT_LE(renyi_entropy(sp, 2.0), g.bound_log2 * std::log(2.0) + 1e-9);
        }
    }
}

TEST(dbm, six_group_on_a_hand_built_chain) {
    // N = 4, shallow j on {j, j+1}, deep k on shallow {k}. Cut A = {0, 1}.
    DbmSpec d;
    d.n_visible = d.n_shallow = d.n_deep = 4;
    d.visible_bias = d.shallow_bias = d.deep_bias = std::vector<cplx>(4, 0.1);
    d.w_vh = LayerWeights(4, 4);
    d.w_hg = LayerWeights(4, 4);
    for(int j = 0; j < 3; ++j) {
        d.w_vh.set(j, j, 0.3);
        d.w_vh.set(j + 1, j, 0.2);
    }
    for(int k = 0; k < 4; ++k) d.w_hg.set(k, k, 0.5);
    auto g = six_group(d, Bipartition(4, {0, 1}));
    // Shallow 1 straddles (visibles 1, 2); deep 1 hangs off it on the left.
    EXPECT_EQ(g.c_bd, (std::vector<int>{1}));
    EXPECT_EQ(g.a3, (std::vector<int>{1}));
    EXPECT_EQ(g.ac3, (std::vector<int>{2}));
    EXPECT_EQ(g.b3, (std::vector<int>{1}));
    EXPECT_TRUE(g.bc3.empty());
    EXPECT_EQ(g.bound_log2, 2);
}

TEST(dbm, six_group_needs_deep_positions) {
    auto o = local_opts(4, 3, 2);
    o.kind = NetworkKind::Dbm;
    auto d = random_dbm(o);
    d.deep_positions.assign(4, std::nullopt);
    EXPECT_THROW(six_group(d, Bipartition(4, {0})), ConfigError);
}

TEST(random_network, deterministic_for_a_seed) {
    auto o = local_opts(10, 3, 123);
    EXPECT_EQ(std::get<RbmSpec>(random_network(o)), std::get<RbmSpec>(random_network(o)));
    auto p = o;
    p.seed = 124;
    EXPECT_NE(std::get<RbmSpec>(random_network(o)), std::get<RbmSpec>(random_network(p)));
    o.kind = NetworkKind::Dbm;
    EXPECT_EQ(std::get<DbmSpec>(random_network(o)), std::get<DbmSpec>(random_network(o)));
}

TEST(random_network, parameters_lie_in_the_requested_box) {
    auto o  = local_opts(10, 3, 5);
    o.scale = 0.25;
    auto s  = random_rbm(o);
    for(auto z : s.visible_bias) {
        EXPECT_LE(std::abs(z.real()), 0.25);
        EXPECT_LE(std::abs(z.imag()), 0.25);
    }
    for(int i = 0; i < 10; ++i)
        for(int j = 0; j < 10; ++j) EXPECT_LE(std::abs(s.weights.at(i, j).real()), 0.25);
}

TEST(random_network, dense_request_is_not_local) {
    RandomNetworkOptions o;
    o.n        = 10;
    o.locality = Locality::all_to_all();
    auto rep   = validate_k_local(random_network(o), LatticeGeometry::chain(10, Boundary::Periodic), 1.0);
    EXPECT_FALSE(rep.is_local);
    EXPECT_EQ(rep.K, 10);
}
