#include "qnnent/networks.hpp"

#include "qnnent/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qnnent {

LayerWeights::LayerWeights(int rows, int cols)
    : rows_(rows), cols_(cols), w_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)),
      mask_(w_.size(), 0) {
    if(rows < 0 || cols < 0) throw InputError("negative layer size");
}

void LayerWeights::set(int i, int j, cplx w) { set_raw(i, j, w, true); }

void LayerWeights::set_raw(int i, int j, cplx w, bool mask) {
    if(i < 0 || i >= rows_ || j < 0 || j >= cols_) throw InputError("weight index out of range");
    w_[idx(i, j)]    = w;
    mask_[idx(i, j)] = mask ? 1 : 0;
}

std::vector<std::vector<int>> LayerWeights::upper_neighbors() const {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(cols_));
    for(int i = 0; i < rows_; ++i)
        for(int j = 0; j < cols_; ++j)
            if(connected(i, j)) out[static_cast<std::size_t>(j)].push_back(i);
    return out;
}

std::vector<std::vector<int>> LayerWeights::lower_neighbors() const {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(rows_));
    for(int i = 0; i < rows_; ++i)
        for(int j = 0; j < cols_; ++j)
            if(connected(i, j)) out[static_cast<std::size_t>(i)].push_back(j);
    return out;
}

void LayerWeights::validate(const std::string &what) const {
    for(std::size_t k = 0; k < w_.size(); ++k) {
        if(!mask_[k] && w_[k] != cplx{}) throw InputError(what + ": masked-out weight is nonzero");
        if(!std::isfinite(w_[k].real()) || !std::isfinite(w_[k].imag())) throw InputError(what + ": non-finite weight");
    }
}

namespace {

void check_vec(const std::vector<cplx> &v, int n, const std::string &what) {
    if(static_cast<int>(v.size()) != n) throw InputError(what + " has length " + std::to_string(v.size()) + ", expected " + std::to_string(n));
    for(const auto &z : v)
        if(!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw InputError(what + " has a non-finite entry");
}

void check_positions(const std::vector<std::optional<int>> &p, int n, const std::string &what) {
    if(!p.empty() && static_cast<int>(p.size()) != n) throw InputError(what + " positions must list every neuron");
}

std::vector<std::optional<int>> resolved_positions(const std::vector<std::optional<int>> &p, int n, int n_sites) {
    if(!p.empty()) return p;
    std::vector<std::optional<int>> out(static_cast<std::size_t>(n));
    for(int j = 0; j < n && j < n_sites; ++j) out[static_cast<std::size_t>(j)] = j;
    return out;
}

std::vector<std::optional<int>> identity_positions(int n) {
    std::vector<std::optional<int>> out(static_cast<std::size_t>(n));
    for(int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = i;
    return out;
}

void check_dims(const SpinConfiguration &v, int n_visible, Alphabet a, const char *what) {
    if(v.n_sites() != n_visible) throw InputError(std::string(what) + ": configuration has " + std::to_string(v.n_sites()) +
                                                  " sites, network has " + std::to_string(n_visible) + " visibles");
    if(v.alphabet() != a) throw InputError(std::string(what) + ": alphabet mismatch");
}

} // namespace

void RbmSpec::validate() const {
    if(n_visible < 1 || n_hidden < 0) throw InputError("rbm: bad layer sizes");
    check_vec(visible_bias, n_visible, "rbm visible bias");
    check_vec(hidden_bias, n_hidden, "rbm hidden bias");
    if(weights.rows() != n_visible || weights.cols() != n_hidden) throw InputError("rbm: weight matrix shape mismatch");
    weights.validate("rbm weights");
    check_positions(hidden_positions, n_hidden, "rbm hidden");
}

void FeedForwardSpec::validate() const {
    if(n_visible < 1) throw InputError("ffnn: no inputs");
    if(layers.empty()) throw InputError("ffnn: needs at least one non-input layer");
    int prev = n_visible;
    for(std::size_t l = 0; l < layers.size(); ++l) {
        const auto &layer = layers[l];
        std::string what  = "ffnn layer " + std::to_string(l + 1);
        if(layer.size < 1) throw InputError(what + ": empty layer");
        check_vec(layer.bias, layer.size, what + " bias");
        if(layer.weights.rows() != prev || layer.weights.cols() != layer.size) throw InputError(what + ": weight shape mismatch");
        layer.weights.validate(what);
        if(static_cast<int>(layer.activation.size()) != layer.size) throw InputError(what + ": one activation per neuron required");
        check_positions(layer.positions, layer.size, what);
        prev = layer.size;
    }
}

void DbmSpec::validate() const {
    if(n_visible < 1 || n_shallow < 0 || n_deep < 0) throw InputError("dbm: bad layer sizes");
    check_vec(visible_bias, n_visible, "dbm visible bias");
    check_vec(shallow_bias, n_shallow, "dbm shallow bias");
    check_vec(deep_bias, n_deep, "dbm deep bias");
    if(w_vh.rows() != n_visible || w_vh.cols() != n_shallow) throw InputError("dbm: visible-shallow shape mismatch");
    if(w_hg.rows() != n_shallow || w_hg.cols() != n_deep) throw InputError("dbm: shallow-deep shape mismatch");
    w_vh.validate("dbm visible-shallow weights");
    w_hg.validate("dbm shallow-deep weights");
    check_positions(shallow_positions, n_shallow, "dbm shallow");
    check_positions(deep_positions, n_deep, "dbm deep");
}

cplx hidden_factor(cplx theta, Alphabet hidden) {
    return hidden == Alphabet::PlusMinus ? 2.0 * std::cosh(theta) : 1.0 + std::exp(theta);
}

cplx log_hidden_factor(cplx theta, Alphabet hidden) {
    if(hidden == Alphabet::PlusMinus) {
        // 2 cosh t = e^{+-t} (1 + e^{-+2t})
        if(theta.real() >= 0.0) return theta + std::log(1.0 + std::exp(-2.0 * theta));
        return -theta + std::log(1.0 + std::exp(2.0 * theta));
    }
    if(theta.real() > 0.0) return theta + std::log(1.0 + std::exp(-theta));
    return std::log(1.0 + std::exp(theta));
}

namespace {

cplx rbm_theta(const RbmSpec &spec, const SpinConfiguration &v, int j) {
    cplx t = spec.hidden_bias[static_cast<std::size_t>(j)];
    for(int i = 0; i < spec.n_visible; ++i)
        if(spec.weights.masked(i, j)) t += spec.weights.at(i, j) * static_cast<double>(v.value(i));
    return t;
}

cplx visible_exponent(const std::vector<cplx> &a, const SpinConfiguration &v) {
    cplx s{};
    for(int i = 0; i < v.n_sites(); ++i) s += a[static_cast<std::size_t>(i)] * static_cast<double>(v.value(i));
    return s;
}

} // namespace

cplx rbm_amplitude(const RbmSpec &spec, const SpinConfiguration &v) {
    check_dims(v, spec.n_visible, spec.visible_alphabet, "rbm_amplitude");
    if(needs_log_space(spec)) return std::exp(rbm_log_amplitude(spec, v));
    cplx prod = std::exp(visible_exponent(spec.visible_bias, v));
    for(int j = 0; j < spec.n_hidden; ++j) prod *= hidden_factor(rbm_theta(spec, v, j), spec.hidden_alphabet);
    return prod;
}

cplx rbm_log_amplitude(const RbmSpec &spec, const SpinConfiguration &v) {
    check_dims(v, spec.n_visible, spec.visible_alphabet, "rbm_log_amplitude");
    cplx s = visible_exponent(spec.visible_bias, v);
    for(int j = 0; j < spec.n_hidden; ++j) s += log_hidden_factor(rbm_theta(spec, v, j), spec.hidden_alphabet);
    return s;
}

bool needs_log_space(const RbmSpec &spec) {
    double vis = 0.0;
    for(const auto &a : spec.visible_bias) vis += std::abs(a.real());
    if(vis > 300.0) return true;
    for(int j = 0; j < spec.n_hidden; ++j) {
        double t = std::abs(spec.hidden_bias[static_cast<std::size_t>(j)].real());
        for(int i = 0; i < spec.n_visible; ++i) t += std::abs(spec.weights.at(i, j).real());
        if(t > 300.0) return true;
    }
    return false;
}

ClusterCover rbm_to_quasi_product(const RbmSpec &spec) {
    spec.validate();
    std::vector<LocalCluster> clusters;
    cplx                      constant{1.0, 0.0};
    std::vector<bool>         touched(static_cast<std::size_t>(spec.n_visible), false);
    auto                      neighbors = spec.weights.upper_neighbors();
    for(int j = 0; j < spec.n_hidden; ++j) {
        const auto &sites = neighbors[static_cast<std::size_t>(j)];
        cplx        b     = spec.hidden_bias[static_cast<std::size_t>(j)];
        if(sites.empty()) {
            constant *= hidden_factor(b, spec.hidden_alphabet);
            continue;
        }
        if(sites.size() > static_cast<std::size_t>(ClusterCover::max_cluster_size))
            throw InputError("hidden unit " + std::to_string(j) + " couples to more visibles than the cluster size bound");
        for(int s : sites) touched[static_cast<std::size_t>(s)] = true;
        clusters.push_back(tabulate_cluster(sites, spec.visible_alphabet, [&](std::span<const int> vals) {
            cplx t = b;
            for(std::size_t k = 0; k < sites.size(); ++k)
                t += spec.weights.at(sites[k], j) * static_cast<double>(vals[k]);
            return hidden_factor(t, spec.hidden_alphabet);
        }));
    }
    for(int i = 0; i < spec.n_visible; ++i) {
        cplx a = spec.visible_bias[static_cast<std::size_t>(i)];
        if(a == cplx{} && touched[static_cast<std::size_t>(i)]) continue;
        clusters.push_back(tabulate_cluster({i}, spec.visible_alphabet,
                                            [&](std::span<const int> vals) { return std::exp(a * static_cast<double>(vals[0])); }));
    }
    for(auto &z : clusters.front().table) z *= constant;
    return {spec.n_visible, spec.visible_alphabet, std::move(clusters)};
}

cplx Activation::operator()(cplx z) const {
    switch(kind) {
        case Kind::Cos: return std::cos(z);
        case Kind::Cosh: return std::cosh(z);
        case Kind::Exp: return std::exp(z);
        case Kind::Tanh: return std::tanh(z);
        case Kind::Polynomial: {
            cplx acc{};
            for(auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
            return acc;
        }
    }
    return {};
}

std::string Activation::name() const {
    switch(kind) {
        case Kind::Cos: return "cos";
        case Kind::Cosh: return "cosh";
        case Kind::Exp: return "exp";
        case Kind::Tanh: return "tanh";
        case Kind::Polynomial: return "polynomial";
    }
    return "?";
}

Activation Activation::parse(const std::string &name) {
    if(name == "cos") return {Kind::Cos, {}};
    if(name == "cosh") return {Kind::Cosh, {}};
    if(name == "exp") return {Kind::Exp, {}};
    if(name == "tanh") return {Kind::Tanh, {}};
    if(name == "polynomial") return {Kind::Polynomial, {}};
    throw ConfigError("unknown activation '" + name + "'");
}

cplx ffnn_amplitude(const FeedForwardSpec &spec, const SpinConfiguration &v) {
    check_dims(v, spec.n_visible, spec.visible_alphabet, "ffnn_amplitude");
    std::vector<cplx> x(static_cast<std::size_t>(spec.n_visible));
    for(int i = 0; i < spec.n_visible; ++i) x[static_cast<std::size_t>(i)] = static_cast<double>(v.value(i));
    for(const auto &layer : spec.layers) {
        std::vector<cplx> y(static_cast<std::size_t>(layer.size));
        for(int j = 0; j < layer.size; ++j) {
            cplx s = -layer.bias[static_cast<std::size_t>(j)];
            for(int i = 0; i < layer.weights.rows(); ++i)
                if(layer.weights.masked(i, j)) s += layer.weights.at(i, j) * x[static_cast<std::size_t>(i)];
            y[static_cast<std::size_t>(j)] = layer.activation[static_cast<std::size_t>(j)](s);
        }
        x = std::move(y);
    }
    cplx prod{1.0, 0.0};
    for(const auto &z : x) prod *= z;
    return prod;
}

DenseState network_state(const RbmSpec &spec) {
    spec.validate();
    if(needs_log_space(spec))
        return evaluate_all_log([&](const SpinConfiguration &c) { return rbm_log_amplitude(spec, c); }, spec.n_visible,
                                spec.visible_alphabet);
    return evaluate_all([&](const SpinConfiguration &c) { return rbm_amplitude(spec, c); }, spec.n_visible, spec.visible_alphabet);
}

DenseState network_state(const FeedForwardSpec &spec) {
    spec.validate();
    return evaluate_all([&](const SpinConfiguration &c) { return ffnn_amplitude(spec, c); }, spec.n_visible,
                        spec.visible_alphabet);
}

DenseState network_state(const NetworkSpec &spec) {
    return std::visit([](const auto &s) { return network_state(s); }, spec);
}

int n_visible(const NetworkSpec &spec) {
    return std::visit([](const auto &s) { return s.n_visible; }, spec);
}

namespace {
LayeredConnectivity::Link link_of(const LayerWeights &w, int lower, int upper) {
    LayeredConnectivity::Link link{lower, upper, {}};
    for(int i = 0; i < w.rows(); ++i)
        for(int j = 0; j < w.cols(); ++j)
            if(w.connected(i, j)) link.edges.emplace_back(i, j);
    return link;
}
} // namespace

LayeredConnectivity connectivity(const RbmSpec &spec) {
    LayeredConnectivity net;
    net.layer_names = {"visible", "hidden"};
    net.positions   = {identity_positions(spec.n_visible),
                       resolved_positions(spec.hidden_positions, spec.n_hidden, spec.n_visible)};
    net.links.push_back(link_of(spec.weights, 0, 1));
    return net;
}

LayeredConnectivity connectivity(const DbmSpec &spec) {
    LayeredConnectivity net;
    net.layer_names = {"visible", "shallow", "deep"};
    net.positions   = {identity_positions(spec.n_visible),
                       resolved_positions(spec.shallow_positions, spec.n_shallow, spec.n_visible),
                       resolved_positions(spec.deep_positions, spec.n_deep, spec.n_visible)};
    net.links.push_back(link_of(spec.w_vh, 0, 1));
    net.links.push_back(link_of(spec.w_hg, 1, 2));
    return net;
}

LayeredConnectivity connectivity(const FeedForwardSpec &spec) {
    LayeredConnectivity net;
    net.layer_names = {"input"};
    net.positions   = {identity_positions(spec.n_visible)};
    for(std::size_t l = 0; l < spec.layers.size(); ++l) {
        const auto &layer = spec.layers[l];
        net.layer_names.push_back("layer" + std::to_string(l + 1));
        net.positions.push_back(resolved_positions(layer.positions, layer.size, spec.n_visible));
        net.links.push_back(link_of(layer.weights, static_cast<int>(l), static_cast<int>(l + 1)));
    }
    return net;
}

LayeredConnectivity connectivity(const NetworkSpec &spec) {
    return std::visit([](const auto &s) { return connectivity(s); }, spec);
}

LocalityReport validate_k_local(const NetworkSpec &spec, const LatticeGeometry &g, double eps) {
    if(n_visible(spec) != g.size()) throw InputError("network visible count does not match the lattice");
    return validate_k_local(connectivity(spec), g, eps);
}

namespace {

class UniformSource {
  public:
    UniformSource(std::uint64_t seed, double scale) : gen_(seed), scale_(scale) {}
    double real() {
        double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
        return scale_ * (2.0 * u - 1.0);
    }
    cplx complex() {
        double re = real();
        double im = real();
        return {re, im};
    }
    std::vector<cplx> vec(int n) {
        std::vector<cplx> out(static_cast<std::size_t>(n));
        for(auto &z : out) z = complex();
        return out;
    }

  private:
    std::mt19937_64 gen_;
    double          scale_;
};

/// Lower-layer neurons coupled to an upper neuron positioned at `center`.
std::vector<int> local_support(const LatticeGeometry &g, int center, const Locality &loc) {
    std::vector<int> out;
    if(loc.dense) {
        out.resize(static_cast<std::size_t>(g.size()));
        for(int s = 0; s < g.size(); ++s) out[static_cast<std::size_t>(s)] = s;
        return out;
    }
    auto ball = g.epsilon_ball(center, loc.eps).members;
    int  n    = g.size();
    std::stable_sort(ball.begin(), ball.end(), [&](int a, int b) {
        int da = g.doubled_distance(center, a), db = g.doubled_distance(center, b);
        if(da != db) return da < db;
        return (a - center + n) % n < (b - center + n) % n;
    });
    if(static_cast<int>(ball.size()) > loc.K) ball.resize(static_cast<std::size_t>(loc.K));
    std::sort(ball.begin(), ball.end());
    return ball;
}

void fill_layer(LayerWeights &w, const std::vector<std::vector<int>> &support, UniformSource &rng) {
    std::vector<std::vector<bool>> on(static_cast<std::size_t>(w.rows()), std::vector<bool>(static_cast<std::size_t>(w.cols()), false));
    for(std::size_t j = 0; j < support.size(); ++j)
        for(int i : support[j]) on[static_cast<std::size_t>(i)][j] = true;
    for(int i = 0; i < w.rows(); ++i)
        for(int j = 0; j < w.cols(); ++j)
            if(on[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) w.set(i, j, rng.complex());
}

} // namespace

RbmSpec random_rbm(RandomNetworkOptions opts) {
    if(opts.n < 1) throw InputError("random network needs n >= 1");
    LatticeGeometry g = opts.geometry.value_or(LatticeGeometry::chain(opts.n, Boundary::Periodic));
    if(g.size() != opts.n) throw InputError("geometry size does not match n");
    if(!opts.locality.dense && (opts.locality.K < 0 || !(opts.locality.eps >= 0.0))) throw InputError("bad locality request");
    int           m = opts.n_hidden < 0 ? opts.n : opts.n_hidden;
    UniformSource rng(opts.seed, opts.scale);
    RbmSpec       spec;
    spec.n_visible        = opts.n;
    spec.n_hidden         = m;
    spec.visible_alphabet = opts.visible_alphabet;
    spec.hidden_alphabet  = opts.hidden_alphabet;
    spec.visible_bias     = rng.vec(opts.n);
    spec.hidden_bias      = rng.vec(m);
    spec.weights          = LayerWeights(opts.n, m);
    std::vector<std::vector<int>> support(static_cast<std::size_t>(m));
    for(int j = 0; j < m; ++j) support[static_cast<std::size_t>(j)] = local_support(g, j % opts.n, opts.locality);
    fill_layer(spec.weights, support, rng);
    if(m > opts.n) {
        spec.hidden_positions.resize(static_cast<std::size_t>(m));
        for(int j = 0; j < m; ++j) spec.hidden_positions[static_cast<std::size_t>(j)] = j % opts.n;
    }
    return spec;
}

DbmSpec random_dbm(RandomNetworkOptions opts) {
    if(opts.n < 1) throw InputError("random network needs n >= 1");
    LatticeGeometry g = opts.geometry.value_or(LatticeGeometry::chain(opts.n, Boundary::Periodic));
    if(g.size() != opts.n) throw InputError("geometry size does not match n");
    int m = opts.n_hidden < 0 ? opts.n : opts.n_hidden;
    int l = opts.n_deep < 0 ? opts.n : opts.n_deep;
    if(l > limits::max_deep) throw ResourceError("deep layer of " + std::to_string(l) + " exceeds the enumeration cap");
    UniformSource rng(opts.seed, opts.scale);
    DbmSpec       spec;
    spec.n_visible        = opts.n;
    spec.n_shallow        = m;
    spec.n_deep           = l;
    spec.visible_alphabet = opts.visible_alphabet;
    spec.shallow_alphabet = opts.hidden_alphabet;
    spec.deep_alphabet    = opts.deep_alphabet;
    spec.visible_bias     = rng.vec(opts.n);
    spec.shallow_bias     = rng.vec(m);
    spec.w_vh             = LayerWeights(opts.n, m);
    std::vector<std::vector<int>> support(static_cast<std::size_t>(m));
    for(int j = 0; j < m; ++j) support[static_cast<std::size_t>(j)] = local_support(g, j % opts.n, opts.locality);
    fill_layer(spec.w_vh, support, rng);
    spec.deep_bias = rng.vec(l);
    spec.w_hg      = LayerWeights(m, l);
    // Deep neuron k couples to the shallow units inside its own ball.
    std::vector<std::vector<int>> deep_support(static_cast<std::size_t>(l));
    for(int k = 0; k < l; ++k) {
        auto sup = local_support(g, k % opts.n, opts.locality);
        for(int s : sup)
            if(s < m) deep_support[static_cast<std::size_t>(k)].push_back(s);
    }
    fill_layer(spec.w_hg, deep_support, rng);
    if(m > opts.n) {
        spec.shallow_positions.resize(static_cast<std::size_t>(m));
        for(int j = 0; j < m; ++j) spec.shallow_positions[static_cast<std::size_t>(j)] = j % opts.n;
    }
    if(l > opts.n) {
        spec.deep_positions.resize(static_cast<std::size_t>(l));
        for(int k = 0; k < l; ++k) spec.deep_positions[static_cast<std::size_t>(k)] = k % opts.n;
    }
    return spec;
}

NetworkSpec random_network(const RandomNetworkOptions &opts) {
    if(opts.kind == NetworkKind::Dbm) return random_dbm(opts);
    return random_rbm(opts);
}

} // namespace qnnent
