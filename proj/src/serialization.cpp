#include "qnnent/serialization.hpp"

#include "qnnent/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace qnnent {

using nlohmann::json;

namespace {

// A JSON value plus the path that led to it, so every complaint names its field.
class Node {
  public:
    Node(const json &j, std::string path) : j_(j), path_(std::move(path)) {}

    [[nodiscard]] const json        &raw() const { return j_; }
    [[nodiscard]] const std::string &path() const { return path_; }

    [[noreturn]] void fail(const std::string &what) const { throw SchemaError(path_, what); }

    [[nodiscard]] bool has(const char *key) const { return j_.is_object() && j_.contains(key) && !j_.at(key).is_null(); }

    [[nodiscard]] Node at(const char *key) const {
        if(!j_.is_object()) fail("expected an object");
        if(!j_.contains(key)) throw SchemaError(path_ + "." + key, "missing required field");
        return {j_.at(key), path_ + "." + key};
    }
    [[nodiscard]] Node at(std::size_t i) const { return {j_.at(i), path_ + "[" + std::to_string(i) + "]"}; }

    std::size_t array_size(std::optional<std::size_t> expected = std::nullopt) const {
        if(!j_.is_array()) fail("expected an array");
        if(expected && j_.size() != *expected)
            fail("expected " + std::to_string(*expected) + " entries, found " + std::to_string(j_.size()));
        return j_.size();
    }

    [[nodiscard]] int integer(int lo, int hi) const {
        if(!j_.is_number_integer()) fail("expected an integer");
        auto v = j_.get<long long>();
        if(v < lo || v > hi) fail("value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        return static_cast<int>(v);
    }

    [[nodiscard]] double real() const {
        if(!j_.is_number()) fail("expected a number");
        double v = j_.get<double>();
        if(!std::isfinite(v)) fail("non-finite number");
        return v;
    }

    [[nodiscard]] std::string string() const {
        if(!j_.is_string()) fail("expected a string");
        return j_.get<std::string>();
    }

    /// A number, or [re, im].
    [[nodiscard]] cplx complex() const {
        if(j_.is_number()) return {real(), 0.0};
        if(j_.is_array() && j_.size() == 2) return {at(std::size_t{0}).real(), at(std::size_t{1}).real()};
        fail("expected a number or a [re, im] pair");
    }

    [[nodiscard]] std::vector<cplx> complex_vector(std::size_t n) const {
        array_size(n);
        std::vector<cplx> out(n);
        for(std::size_t i = 0; i < n; ++i) out[i] = at(i).complex();
        return out;
    }

    [[nodiscard]] std::vector<std::optional<int>> positions(std::size_t n, int n_sites) const {
        array_size(n);
        std::vector<std::optional<int>> out(n);
        for(std::size_t i = 0; i < n; ++i) {
            if(j_.at(i).is_null()) continue;
            out[i] = at(i).integer(0, n_sites - 1);
        }
        return out;
    }

  private:
    const json &j_;
    std::string path_;
};

std::vector<cplx> optional_bias(const Node &n, const char *key, int size) {
    if(!n.has(key)) return std::vector<cplx>(static_cast<std::size_t>(size));
    return n.at(key).complex_vector(static_cast<std::size_t>(size));
}

LayerWeights read_weights(const Node &n, const char *key, const char *mask_key, int rows, int cols) {
    LayerWeights w(rows, cols);
    Node         wn = n.at(key);
    wn.array_size(static_cast<std::size_t>(rows));
    std::optional<Node> mn;
    if(n.has(mask_key)) {
        mn.emplace(n.at(mask_key));
        mn->array_size(static_cast<std::size_t>(rows));
    }
    for(int i = 0; i < rows; ++i) {
        Node row = wn.at(static_cast<std::size_t>(i));
        row.array_size(static_cast<std::size_t>(cols));
        std::optional<Node> mrow;
        if(mn) {
            mrow.emplace(mn->at(static_cast<std::size_t>(i)));
            mrow->array_size(static_cast<std::size_t>(cols));
        }
        for(int j = 0; j < cols; ++j) {
            Node cell = row.at(static_cast<std::size_t>(j));
            cplx v    = cell.complex();
            bool m    = v != cplx{};
            if(mrow) {
                m = mrow->at(static_cast<std::size_t>(j)).integer(0, 1) == 1;
                if(!m && v != cplx{}) cell.fail("weight is nonzero but masked out");
            }
            w.set_raw(i, j, v, m);
        }
    }
    return w;
}

Alphabet read_alphabet(const Node &n, const char *key, Alphabet fallback) {
    if(!n.has("alphabets")) return fallback;
    Node a = n.at("alphabets");
    if(!a.has(key)) return fallback;
    Node v = a.at(key);
    try {
        return parse_alphabet(v.string());
    } catch(const SchemaError &) {
        throw;
    } catch(const InputError &e) {
        v.fail(e.what());
    }
}

LatticeGeometry read_lattice(const Node &n) {
    std::string kind = n.at("kind").string();
    Node        dims = n.at("dims");
    Boundary    b    = Boundary::Periodic;
    if(n.has("boundary")) {
        std::string s = n.at("boundary").string();
        if(s == "open")
            b = Boundary::Open;
        else if(s != "periodic")
            n.at("boundary").fail("expected \"periodic\" or \"open\"");
    }
    if(kind == "chain") {
        dims.array_size(1);
        return LatticeGeometry::chain(dims.at(std::size_t{0}).integer(1, 63), b);
    }
    if(kind == "square") {
        dims.array_size(2);
        return LatticeGeometry::square(dims.at(std::size_t{0}).integer(1, 63), dims.at(std::size_t{1}).integer(1, 63), b);
    }
    if(kind == "edge") {
        dims.array_size(1);
        if(b != Boundary::Periodic) n.at("boundary").fail("edge lattices are always periodic");
        return LatticeGeometry::torus_edges(dims.at(std::size_t{0}).integer(1, 5));
    }
    n.at("kind").fail("expected \"chain\", \"square\" or \"edge\"");
}

Activation read_activation(const Node &n) {
    if(n.raw().is_string()) {
        try {
            return Activation::parse(n.string());
        } catch(const Error &e) {
            n.fail(e.what());
        }
    }
    if(!n.raw().is_object()) n.fail("expected an activation name or object");
    Activation a;
    try {
        a = Activation::parse(n.at("kind").string());
    } catch(const SchemaError &) {
        throw;
    } catch(const Error &e) {
        n.at("kind").fail(e.what());
    }
    if(a.kind == Activation::Kind::Polynomial) {
        Node c   = n.at("coeffs");
        a.coeffs = c.complex_vector(c.array_size());
    }
    return a;
}

RbmSpec read_rbm(const Node &n) {
    RbmSpec s;
    s.n_visible        = n.at("n_visible").integer(1, 63);
    s.n_hidden         = n.at("n_hidden").integer(0, 4096);
    s.visible_alphabet = read_alphabet(n, "visible", Alphabet::PlusMinus);
    s.hidden_alphabet  = read_alphabet(n, "hidden", Alphabet::PlusMinus);
    s.visible_bias     = optional_bias(n, "visible_bias", s.n_visible);
    s.hidden_bias      = optional_bias(n, "hidden_bias", s.n_hidden);
    s.weights          = read_weights(n, "weights", "mask", s.n_visible, s.n_hidden);
    if(n.has("hidden_positions")) s.hidden_positions = n.at("hidden_positions").positions(static_cast<std::size_t>(s.n_hidden), s.n_visible);
    return s;
}

DbmSpec read_dbm(const Node &n) {
    DbmSpec s;
    s.n_visible        = n.at("n_visible").integer(1, 63);
    s.n_shallow        = n.at("n_shallow").integer(0, 4096);
    s.n_deep           = n.at("n_deep").integer(0, 4096);
    s.visible_alphabet = read_alphabet(n, "visible", Alphabet::PlusMinus);
    s.shallow_alphabet = read_alphabet(n, "shallow", Alphabet::ZeroOne);
    s.deep_alphabet    = read_alphabet(n, "deep", Alphabet::ZeroOne);
    s.visible_bias     = optional_bias(n, "visible_bias", s.n_visible);
    s.shallow_bias     = optional_bias(n, "shallow_bias", s.n_shallow);
    s.deep_bias        = optional_bias(n, "deep_bias", s.n_deep);
    s.w_vh             = read_weights(n, "w_vh", "mask_vh", s.n_visible, s.n_shallow);
    s.w_hg             = read_weights(n, "w_hg", "mask_hg", s.n_shallow, s.n_deep);
    if(n.has("shallow_positions"))
        s.shallow_positions = n.at("shallow_positions").positions(static_cast<std::size_t>(s.n_shallow), s.n_visible);
    if(n.has("deep_positions")) s.deep_positions = n.at("deep_positions").positions(static_cast<std::size_t>(s.n_deep), s.n_visible);
    return s;
}

FeedForwardSpec read_ffnn(const Node &n) {
    FeedForwardSpec s;
    s.n_visible        = n.at("n_visible").integer(1, 63);
    s.visible_alphabet = read_alphabet(n, "visible", Alphabet::ZeroOne);
    Node layers        = n.at("layers");
    std::size_t count  = layers.array_size();
    if(count == 0) layers.fail("needs at least one layer");
    int prev = s.n_visible;
    for(std::size_t l = 0; l < count; ++l) {
        Node                   ln = layers.at(l);
        FeedForwardSpec::Layer layer;
        layer.size    = ln.at("size").integer(1, 4096);
        layer.bias    = optional_bias(ln, "bias", layer.size);
        layer.weights = read_weights(ln, "weights", "mask", prev, layer.size);
        Node act      = ln.at("activation");
        if(act.raw().is_array()) {
            act.array_size(static_cast<std::size_t>(layer.size));
            for(int j = 0; j < layer.size; ++j) layer.activation.push_back(read_activation(act.at(static_cast<std::size_t>(j))));
        } else {
            layer.activation.assign(static_cast<std::size_t>(layer.size), read_activation(act));
        }
        if(ln.has("positions")) layer.positions = ln.at("positions").positions(static_cast<std::size_t>(layer.size), s.n_visible);
        prev = layer.size;
        s.layers.push_back(std::move(layer));
    }
    return s;
}

ClusterCover read_cover(const Node &n) {
    int         n_sites  = n.at("n_sites").integer(1, 63);
    Alphabet    alphabet = Alphabet::PlusMinus;
    if(n.has("alphabet")) {
        try {
            alphabet = parse_alphabet(n.at("alphabet").string());
        } catch(const SchemaError &) {
            throw;
        } catch(const InputError &e) {
            n.at("alphabet").fail(e.what());
        }
    }
    Node                      cn = n.at("clusters");
    std::vector<LocalCluster> clusters;
    for(std::size_t c = 0, m = cn.array_size(); c < m; ++c) {
        Node         node = cn.at(c);
        LocalCluster cl;
        Node         sites = node.at("sites");
        std::size_t  k     = sites.array_size();
        if(k == 0 || k > static_cast<std::size_t>(ClusterCover::max_cluster_size)) sites.fail("cluster size out of range");
        for(std::size_t i = 0; i < k; ++i) cl.sites.push_back(sites.at(i).integer(0, n_sites - 1));
        std::size_t       len = std::size_t{1} << k;
        Node              re  = node.at("table_re");
        re.array_size(len);
        std::vector<cplx> table(len);
        for(std::size_t i = 0; i < len; ++i) table[i] = re.at(i).real();
        if(node.has("table_im")) {
            Node im = node.at("table_im");
            im.array_size(len);
            for(std::size_t i = 0; i < len; ++i) table[i].imag(im.at(i).real());
        }
        cl.table = std::move(table);
        clusters.push_back(std::move(cl));
    }
    try {
        return {n_sites, alphabet, std::move(clusters)};
    } catch(const SchemaError &) {
        throw;
    } catch(const InputError &e) {
        cn.fail(e.what());
    }
}

SpecDocument read_document(const json &j) {
    Node root(j, "$");
    if(!j.is_object()) root.fail("expected an object");
    SpecDocument doc;
    std::string  kind = root.at("kind").string();
    if(kind == "rbm")
        doc.network = read_rbm(root);
    else if(kind == "dbm")
        doc.network = read_dbm(root);
    else if(kind == "ffnn")
        doc.network = read_ffnn(root);
    else if(kind == "cover")
        doc.cover.emplace(read_cover(root));
    else
        root.at("kind").fail("expected \"rbm\", \"dbm\", \"ffnn\" or \"cover\"");
    if(root.has("lattice")) {
        doc.lattice = read_lattice(root.at("lattice"));
        if(doc.lattice->size() != doc.n_sites())
            root.at("lattice").fail("lattice has " + std::to_string(doc.lattice->size()) + " sites, spec has " +
                                    std::to_string(doc.n_sites()));
    }
    if(root.has("eps")) {
        double eps = root.at("eps").real();
        if(eps < 0.0) root.at("eps").fail("locality radius must be >= 0");
        doc.eps = eps;
    }
    if(doc.network) {
        try {
            std::visit([](const auto &s) { s.validate(); }, *doc.network);
        } catch(const SchemaError &) {
            throw;
        } catch(const InputError &e) {
            root.fail(e.what());
        }
    }
    return doc;
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json vector_json(const std::vector<cplx> &v) {
    json out = json::array();
    for(const auto &z : v) out.push_back(complex_json(z));
    return out;
}

void put_weights(json &j, const char *key, const char *mask_key, const LayerWeights &w) {
    json wj = json::array(), mj = json::array();
    bool plain_mask = true; // mask equals "weight is nonzero"
    for(int i = 0; i < w.rows(); ++i) {
        json row = json::array(), mrow = json::array();
        for(int j2 = 0; j2 < w.cols(); ++j2) {
            row.push_back(complex_json(w.at(i, j2)));
            mrow.push_back(w.masked(i, j2) ? 1 : 0);
            plain_mask = plain_mask && (w.masked(i, j2) == (w.at(i, j2) != cplx{}));
        }
        wj.push_back(std::move(row));
        mj.push_back(std::move(mrow));
    }
    j[key] = std::move(wj);
    if(!plain_mask) j[mask_key] = std::move(mj);
}

json positions_json(const std::vector<std::optional<int>> &p) {
    json out = json::array();
    for(const auto &v : p) out.push_back(v ? json(*v) : json(nullptr));
    return out;
}

json lattice_json(const LatticeGeometry &g) {
    json out;
    auto dims = g.dims();
    if(g.kind() == LatticeKind::Edge) {
        out["kind"] = "edge";
        out["dims"] = {dims[0]};
    } else if(g.dimensionality() == 1) {
        out["kind"] = "chain";
        out["dims"] = {dims[0]};
    } else {
        out["kind"] = "square";
        out["dims"] = {dims[0], dims[1]};
    }
    out["boundary"] = g.boundary() == Boundary::Periodic ? "periodic" : "open";
    return out;
}

json activation_json(const Activation &a) {
    if(a.kind != Activation::Kind::Polynomial) return a.name();
    return json{{"kind", "polynomial"}, {"coeffs", vector_json(a.coeffs)}};
}

json network_json(const NetworkSpec &spec) {
    json j;
    if(const auto *r = std::get_if<RbmSpec>(&spec)) {
        j["kind"]         = "rbm";
        j["n_visible"]    = r->n_visible;
        j["n_hidden"]     = r->n_hidden;
        j["alphabets"]    = {{"visible", alphabet_name(r->visible_alphabet)}, {"hidden", alphabet_name(r->hidden_alphabet)}};
        j["visible_bias"] = vector_json(r->visible_bias);
        j["hidden_bias"]  = vector_json(r->hidden_bias);
        put_weights(j, "weights", "mask", r->weights);
        if(!r->hidden_positions.empty()) j["hidden_positions"] = positions_json(r->hidden_positions);
    } else if(const auto *d = std::get_if<DbmSpec>(&spec)) {
        j["kind"]         = "dbm";
        j["n_visible"]    = d->n_visible;
        j["n_shallow"]    = d->n_shallow;
        j["n_deep"]       = d->n_deep;
        j["alphabets"]    = {{"visible", alphabet_name(d->visible_alphabet)},
                             {"shallow", alphabet_name(d->shallow_alphabet)},
                             {"deep", alphabet_name(d->deep_alphabet)}};
        j["visible_bias"] = vector_json(d->visible_bias);
        j["shallow_bias"] = vector_json(d->shallow_bias);
        j["deep_bias"]    = vector_json(d->deep_bias);
        put_weights(j, "w_vh", "mask_vh", d->w_vh);
        put_weights(j, "w_hg", "mask_hg", d->w_hg);
        if(!d->shallow_positions.empty()) j["shallow_positions"] = positions_json(d->shallow_positions);
        if(!d->deep_positions.empty()) j["deep_positions"] = positions_json(d->deep_positions);
    } else {
        const auto &f  = std::get<FeedForwardSpec>(spec);
        j["kind"]      = "ffnn";
        j["n_visible"] = f.n_visible;
        j["alphabets"] = {{"visible", alphabet_name(f.visible_alphabet)}};
        json layers    = json::array();
        for(const auto &l : f.layers) {
            json lj;
            lj["size"] = l.size;
            lj["bias"] = vector_json(l.bias);
            put_weights(lj, "weights", "mask", l.weights);
            json acts = json::array();
            for(const auto &a : l.activation) acts.push_back(activation_json(a));
            lj["activation"] = std::move(acts);
            if(!l.positions.empty()) lj["positions"] = positions_json(l.positions);
            layers.push_back(std::move(lj));
        }
        j["layers"] = std::move(layers);
    }
    return j;
}

json cover_json(const ClusterCover &cover) {
    json j;
    j["kind"]     = "cover";
    j["n_sites"]  = cover.n_sites();
    j["alphabet"] = alphabet_name(cover.alphabet());
    json cl       = json::array();
    for(const auto &c : cover.clusters()) {
        json re = json::array(), im = json::array();
        for(const auto &z : c.table) {
            re.push_back(z.real());
            im.push_back(z.imag());
        }
        cl.push_back({{"sites", c.sites}, {"table_re", std::move(re)}, {"table_im", std::move(im)}});
    }
    j["clusters"] = std::move(cl);
    return j;
}

} // namespace

int SpecDocument::n_sites() const {
    if(network) return n_visible(*network);
    if(cover) return cover->n_sites();
    return 0;
}

LatticeGeometry SpecDocument::geometry() const {
    if(lattice) return *lattice;
    return LatticeGeometry::chain(n_sites(), Boundary::Periodic);
}

SpecDocument parse_spec(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch(const json::parse_error &e) {
        throw SchemaError("$", std::string("malformed JSON: ") + e.what());
    }
    return read_document(j);
}

SpecDocument load_spec(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if(!in) throw InputError("cannot open spec file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_spec(ss.str());
}

std::string dump_spec(const NetworkSpec &spec, const std::optional<LatticeGeometry> &lattice) {
    json j = network_json(spec);
    if(lattice) j["lattice"] = lattice_json(*lattice);
    return j.dump(2) + "\n";
}

std::string dump_cover(const ClusterCover &cover, const std::optional<LatticeGeometry> &lattice) {
    json j = cover_json(cover);
    if(lattice) j["lattice"] = lattice_json(*lattice);
    return j.dump(2) + "\n";
}

std::string dump_spec(const SpecDocument &doc) {
    json j = doc.network ? network_json(*doc.network) : cover_json(*doc.cover);
    if(doc.lattice) j["lattice"] = lattice_json(*doc.lattice);
    if(doc.eps) j["eps"] = *doc.eps;
    return j.dump(2) + "\n";
}

} // namespace qnnent
