// qnnent: build quasi-product / neural-network states, sweep entanglement
// entropies, check area-law bounds, and run the toric-code and torus-image examples.

#include "qnnent/analysis.hpp"
#include "qnnent/errors.hpp"
#include "qnnent/image.hpp"
#include "qnnent/kernels.hpp"
#include "qnnent/networks.hpp"
#include "qnnent/parallel.hpp"
#include "qnnent/quasi_product.hpp"
#include "qnnent/serialization.hpp"
#include "qnnent/toric.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <new>
#include <sstream>
#include <unistd.h>

#ifndef QNNENT_VERSION
#define QNNENT_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace qnnent;

namespace {

enum Exit { kOk = 0, kBoundFailure = 1, kInputError = 2, kResourceError = 3 };

// ---------------------------------------------------------------------------
// Output plumbing: every file goes through a temp file and a rename, and the
// manifest is written last.

struct Manifest {
    std::string                              command;
    std::vector<std::string>                 argv;
    std::vector<std::string>                 inputs;
    std::optional<std::uint64_t>             seed;
    std::vector<std::string>                 outputs;
    std::vector<std::pair<std::string, bool>> checks;
};

void atomic_write(const std::string &path, const std::string &bytes) {
    fs::path    target(path);
    std::string tmp = path + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if(!out) throw InputError("cannot open '" + tmp + "' for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if(!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw InputError("write to '" + tmp + "' failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if(ec) {
        fs::remove(tmp, ec);
        throw InputError("cannot rename output into '" + path + "'");
    }
}

std::string utc_now() {
    std::time_t t = std::time(nullptr);
    std::tm     tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_manifest(const std::string &primary, const Manifest &m, double seconds) {
    ordered_json j;
    j["command"]      = m.command;
    j["argv"]         = m.argv;
    j["inputs"]       = m.inputs;
    j["seed"]         = m.seed ? ordered_json(*m.seed) : ordered_json(nullptr);
    j["tool_version"] = QNNENT_VERSION;
    j["simd"]         = kernels::isa_name(kernels::active_isa());
    j["threads"]      = thread_count();
    j["finished_at"]  = utc_now();
    j["wall_clock_s"] = std::stod(format_real(seconds));
    j["outputs"]      = m.outputs;
    ordered_json checks = ordered_json::object();
    for(const auto &[name, ok] : m.checks) checks[name] = ok;
    j["checks"] = std::move(checks);
    atomic_write(primary + ".manifest.json", j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Small typed table with CSV/JSON emitters (12 significant digits for reals).

using Cell = ordered_json;

struct Table {
    std::vector<std::string>       columns;
    std::vector<std::vector<Cell>> rows;
};

std::string cell_text(const Cell &c) {
    if(c.is_null()) return "";
    if(c.is_boolean()) return c.get<bool>() ? "true" : "false";
    if(c.is_number_float()) return format_real(c.get<double>());
    if(c.is_number()) return c.dump();
    return c.get<std::string>();
}

Cell real_cell(double x) { return std::stod(format_real(x)); }

std::string render(const Table &t, const std::string &format) {
    std::ostringstream os;
    if(format == "json") {
        ordered_json rows = ordered_json::array();
        for(const auto &r : t.rows) {
            ordered_json obj;
            for(std::size_t k = 0; k < t.columns.size(); ++k) obj[t.columns[k]] = r[k];
            rows.push_back(std::move(obj));
        }
        os << rows.dump(2) << '\n';
        return os.str();
    }
    for(std::size_t k = 0; k < t.columns.size(); ++k) os << (k ? "," : "") << t.columns[k];
    os << '\n';
    for(const auto &r : t.rows) {
        for(std::size_t k = 0; k < r.size(); ++k) os << (k ? "," : "") << cell_text(r[k]);
        os << '\n';
    }
    return os.str();
}

std::string render(const EntropyReport &report, const std::string &format) {
    std::ostringstream os;
    if(format == "json")
        write_json(os, report);
    else
        write_csv(os, report);
    return os.str();
}

// Writes `bytes` to --out (atomically) or stdout.
void emit(const std::string &out, const std::string &bytes, Manifest &m) {
    if(out.empty()) {
        std::cout << bytes;
        return;
    }
    atomic_write(out, bytes);
    m.outputs.push_back(out);
}

// ---------------------------------------------------------------------------

std::vector<double> parse_alphas(const std::string &text) {
    std::vector<double> out;
    std::stringstream   ss(text);
    std::string         item;
    while(std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        double      a   = 0.0;
        try {
            a = std::stod(item, &pos);
        } catch(const std::exception &) {
            throw InputError("bad alpha '" + item + "'");
        }
        if(pos != item.size() || !(a > 0.0) || !std::isfinite(a)) throw InputError("alpha must be a positive number, got '" + item + "'");
        out.push_back(a);
    }
    if(out.empty()) throw InputError("no alpha values given");
    return out;
}

LatticeGeometry parse_lattice(const std::string &text, int n_sites) {
    if(text.empty() || text == "chain") return LatticeGeometry::chain(n_sites, Boundary::Periodic);
    if(text == "open-chain") return LatticeGeometry::chain(n_sites, Boundary::Open);
    auto colon = text.find(':');
    auto kind  = text.substr(0, colon);
    auto arg   = colon == std::string::npos ? std::string{} : text.substr(colon + 1);
    try {
        if(kind == "edge") return LatticeGeometry::torus_edges(std::stoi(arg));
        if(kind == "square" || kind == "open-square") {
            auto x = arg.find('x');
            return LatticeGeometry::square(std::stoi(arg.substr(0, x)), std::stoi(arg.substr(x + 1)),
                                           kind == "square" ? Boundary::Periodic : Boundary::Open);
        }
    } catch(const std::logic_error &) {
    }
    throw InputError("bad lattice '" + text + "' (chain, open-chain, square:WxH, open-square:WxH, edge:L)");
}

struct Demo {
    std::string                    name;
    DenseState                     state;
    std::optional<ClusterCover>    cover;
    LatticeGeometry                geometry;
};

// Periodic ring graph used by the graph-state demo.
std::vector<std::pair<int, int>> ring(int n) {
    std::vector<std::pair<int, int>> e;
    for(int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
    return e;
}

Demo make_demo(const std::string &name, int n, int L) {
    if(name == "cluster") {
        if(n < 3) throw InputError("cluster demo needs --n >= 3");
        limits::require_dense(n, "cluster demo");
        auto cover = build_cluster_state_1d(n);
        return {name, normalize(materialize(cover)), cover, LatticeGeometry::chain(n, Boundary::Periodic)};
    }
    if(name == "graph") {
        if(n < 3) throw InputError("graph demo needs --n >= 3");
        limits::require_dense(n, "graph demo");
        auto cover = build_graph_state(ring(n), n);
        return {name, normalize(materialize(cover)), cover, LatticeGeometry::chain(n, Boundary::Periodic)};
    }
    if(name == "toric") {
        if(L < 2) throw InputError("toric demo needs --L >= 2");
        limits::require_dense(2 * L * L, "toric demo");
        return {name, toric::toric_quasi_product_state(L), toric::build_toric_cover(L), LatticeGeometry::torus_edges(L)};
    }
    if(name == "circles") {
        if(L < 2) throw InputError("circles demo needs --L >= 2");
        limits::require_dense(2 * L * L, "circles demo");
        return {name, image::target_state(image::enumerate_cycles(L)), std::nullopt, LatticeGeometry::torus_edges(L)};
    }
    throw InputError("unknown demo '" + name + "' (cluster, toric, graph, circles)");
}

// ---------------------------------------------------------------------------

struct Globals {
    int         threads = 0;
    std::string format  = "csv";
};

struct BuildArgs {
    std::string spec, out, demo;
    int         n = 8, L = 2;
};

int cmd_build(const BuildArgs &a, const Globals &g, Manifest &m) {
    if(a.out.empty()) throw InputError("build needs --out");
    DenseState  state(0, {cplx{1.0}}, true);
    std::string summary;
    if(!a.demo.empty()) {
        auto d  = make_demo(a.demo, a.n, a.L);
        state   = std::move(d.state);
        summary = "demo " + d.name + " on " + d.geometry.describe();
    } else {
        if(a.spec.empty()) throw InputError("build needs --spec or --demo");
        m.inputs.push_back(a.spec);
        auto doc = load_spec(a.spec);
        limits::require_dense(doc.n_sites(), "build");
        if(doc.network) {
            state = normalize(network_state(*doc.network));
            if(doc.lattice) {
                double eps = doc.eps.value_or(1.0);
                auto   rep = validate_k_local(*doc.network, *doc.lattice, eps);
                std::cerr << "locality: " << (rep.is_local ? "local" : "not local") << " at eps=" << format_real(eps)
                          << ", K=" << rep.K << ", violations=" << rep.violations.size() << "\n";
                for(std::size_t i = 0; i < rep.violations.size() && i < 10; ++i) {
                    const auto &v = rep.violations[i];
                    std::cerr << "  " << v.lower_layer << "[" << v.lower << "] - " << v.upper_layer << "[" << v.upper
                              << "] distance " << format_real(v.distance) << "\n";
                }
                m.checks.emplace_back("k_local", rep.is_local);
            }
        } else {
            state = normalize(materialize(*doc.cover));
            std::cerr << "cover: " << doc.cover->clusters().size() << " clusters, K=" << doc.cover->K() << "\n";
        }
        summary = "spec " + a.spec;
    }
    std::ostringstream os;
    write_qns(os, state);
    atomic_write(a.out, os.str());
    m.outputs.push_back(a.out);
    (void)g;
    std::cerr << "wrote " << a.out << ": " << state.n_sites() << " sites, " << state.dim() << " amplitudes (" << summary << ")\n";
    return kOk;
}

struct EntropyArgs {
    std::string state, regions = "contiguous", alpha = "1", bounds, spec, out, demo, lattice;
    int         n = 8, L = 2;
};

int cmd_entropy(const EntropyArgs &a, const Globals &g, Manifest &m) {
    std::optional<DenseState>      state;
    std::optional<LatticeGeometry> geom;
    std::optional<ClusterCover>    demo_cover;
    std::optional<SpecDocument>    doc;
    auto                           alphas = parse_alphas(a.alpha);
    if(!a.spec.empty()) {
        m.inputs.push_back(a.spec);
        doc = load_spec(a.spec);
    }
    if(!a.demo.empty()) {
        auto d     = make_demo(a.demo, a.n, a.L);
        state      = std::move(d.state);
        geom       = d.geometry;
        demo_cover = d.cover;
    } else {
        if(a.state.empty()) throw InputError("entropy needs --state or --demo");
        m.inputs.push_back(a.state);
        state = load_qns(a.state);
        if(!state->normalized()) state = normalize(*state);
    }
    if(!a.lattice.empty())
        geom = parse_lattice(a.lattice, state->n_sites());
    else if(!geom)
        geom = doc ? doc->geometry() : LatticeGeometry::chain(state->n_sites(), Boundary::Periodic);
    if(geom->size() != state->n_sites())
        throw InputError("lattice has " + std::to_string(geom->size()) + " sites, state has " + std::to_string(state->n_sites()));
    if(doc && doc->n_sites() != state->n_sites()) throw InputError("spec and state sizes differ");

    std::optional<BoundContext> ctx;
    if(a.bounds == "cover") {
        if(doc && doc->cover)
            ctx = BoundContext::from_cover(*doc->cover);
        else if(doc && doc->network && std::holds_alternative<RbmSpec>(*doc->network))
            ctx = BoundContext::from_cover(rbm_to_quasi_product(std::get<RbmSpec>(*doc->network)));
        else if(!doc && demo_cover)
            ctx = BoundContext::from_cover(*demo_cover);
        else
            throw ConfigError("--bounds cover needs a cover or RBM --spec (or a demo with a cover)");
    } else if(a.bounds == "dbm") {
        if(!doc || !doc->network || !std::holds_alternative<DbmSpec>(*doc->network))
            throw ConfigError("--bounds dbm needs a DBM --spec");
        ctx = BoundContext::from_dbm(std::get<DbmSpec>(*doc->network));
    } else if(!a.bounds.empty()) {
        throw InputError("unknown bound source '" + a.bounds + "' (cover or dbm)");
    }

    auto regions = make_regions(*geom, parse_region_family(a.regions));
    auto report  = entropy_sweep(*state, regions, alphas, ctx ? &*ctx : nullptr);
    emit(a.out, render(report, g.format), m);

    int failures = 0;
    for(const auto &r : report.rows)
        if(r.rank_bound_log2 && !r.bound_ok) {
            if(failures < 20)
                std::cerr << "bound violated: region " << r.region << " alpha " << format_real(r.alpha) << " S=" << format_real(r.entropy_nats)
                          << " rank " << r.rank << " > 2^" << *r.rank_bound_log2 << "?\n";
            ++failures;
        }
    if(ctx) {
        m.checks.emplace_back("rank_bound", failures == 0);
        std::cerr << report.rows.size() << " rows, " << failures << " bound violations\n";
    }
    return failures == 0 ? kOk : kBoundFailure;
}

struct ToricArgs {
    int         L = 2;
    std::string sector, out;
    bool        topo = false;
};

int cmd_toric(const ToricArgs &a, const Globals &g, Manifest &m) {
    if(a.L < 2) throw InputError("toric needs --L >= 2");
    limits::require_dense(2 * a.L * a.L, "toric");
    std::vector<toric::Sector> sectors;
    if(a.sector.empty() || a.sector == "all")
        sectors = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    else
        sectors = {toric::parse_sector(a.sector)};

    auto                    stabs = toric::stabilizers(a.L);
    Table                   t{{"sector", "stabilizer", "expectation_re", "expectation_im", "fidelity", "pass"}, {}};
    std::vector<DenseState> states;
    bool                    all_pass = true;
    for(auto s : sectors) {
        states.push_back(toric::build_toric_ground(a.L, s));
        auto        rep   = verify_stabilizers(states.back(), stabs);
        std::string label = std::to_string(s.wx) + std::to_string(s.wy);
        for(const auto &c : rep.checks)
            t.rows.push_back({label, c.label, real_cell(c.expectation.real()), real_cell(c.expectation.imag()), real_cell(c.fidelity), c.pass});
        all_pass = all_pass && rep.all_pass;
    }
    m.checks.emplace_back("stabilizers", all_pass);

    std::ostringstream extra;
    if(states.size() > 1) {
        double worst = 0.0;
        for(std::size_t i = 0; i < states.size(); ++i)
            for(std::size_t j = i + 1; j < states.size(); ++j) worst = std::max(worst, std::abs(inner_product(states[i], states[j])));
        bool orth = worst <= 1e-10;
        extra << "sectors=" << states.size() << " max_overlap=" << format_real(worst) << " ground_state_degeneracy=" << (orth ? states.size() : 0)
              << "\n";
        m.checks.emplace_back("orthogonal_sectors", orth);
        all_pass = all_pass && orth;
    }
    if(a.topo) {
        auto fan = toric::fan_partition(a.L);
        auto te  = topological_entropy(states.front(), fan.a, fan.b, fan.c);
        extra << "s_top_printed=" << format_real(te.value) << " kitaev_preskill_convention=" << format_real(te.kitaev_preskill)
              << " ln2=" << format_real(std::log(2.0)) << "\n";
    }
    emit(a.out, render(t, g.format), m);
    std::cerr << extra.str() << (all_pass ? "all stabilizers pass\n" : "stabilizer check FAILED\n");
    return all_pass ? kOk : kBoundFailure;
}

struct ImageArgs {
    std::string   task = "circles", out, set_out;
    int           L = 2, pixels = 0, B = 1;
    std::uint64_t count = 0, seed = 0;
};

int cmd_image(const ImageArgs &a, const Globals &g, Manifest &m) {
    image::TargetSet         set;
    std::optional<LatticeGeometry> geom;
    if(a.task == "circles") {
        if(a.L < 2) throw InputError("circles needs --L >= 2");
        limits::require_dense(2 * a.L * a.L, "circles");
        set  = image::enumerate_cycles(a.L);
        geom = LatticeGeometry::torus_edges(a.L);
        std::cerr << "cycles(" << a.L << "): " << set.size() << " images\n";
    } else if(a.task == "random") {
        int n = a.pixels > 0 ? a.pixels : 2 * a.L * a.L;
        if(n < 2) throw InputError("random task needs at least 2 pixels");
        limits::require_dense(n, "random image set");
        if(a.count == 0) throw InputError("random task needs --count >= 1");
        set = image::random_target_set(n, a.count, a.seed);
        m.seed = a.seed;
        if(a.pixels == 0) {
            set.L = a.L;
            geom  = LatticeGeometry::torus_edges(a.L);
        } else {
            geom = LatticeGeometry::chain(n, Boundary::Periodic);
        }
        std::cerr << set.provenance << ": " << set.size() << " images over " << n << " pixels\n";
    } else {
        throw InputError("unknown image task '" + a.task + "' (circles or random)");
    }
    if(!a.set_out.empty()) {
        std::ostringstream os;
        image::write_image_set(os, set);
        atomic_write(a.set_out, os.str());
        m.outputs.push_back(a.set_out);
    }
    auto state = image::target_state(set);
    std::vector<Region> regions;
    if(geom->kind() == LatticeKind::Edge) {
        for(int h = 1; h <= a.L; ++h)
            for(int w = 1; w <= a.L; ++w)
                if(w != a.L || h != a.L) {
                    RegionFamily f;
                    f.kind   = RegionKind::Rectangle;
                    f.width  = w;
                    f.height = h;
                    auto r   = make_regions(*geom, f);
                    regions.insert(regions.end(), r.begin(), r.end());
                }
    } else {
        regions = make_regions(*geom, RegionFamily{});
    }
    auto ctx    = BoundContext::smooth(a.B);
    auto report = entropy_sweep(state, regions, {2.0}, &ctx);
    emit(a.out, render(report, g.format), m);
    int failures = 0;
    for(const auto &r : report.rows)
        if(!r.bound_ok) ++failures;
    std::cerr << regions.size() << " regions, " << failures << " bound violations (B=" << a.B << ")\n";
    // Random sets carry no smoothness assumption, so their bound column is a contrast, not a check.
    if(a.task == "random") return kOk;
    m.checks.emplace_back("smooth_rank_bound", failures == 0);
    return failures == 0 ? kOk : kBoundFailure;
}

} // namespace

int main(int argc, char **argv) {
    auto     start = std::chrono::steady_clock::now();
    Manifest manifest;
    for(int i = 0; i < argc; ++i) manifest.argv.emplace_back(argv[i]);

    CLI::App app{"Entanglement of quasi-product and neural-network quantum states"};
    app.set_version_flag("--version", QNNENT_VERSION);
    app.require_subcommand(1);
    Globals g;
    app.add_option("--threads", g.threads, "worker threads (default: all cores)")->check(CLI::PositiveNumber);
    app.add_option("--format", g.format, "report format")->check(CLI::IsMember({"csv", "json"}));

    BuildArgs ba;
    auto     *build = app.add_subcommand("build", "materialize a state from a network or cover spec");
    build->add_option("--spec", ba.spec, "network/cover spec JSON");
    build->add_option("--out", ba.out, "output .qns file");
    build->add_option("--demo", ba.demo, "cluster | toric | graph | circles");
    build->add_option("--n", ba.n, "sites for chain demos");
    build->add_option("--L", ba.L, "torus side for toric/circles demos");

    EntropyArgs ea;
    auto       *entropy = app.add_subcommand("entropy", "Renyi entropy sweep over a region family");
    entropy->add_option("--state", ea.state, ".qns state file");
    entropy->add_option("--regions", ea.regions, "contiguous | connected | rect:WxH");
    entropy->add_option("--alpha", ea.alpha, "comma-separated Renyi indices");
    entropy->add_option("--bounds", ea.bounds, "cover | dbm");
    entropy->add_option("--spec", ea.spec, "spec supplying the bound context and lattice");
    entropy->add_option("--lattice", ea.lattice, "chain | open-chain | square:WxH | open-square:WxH | edge:L");
    entropy->add_option("--out", ea.out, "report file (default stdout)");
    entropy->add_option("--demo", ea.demo, "cluster | toric | graph | circles");
    entropy->add_option("--n", ea.n, "sites for chain demos");
    entropy->add_option("--L", ea.L, "torus side for toric/circles demos");

    ToricArgs ta;
    auto     *toric_cmd = app.add_subcommand("toric", "toric-code sectors, stabilizers and topological entropy");
    toric_cmd->add_option("--L", ta.L, "torus side")->required();
    toric_cmd->add_option("--sector", ta.sector, "00 | 01 | 10 | 11 | all");
    toric_cmd->add_flag("--topo", ta.topo, "report the seven-term topological entropy");
    toric_cmd->add_option("--out", ta.out, "stabilizer table (default stdout)");

    ImageArgs ia;
    auto     *image_cmd = app.add_subcommand("image", "torus images: circle sets and random target sets");
    image_cmd->add_option("--task", ia.task, "circles | random");
    image_cmd->add_option("--L", ia.L, "torus side");
    image_cmd->add_option("--pixels", ia.pixels, "pixel count for random sets without torus layout");
    image_cmd->add_option("--count", ia.count, "random set size");
    image_cmd->add_option("--seed", ia.seed, "random seed");
    image_cmd->add_option("--B", ia.B, "boundary range in the (B+1)*Area bound");
    image_cmd->add_option("--out", ia.out, "entropy report (default stdout)");
    image_cmd->add_option("--set-out", ia.set_out, "write the image set file");

    for(auto *sub : {build, entropy, toric_cmd, image_cmd}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch(const CLI::Success &e) {
        return app.exit(e);
    } catch(const CLI::ParseError &e) {
        app.exit(e);
        return kInputError;
    }

    int         code    = kOk;
    std::string primary;
    try {
        if(g.threads > 0) set_thread_count(g.threads);
        if(build->parsed()) {
            manifest.command = "build";
            primary          = ba.out;
            code             = cmd_build(ba, g, manifest);
        } else if(entropy->parsed()) {
            manifest.command = "entropy";
            primary          = ea.out;
            code             = cmd_entropy(ea, g, manifest);
        } else if(toric_cmd->parsed()) {
            manifest.command = "toric";
            primary          = ta.out;
            code             = cmd_toric(ta, g, manifest);
        } else if(image_cmd->parsed()) {
            manifest.command = "image";
            primary          = ia.out.empty() ? ia.set_out : ia.out;
            code             = cmd_image(ia, g, manifest);
        }
        if(!primary.empty()) {
            double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            write_manifest(primary, manifest, secs);
        }
    } catch(const SchemaError &e) {
        std::cerr << "error: schema: " << e.what() << "\n";
        return kInputError;
    } catch(const ResourceError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kResourceError;
    } catch(const std::bad_alloc &) {
        std::cerr << "error: out of memory\n";
        return kResourceError;
    } catch(const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch(const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return code;
}
