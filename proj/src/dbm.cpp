#include "qnnent/errors.hpp"
#include "qnnent/networks.hpp"
#include "qnnent/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qnnent {

namespace {

void check_config(const DbmSpec &spec, const SpinConfiguration &v) {
    if(v.n_sites() != spec.n_visible)
        throw InputError("dbm: configuration has " + std::to_string(v.n_sites()) + " sites, network has " +
                         std::to_string(spec.n_visible) + " visibles");
    if(v.alphabet() != spec.visible_alphabet) throw InputError("dbm: alphabet mismatch");
}

// Deep neurons that couple to at least one shallow unit; the others contribute a
// constant factor and are not enumerated.
struct DeepPlan {
    std::vector<int> active;
    cplx             log_constant{};
};

DeepPlan plan_deep(const DbmSpec &spec) {
    DeepPlan plan;
    auto     lower = spec.w_hg.upper_neighbors();
    for(int k = 0; k < spec.n_deep; ++k) {
        if(lower[static_cast<std::size_t>(k)].empty())
            plan.log_constant += log_hidden_factor(spec.deep_bias[static_cast<std::size_t>(k)], spec.deep_alphabet);
        else
            plan.active.push_back(k);
    }
    if(static_cast<int>(plan.active.size()) > limits::max_deep)
        throw ResourceError("dbm: " + std::to_string(plan.active.size()) + " coupled deep neurons exceed the enumeration cap of " +
                            std::to_string(limits::max_deep));
    return plan;
}

// Shallow pre-activations from the visible layer alone.
std::vector<cplx> shallow_base(const DbmSpec &spec, const SpinConfiguration &v) {
    std::vector<cplx> theta(spec.shallow_bias);
    for(int i = 0; i < spec.n_visible; ++i) {
        double vi = v.value(i);
        if(vi == 0.0) continue;
        for(int j = 0; j < spec.n_shallow; ++j)
            if(spec.w_vh.masked(i, j)) theta[static_cast<std::size_t>(j)] += spec.w_vh.at(i, j) * vi;
    }
    return theta;
}

// log of e^{c.g} prod_j Gamma_j(theta_j + sum_k W'_jk g_k) for one deep assignment.
cplx deep_term_log(const DbmSpec &spec, const DeepPlan &plan, const std::vector<cplx> &base, std::uint64_t g_bits) {
    std::vector<cplx> theta(base);
    cplx              s{};
    for(std::size_t t = 0; t < plan.active.size(); ++t) {
        int    k  = plan.active[t];
        double gk = alphabet_value((g_bits >> t) & 1U, spec.deep_alphabet);
        if(gk == 0.0) continue;
        s += spec.deep_bias[static_cast<std::size_t>(k)] * gk;
        for(int j = 0; j < spec.n_shallow; ++j)
            if(spec.w_hg.masked(j, k)) theta[static_cast<std::size_t>(j)] += spec.w_hg.at(j, k) * gk;
    }
    for(const auto &t : theta) s += log_hidden_factor(t, spec.shallow_alphabet);
    return s;
}

cplx deep_term(const DbmSpec &spec, const DeepPlan &plan, const std::vector<cplx> &base, std::uint64_t g_bits) {
    std::vector<cplx> theta(base);
    cplx              s{};
    for(std::size_t t = 0; t < plan.active.size(); ++t) {
        int    k  = plan.active[t];
        double gk = alphabet_value((g_bits >> t) & 1U, spec.deep_alphabet);
        if(gk == 0.0) continue;
        s += spec.deep_bias[static_cast<std::size_t>(k)] * gk;
        for(int j = 0; j < spec.n_shallow; ++j)
            if(spec.w_hg.masked(j, k)) theta[static_cast<std::size_t>(j)] += spec.w_hg.at(j, k) * gk;
    }
    cplx prod = std::exp(s);
    for(const auto &t : theta) prod *= hidden_factor(t, spec.shallow_alphabet);
    return prod;
}

cplx visible_part(const DbmSpec &spec, const SpinConfiguration &v) {
    cplx s{};
    for(int i = 0; i < spec.n_visible; ++i) s += spec.visible_bias[static_cast<std::size_t>(i)] * static_cast<double>(v.value(i));
    return s;
}

} // namespace

bool needs_log_space(const DbmSpec &spec) {
    double bound = 0.0;
    for(const auto &a : spec.visible_bias) bound += std::abs(a.real());
    for(const auto &c : spec.deep_bias) bound += std::abs(c.real());
    for(int j = 0; j < spec.n_shallow; ++j) {
        bound += std::abs(spec.shallow_bias[static_cast<std::size_t>(j)].real());
        for(int i = 0; i < spec.n_visible; ++i) bound += std::abs(spec.w_vh.at(i, j).real());
        for(int k = 0; k < spec.n_deep; ++k) bound += std::abs(spec.w_hg.at(j, k).real());
    }
    return bound > 300.0;
}

cplx dbm_amplitude(const DbmSpec &spec, const SpinConfiguration &v) {
    check_config(spec, v);
    if(needs_log_space(spec)) return std::exp(dbm_log_amplitude(spec, v));
    DeepPlan          plan = plan_deep(spec);
    auto              base = shallow_base(spec, v);
    std::vector<cplx> terms(std::uint64_t{1} << plan.active.size());
    for(std::uint64_t g = 0; g < terms.size(); ++g) terms[g] = deep_term(spec, plan, base, g);
    return std::exp(visible_part(spec, v) + plan.log_constant) * pairwise_sum(terms);
}

cplx dbm_log_amplitude(const DbmSpec &spec, const SpinConfiguration &v) {
    check_config(spec, v);
    DeepPlan          plan = plan_deep(spec);
    auto              base = shallow_base(spec, v);
    std::vector<cplx> logs(std::uint64_t{1} << plan.active.size());
    double            peak = -std::numeric_limits<double>::infinity();
    for(std::uint64_t g = 0; g < logs.size(); ++g) {
        logs[g] = deep_term_log(spec, plan, base, g);
        peak    = std::max(peak, logs[g].real());
    }
    for(auto &z : logs) z = std::exp(z - peak);
    cplx sum = pairwise_sum(logs);
    return visible_part(spec, v) + plan.log_constant + peak + std::log(sum);
}

DenseState network_state(const DbmSpec &spec) {
    spec.validate();
    if(needs_log_space(spec))
        return evaluate_all_log([&](const SpinConfiguration &c) { return dbm_log_amplitude(spec, c); }, spec.n_visible,
                                spec.visible_alphabet);
    return evaluate_all([&](const SpinConfiguration &c) { return dbm_amplitude(spec, c); }, spec.n_visible, spec.visible_alphabet);
}

SixGroupDecomposition six_group(const DbmSpec &spec, const Bipartition &part) {
    spec.validate();
    if(part.n_sites() != spec.n_visible) throw InputError("six_group: bipartition size does not match the network");
    auto              net       = connectivity(spec);
    const auto       &deep_pos  = net.positions[2];
    std::vector<bool> deep_left(static_cast<std::size_t>(spec.n_deep));
    for(int k = 0; k < spec.n_deep; ++k) {
        const auto &p = deep_pos[static_cast<std::size_t>(k)];
        if(!p) throw ConfigError("six_group: deep neuron " + std::to_string(k) + " has no lattice position");
        deep_left[static_cast<std::size_t>(k)] = part.contains(*p);
    }

    auto vis_of  = spec.w_vh.upper_neighbors(); // shallow j -> visibles
    auto deep_of = spec.w_hg.lower_neighbors(); // shallow j -> deep

    // Neuron ids: visibles 0..n-1, deep n..n+l-1.
    int  n     = spec.n_visible;
    auto left  = [&](int id) { return id < n ? part.contains(id) : static_cast<bool>(deep_left[static_cast<std::size_t>(id - n)]); };
    std::vector<std::vector<int>> members(static_cast<std::size_t>(spec.n_shallow));
    SixGroupDecomposition         out;
    std::vector<int>              group(static_cast<std::size_t>(n + spec.n_deep), 1);
    for(int j = 0; j < spec.n_shallow; ++j) {
        auto &m = members[static_cast<std::size_t>(j)];
        m       = vis_of[static_cast<std::size_t>(j)];
        for(int k : deep_of[static_cast<std::size_t>(j)]) m.push_back(n + k);
        bool any_l = false, any_r = false;
        for(int id : m) (left(id) ? any_l : any_r) = true;
        if(any_l && any_r) {
            out.c_bd.push_back(j);
            for(int id : m) group[static_cast<std::size_t>(id)] = 3;
        } else if(any_r) {
            out.c_ext.push_back(j);
        } else {
            out.c_int.push_back(j);
        }
    }
    for(int j = 0; j < spec.n_shallow; ++j) {
        const auto &m = members[static_cast<std::size_t>(j)];
        for(int id : m) {
            if(group[static_cast<std::size_t>(id)] == 3) continue;
            bool near3 = std::any_of(m.begin(), m.end(), [&](int o) {
                return o != id && group[static_cast<std::size_t>(o)] == 3 && left(o) == left(id);
            });
            if(near3) group[static_cast<std::size_t>(id)] = 2;
        }
    }
    auto place = [&](int id, std::vector<int> &g1, std::vector<int> &g2, std::vector<int> &g3, int local) {
        int g = group[static_cast<std::size_t>(id)];
        (g == 3 ? g3 : g == 2 ? g2 : g1).push_back(local);
    };
    for(int i = 0; i < n; ++i) {
        if(left(i))
            place(i, out.a1, out.a2, out.a3, i);
        else
            place(i, out.ac1, out.ac2, out.ac3, i);
    }
    for(int k = 0; k < spec.n_deep; ++k) {
        if(left(n + k))
            place(n + k, out.b1, out.b2, out.b3, k);
        else
            place(n + k, out.bc1, out.bc2, out.bc3, k);
    }
    auto sz = [](const std::vector<int> &v) { return static_cast<int>(v.size()); };
    out.bound_log2 = sz(out.b3) + sz(out.bc3) + std::min(sz(out.a3), sz(out.ac3));
    out.full_sum_log2 =
        sz(out.a2) + sz(out.a3) + sz(out.ac3) + sz(out.ac2) + sz(out.b2) + sz(out.b3) + sz(out.bc3) + sz(out.bc2);
    return out;
}

} // namespace qnnent
