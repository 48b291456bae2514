#pragma once

// Independent reference computations used by the tests. Nothing here calls the
// library's numerical routines; they are deliberately naive (explicit partial
// traces, brute-force hidden sums, GF(2) elimination) so a shared bug cannot hide.

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Vec  = std::vector<cplx>;

inline int spin(std::uint64_t bits, int site) { return ((bits >> site) & 1U) ? -1 : 1; }
inline int bit(std::uint64_t bits, int site) { return static_cast<int>((bits >> site) & 1U); }

inline double norm2(const Vec &v) {
    double s = 0;
    for(const auto &z : v) s += std::norm(z);
    return s;
}

inline Vec normalized(Vec v) {
    double n = std::sqrt(norm2(v));
    for(auto &z : v) z /= n;
    return v;
}

inline cplx overlap(const Vec &a, const Vec &b) {
    cplx s = 0;
    for(std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

/// |<a|b>|^2 / (<a|a><b|b>)
inline double fidelity(const Vec &a, const Vec &b) { return std::norm(overlap(a, b)) / (norm2(a) * norm2(b)); }

/// <psi| X^x Z^z |psi> for a normalized psi, where Z acts first.
inline cplx pauli_expectation(const Vec &psi, std::uint64_t xmask, std::uint64_t zmask) {
    cplx s = 0;
    for(std::uint64_t i = 0; i < psi.size(); ++i) {
        double sign = (std::popcount(i & zmask) & 1) ? -1.0 : 1.0;
        s += std::conj(psi[i ^ xmask]) * sign * psi[i];
    }
    return s;
}

/// Eigenvalues of rho_A = Tr_{A^c} |psi><psi|, built entry by entry.
inline std::vector<double> rho_eigenvalues(const Vec &psi, int n, const std::vector<int> &a) {
    std::vector<int> comp;
    for(int s = 0; s < n; ++s)
        if(std::find(a.begin(), a.end(), s) == a.end()) comp.push_back(s);
    auto join = [&](std::uint64_t ra, std::uint64_t rc) {
        std::uint64_t idx = 0;
        for(std::size_t k = 0; k < a.size(); ++k) idx |= ((ra >> k) & 1U) << a[k];
        for(std::size_t k = 0; k < comp.size(); ++k) idx |= ((rc >> k) & 1U) << comp[k];
        return idx;
    };
    const std::uint64_t da = std::uint64_t{1} << a.size(), dc = std::uint64_t{1} << comp.size();
    Eigen::MatrixXcd    rho = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(da), static_cast<Eigen::Index>(da));
    for(std::uint64_t r = 0; r < da; ++r)
        for(std::uint64_t c = 0; c < da; ++c) {
            cplx s = 0;
            for(std::uint64_t e = 0; e < dc; ++e) s += psi[join(r, e)] * std::conj(psi[join(c, e)]);
            rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = s;
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

inline double renyi_from_probs(const std::vector<double> &p, double alpha) {
    if(alpha == 1.0) {
        double s = 0;
        for(double x : p)
            if(x > 1e-300) s -= x * std::log(x);
        return s;
    }
    double acc = 0;
    for(double x : p)
        if(x > 1e-13) acc += std::pow(x, alpha); // eigensolver noise would dominate for alpha < 1
    return std::log(acc) / (1.0 - alpha);
}

/// Rank over GF(2) of rows given as bit vectors (at most 64 columns).
inline int gf2_rank(std::vector<std::uint64_t> rows) {
    int rank = 0;
    for(int col = 0; col < 64; ++col) {
        std::uint64_t m   = std::uint64_t{1} << col;
        auto          piv = std::find_if(rows.begin() + rank, rows.end(), [&](std::uint64_t r) { return r & m; });
        if(piv == rows.end()) continue;
        std::swap(*piv, rows[static_cast<std::size_t>(rank)]);
        for(std::size_t i = 0; i < rows.size(); ++i)
            if(static_cast<int>(i) != rank && (rows[i] & m)) rows[i] ^= rows[static_cast<std::size_t>(rank)];
        ++rank;
    }
    return rank;
}

/// A Pauli generator as X and Z support masks (signs are irrelevant for entropies).
struct Gen {
    std::uint64_t x = 0, z = 0;
};

/// Entanglement entropy of region A (in bits) of the stabilizer state generated by
/// `gens`: S_A = rank(G restricted to A) - |A|.
inline int stabilizer_entropy_bits(const std::vector<Gen> &gens, const std::vector<int> &a) {
    std::vector<std::uint64_t> rows;
    for(const auto &g : gens) {
        std::uint64_t r = 0;
        for(std::size_t k = 0; k < a.size(); ++k) {
            r |= ((g.x >> a[k]) & 1U) << (2 * k);
            r |= ((g.z >> a[k]) & 1U) << (2 * k + 1);
        }
        rows.push_back(r);
    }
    return gf2_rank(rows) - static_cast<int>(a.size());
}

/// Toric-code edges on an L x L torus written out from scratch: h(x,y) joins (x,y)-(x+1,y),
/// v(x,y) joins (x,y)-(x,y+1).
struct Torus {
    int L;
    int h(int x, int y) const { return 2 * (((y % L + L) % L) * L + ((x % L + L) % L)); }
    int v(int x, int y) const { return h(x, y) + 1; }
    std::uint64_t star(int x, int y) const {
        return (1ULL << h(x, y)) | (1ULL << h(x - 1, y)) | (1ULL << v(x, y)) | (1ULL << v(x, y - 1));
    }
    std::uint64_t plaquette(int x, int y) const {
        return (1ULL << h(x, y)) | (1ULL << h(x, y + 1)) | (1ULL << v(x, y)) | (1ULL << v(x + 1, y));
    }
    /// Vertex X stars, plaquette Z loops, and the two logical Z strings fixing the sector.
    std::vector<Gen> sector_generators() const {
        std::vector<Gen> g;
        for(int y = 0; y < L; ++y)
            for(int x = 0; x < L; ++x) {
                g.push_back({star(x, y), 0});
                g.push_back({0, plaquette(x, y)});
            }
        std::uint64_t row = 0, col = 0;
        for(int k = 0; k < L; ++k) {
            row |= 1ULL << h(k, 0);
            col |= 1ULL << v(0, k);
        }
        g.push_back({0, row});
        g.push_back({0, col});
        return g;
    }
};

/// Graph state by CZ phases on |+>^n: amplitude (-1)^{#edges with both ends 1}.
inline Vec cz_graph_state(int n, const std::vector<std::pair<int, int>> &edges) {
    Vec psi(std::size_t{1} << n);
    for(std::uint64_t i = 0; i < psi.size(); ++i) {
        int parity = 0;
        for(auto [a, b] : edges) parity ^= bit(i, a) & bit(i, b);
        psi[i] = parity ? -1.0 : 1.0;
    }
    return normalized(psi);
}

/// Explicit Boltzmann weights, hidden layers summed by enumeration.
struct BruteNet {
    int               n = 0, m = 0, l = 0;
    bool              pm_visible = true, pm_hidden = true, pm_deep = true;
    std::vector<cplx> a, b, c;
    std::vector<cplx> w;  // n x m
    std::vector<cplx> w2; // m x l

    static double val(std::uint64_t bits, int k, bool pm) { return pm ? spin(bits, k) : bit(bits, k); }

    cplx amplitude(std::uint64_t v) const {
        cplx total = 0;
        for(std::uint64_t h = 0; h < (1ULL << m); ++h)
            for(std::uint64_t g = 0; g < (1ULL << l); ++g) {
                cplx e = 0;
                for(int i = 0; i < n; ++i) e += a[i] * val(v, i, pm_visible);
                for(int j = 0; j < m; ++j) e += b[j] * val(h, j, pm_hidden);
                for(int k = 0; k < l; ++k) e += c[k] * val(g, k, pm_deep);
                for(int i = 0; i < n; ++i)
                    for(int j = 0; j < m; ++j) e += w[i * m + j] * val(v, i, pm_visible) * val(h, j, pm_hidden);
                for(int j = 0; j < m; ++j)
                    for(int k = 0; k < l; ++k) e += w2[j * l + k] * val(h, j, pm_hidden) * val(g, k, pm_deep);
                total += std::exp(e);
            }
        return total;
    }
};

/// Periodic 1D cluster-state amplitude straight from the product formula.
inline cplx cluster_amplitude(int n, std::uint64_t bits) {
    cplx p = 1;
    for(int k = 0; k < n; ++k) {
        int sl = spin(bits, (k - 1 + n) % n), s = spin(bits, k), sr = spin(bits, (k + 1) % n);
        p *= 2.0 * std::cos((M_PI + 2 * M_PI * sl + 3 * M_PI * s + M_PI * sr) / 4.0);
    }
    return p;
}

} // namespace oracle
