#pragma once

// Random instance generators and independent oracles shared by the unit tests
// and the acceptance runner.

#include "hypersc/coneoff.hpp"
#include "hypersc/group_actions.hpp"
#include "hypersc/small_cancellation.hpp"
#include "hypersc/space.hpp"

#include <random>
#include <set>
#include <string>
#include <vector>

namespace hypersc::testing {

using Rng = std::mt19937_64;

inline std::vector<std::string> numbered_ids(std::size_t n, const std::string& prefix = "v") {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back(prefix + std::to_string(i));
    return ids;
}

inline Rational random_weight(Rng& rng) {
    std::uniform_int_distribution<int> num(1, 12), den(1, 6);
    return Rational(num(rng), den(rng));
}

inline FiniteLengthSpace<Rational> random_tree(Rng& rng, std::size_t n) {
    std::vector<FiniteLengthSpace<Rational>::Edge> es;
    for (std::size_t v = 1; v < n; ++v) {
        std::uniform_int_distribution<std::size_t> parent(0, v - 1);
        es.push_back({parent(rng), v, random_weight(rng)});
    }
    return FiniteLengthSpace<Rational>::from_indexed_graph(numbered_ids(n), es);
}

// Spanning tree plus `extra` random chords, integer weights in [1, 5].
inline FiniteLengthSpace<Rational> random_graph(Rng& rng, std::size_t n, std::size_t extra) {
    std::uniform_int_distribution<int> w(1, 5);
    std::vector<FiniteLengthSpace<Rational>::Edge> es;
    for (std::size_t v = 1; v < n; ++v) {
        std::uniform_int_distribution<std::size_t> parent(0, v - 1);
        es.push_back({parent(rng), v, Rational(w(rng))});
    }
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& e : es) seen.insert(std::minmax(e.u, e.v));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t k = 0; k < extra; ++k) {
        std::size_t a = pick(rng), b = pick(rng);
        if (a != b && seen.insert(std::minmax(a, b)).second) es.push_back({a, b, Rational(w(rng))});
    }
    return FiniteLengthSpace<Rational>::from_indexed_graph(numbered_ids(n), es);
}

inline FiniteLengthSpace<double> to_double_space(const FiniteLengthSpace<Rational>& s) {
    return s.convert<double>([](const Rational& q) { return q.convert_to<double>(); });
}

// Quadruple loop over ordered 4-tuples, written independently of the library
// kernels: 2 delta = max over tuples of (xy + zw) - max(xz + yw, xw + yz).
template <class T>
T naive_four_point(const FiniteLengthSpace<T>& s) {
    const std::size_t n = s.size();
    T best(0);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t z = 0; z < n; ++z)
                for (std::size_t w = 0; w < n; ++w) {
                    T a = s.d(x, y) + s.d(z, w);
                    T b = s.d(x, z) + s.d(y, w);
                    T c = s.d(x, w) + s.d(y, z);
                    T v = a - (b > c ? b : c);
                    if (v > best) best = v;
                }
    return best / 2;
}

inline Word random_word(Rng& rng, int rank, std::size_t min_len, std::size_t max_len) {
    std::uniform_int_distribution<std::size_t> len(min_len, max_len);
    std::uniform_int_distribution<int> letter(0, 2 * rank - 1);
    for (;;) {
        Word w;
        const std::size_t l = len(rng);
        while (w.size() < l) {
            int k = letter(rng);
            char c = k < rank ? static_cast<char>('a' + k) : static_cast<char>('A' + k - rank);
            if (!w.empty() && w.back() == inverse_letter(c)) continue;
            w.push_back(c);
        }
        w = cyclic_reduce(w);
        if (w.size() >= min_len) return w;
    }
}

inline Presentation random_presentation(Rng& rng, int rank, std::size_t relators, std::size_t min_len,
                                        std::size_t max_len) {
    std::string gens;
    for (int i = 0; i < rank; ++i) gens.push_back(static_cast<char>('a' + i));
    std::vector<std::string> rs;
    for (std::size_t i = 0; i < relators; ++i) rs.push_back(random_word(rng, rank, min_len, max_len));
    return make_presentation(gens, rs);
}

// Connected subset grown by random breadth-first accretion.
template <class T>
Subset random_connected_subset(Rng& rng, const FiniteLengthSpace<T>& s, std::size_t target) {
    std::uniform_int_distribution<std::size_t> pick(0, s.size() - 1);
    std::vector<std::size_t> in{pick(rng)};
    std::vector<char> mark(s.size(), 0);
    mark[in[0]] = 1;
    while (in.size() < target) {
        std::vector<std::size_t> border;
        for (std::size_t u : in)
            for (std::size_t v = 0; v < s.size(); ++v)
                if (!mark[v] && s.adjacent(u, v)) border.push_back(v);
        if (border.empty()) break;
        std::uniform_int_distribution<std::size_t> b(0, border.size() - 1);
        std::size_t v = border[b(rng)];
        mark[v] = 1;
        in.push_back(v);
    }
    return make_subset(in);
}

inline ConeOffSpace random_coneoff(Rng& rng) {
    std::uniform_int_distribution<std::size_t> nv(6, 14), extra(0, 6), natt(1, 3), sz(2, 6);
    std::uniform_real_distribution<double> rho(0.5, 4.0);
    const std::size_t n = nv(rng);
    auto base = to_double_space(random_graph(rng, n, extra(rng)));
    std::vector<Subset> ys;
    const std::size_t k = natt(rng);
    for (std::size_t i = 0; i < k; ++i) ys.push_back(random_connected_subset(rng, base, sz(rng)));
    return build_coneoff(base, rho(rng), ys);
}

inline LabelledGraph random_labelled_graph(Rng& rng, std::size_t n, std::size_t extra, int labels) {
    std::vector<std::string> vs = numbered_ids(n);
    std::vector<std::tuple<std::string, std::string, std::string>> es;
    std::uniform_int_distribution<int> lab(0, labels - 1);
    auto L = [&] { return std::string(1, static_cast<char>('a' + lab(rng))); };
    for (std::size_t v = 0; v < n; ++v) es.emplace_back(vs[v], vs[(v + 1) % n], L());  // Hamiltonian cycle: no leaves
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t k = 0; k < extra; ++k) es.emplace_back(vs[pick(rng)], vs[pick(rng)], L());
    return make_labelled_graph(vs, es);
}

// Unit-weight graphs on integer vertices.
inline FiniteLengthSpace<Rational> unit_graph(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    std::vector<FiniteLengthSpace<Rational>::Edge> es;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (auto [a, b] : edges)
        if (a != b && seen.insert(std::minmax(a, b)).second) es.push_back({a, b, Rational(1)});
    return FiniteLengthSpace<Rational>::from_indexed_graph(numbered_ids(n), es);
}

inline FiniteLengthSpace<Rational> circulant(std::size_t n, const std::vector<std::size_t>& jumps) {
    std::vector<std::pair<std::size_t, std::size_t>> es;
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t j : jumps) es.emplace_back(v, (v + j) % n);
    return unit_graph(n, es);
}

inline FiniteLengthSpace<Rational> hypercube(std::size_t dim) {
    const std::size_t n = std::size_t{1} << dim;
    std::vector<std::pair<std::size_t, std::size_t>> es;
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t b = 0; b < dim; ++b)
            if (!(v >> b & 1)) es.emplace_back(v, v | (std::size_t{1} << b));
    return unit_graph(n, es);
}

inline FiniteLengthSpace<Rational> torus(std::size_t a, std::size_t b) {
    std::vector<std::pair<std::size_t, std::size_t>> es;
    for (std::size_t i = 0; i < a; ++i)
        for (std::size_t j = 0; j < b; ++j) {
            es.emplace_back(i * b + j, ((i + 1) % a) * b + j);
            es.emplace_back(i * b + j, i * b + (j + 1) % b);
        }
    return unit_graph(a * b, es);
}

inline FiniteLengthSpace<Rational> prism(std::size_t m) {
    std::vector<std::pair<std::size_t, std::size_t>> es;
    for (std::size_t i = 0; i < m; ++i) {
        es.emplace_back(i, (i + 1) % m);
        es.emplace_back(m + i, m + (i + 1) % m);
        es.emplace_back(i, m + i);
    }
    return unit_graph(2 * m, es);
}

inline FiniteLengthSpace<Rational> petersen() {
    std::vector<std::pair<std::size_t, std::size_t>> es;
    for (std::size_t i = 0; i < 5; ++i) {
        es.emplace_back(i, (i + 1) % 5);
        es.emplace_back(i, 5 + i);
        es.emplace_back(5 + i, 5 + (i + 2) % 5);
    }
    return unit_graph(10, es);
}

// Twenty vertex-transitive graphs with at most 40 vertices.
inline std::vector<std::pair<std::string, FiniteLengthSpace<Rational>>> vertex_transitive_models() {
    std::vector<std::pair<std::string, FiniteLengthSpace<Rational>>> out;
    for (std::size_t n : {3, 4, 5, 6, 8, 11, 16, 25, 40}) out.emplace_back("C" + std::to_string(n), circulant(n, {1}));
    out.emplace_back("K4", circulant(4, {1, 2}));
    out.emplace_back("circulant(12;1,5)", circulant(12, {1, 5}));
    out.emplace_back("circulant(20;1,4)", circulant(20, {1, 4}));
    out.emplace_back("Q3", hypercube(3));
    out.emplace_back("Q4", hypercube(4));
    out.emplace_back("Q5", hypercube(5));
    out.emplace_back("prism5", prism(5));
    out.emplace_back("prism12", prism(12));
    out.emplace_back("torus4x5", torus(4, 5));
    out.emplace_back("torus6x6", torus(6, 6));
    out.emplace_back("petersen", petersen());
    return out;
}

}  // namespace hypersc::testing
