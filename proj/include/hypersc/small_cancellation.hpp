#pragma once

#include "coneoff.hpp"
#include "group_actions.hpp"
#include "parallel.hpp"
#include "scalar.hpp"
#include "words.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace hypersc {

struct Presentation {
    std::string generators;     // distinct lowercase letters
    std::vector<Word> relators; // nontrivial, cyclically reduced
};

inline Presentation make_presentation(std::string generators, const std::vector<std::string>& relators) {
    std::set<char> seen;
    for (char c : generators) {
        if (c < 'a' || c > 'z') throw InputError(ErrorCode::malformed, std::string("generator '") + c + "' is not in a-z");
        if (!seen.insert(c).second) throw InputError(ErrorCode::malformed, std::string("generator '") + c + "' repeated");
    }
    if (generators.empty()) throw InputError(ErrorCode::invalid_argument, "empty alphabet");
    Presentation p;
    p.generators = std::move(generators);
    for (const auto& text : relators) {
        Word w = parse_word(text);
        for (char c : w)
            if (!seen.count(static_cast<char>(c | 0x20)))
                throw InputError(ErrorCode::malformed, "relator '" + text + "' uses a letter outside the generators");
        Word c = cyclic_reduce(w);
        if (c.empty()) throw InputError(ErrorCode::malformed, "relator '" + text + "' is trivial");
        p.relators.push_back(std::move(c));
    }
    return p;
}

// First line: generators. Every further nonblank line: one relator.
inline Presentation parse_presentation(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line, gens;
    std::vector<std::string> rels;
    bool first = true;
    while (std::getline(in, line)) {
        line.erase(std::remove_if(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\t' || c == '\r'; }),
                   line.end());
        if (first) {
            gens = line;
            first = false;
        } else if (!line.empty()) {
            rels.push_back(line);
        }
    }
    if (first) throw InputError(ErrorCode::malformed, "empty presentation");
    return make_presentation(gens, rels);
}

inline int presentation_rank(const Presentation& p) {
    int r = 0;
    for (char c : p.generators) r = std::max(r, generator_of(c) + 1);
    return r;
}

// R*: cyclic conjugates of relators and their inverses, as a sorted set.
inline std::vector<Word> cyclic_conjugates(const Presentation& p) {
    std::set<Word> out;
    for (const auto& r : p.relators) {
        for (auto& w : rotations(r)) out.insert(std::move(w));
        for (auto& w : rotations(inverse(r))) out.insert(std::move(w));
    }
    return {out.begin(), out.end()};
}

// Canonical representative of the conjugacy class of r and r^-1.
inline Word conjugacy_inversion_key(const Word& r) {
    Word best = r;
    for (const auto& w : rotations(r)) best = std::min(best, w);
    for (const auto& w : rotations(inverse(r))) best = std::min(best, w);
    return best;
}

struct PieceReport {
    std::size_t length = 0;
    std::optional<std::pair<Word, Word>> witness;
};

// Longest common prefix over unordered pairs of distinct elements.
inline PieceReport max_piece_naive(const std::vector<Word>& rstar) {
    using Best = std::tuple<std::size_t, std::size_t, std::size_t>;  // length, i, j
    Best init{0, 0, 0};
    auto best = map_reduce_blocks(
        rstar.size(), init,
        [&](std::size_t i) {
            Best b{0, 0, 0};
            for (std::size_t j = i + 1; j < rstar.size(); ++j) {
                std::size_t k = common_prefix(rstar[i], rstar[j]);
                if (k > std::get<0>(b)) b = {k, i, j};
            }
            return b;
        },
        [](Best acc, const Best& b) { return std::get<0>(b) > std::get<0>(acc) ? b : acc; });
    PieceReport rep;
    rep.length = std::get<0>(best);
    if (rep.length > 0) rep.witness = std::make_pair(rstar[std::get<1>(best)], rstar[std::get<2>(best)]);
    return rep;
}

// Same contract via the sorted order: the longest common prefix of a set is
// attained by two neighbours in lexicographic order.
inline PieceReport max_piece_sorted(std::vector<Word> rstar) {
    std::sort(rstar.begin(), rstar.end());
    rstar.erase(std::unique(rstar.begin(), rstar.end()), rstar.end());
    PieceReport rep;
    for (std::size_t i = 1; i < rstar.size(); ++i) {
        std::size_t k = common_prefix(rstar[i - 1], rstar[i]);
        if (k > rep.length) {
            rep.length = k;
            rep.witness = std::make_pair(rstar[i - 1], rstar[i]);
        }
    }
    return rep;
}

inline PieceReport max_piece(const Presentation& p) { return max_piece_naive(cyclic_conjugates(p)); }

enum class ScVariant { cprime, cdoubleprime };

struct ScViolation {
    Word word;           // element of R* carrying the piece as a prefix
    Word other;          // second element sharing it
    std::size_t piece = 0;
    std::size_t bound_length = 0;  // |r| for C', min relator length for C''
};

struct ScVerdict {
    ScVariant variant = ScVariant::cprime;
    Rational lambda;
    bool pass = true;
    std::size_t max_piece = 0;
    std::size_t min_relator_length = 0;
    std::vector<ScViolation> violations;
};

inline ScVerdict check_small_cancellation(const Presentation& p, const Rational& lambda, ScVariant variant) {
    if (lambda < 0) throw InputError(ErrorCode::invalid_argument, "lambda must be nonnegative");
    ScVerdict v;
    v.variant = variant;
    v.lambda = lambda;
    auto rstar = cyclic_conjugates(p);
    if (rstar.empty()) return v;
    std::size_t tmin = rstar.front().size();
    for (const auto& w : rstar) tmin = std::min(tmin, w.size());
    v.min_relator_length = tmin;

    // Longest piece that is a prefix of each element, with its partner.
    std::vector<std::pair<std::size_t, std::size_t>> best(rstar.size(), {0, 0});
    for_each_block(rstar.size(), [&](std::size_t i) {
        for (std::size_t j = 0; j < rstar.size(); ++j) {
            if (j == i) continue;
            std::size_t k = common_prefix(rstar[i], rstar[j]);
            if (k > best[i].first) best[i] = {k, j};
        }
    });
    for (std::size_t i = 0; i < rstar.size(); ++i) v.max_piece = std::max(v.max_piece, best[i].first);

    if (variant == ScVariant::cprime) {
        for (std::size_t i = 0; i < rstar.size(); ++i) {
            const auto [k, j] = best[i];
            if (k > 0 && Rational(static_cast<long long>(k)) > lambda * static_cast<long long>(rstar[i].size()))
                v.violations.push_back({rstar[i], rstar[j], k, rstar[i].size()});
        }
    } else {
        const Rational bound = lambda * static_cast<long long>(tmin);
        std::set<std::pair<std::size_t, std::size_t>> reported;
        for (std::size_t i = 0; i < rstar.size(); ++i) {
            const auto [k, j] = best[i];
            if (k > 0 && Rational(static_cast<long long>(k)) > bound && reported.insert(std::minmax(i, j)).second)
                v.violations.push_back({rstar[i], rstar[j], k, tmin});
        }
    }
    v.pass = v.violations.empty();
    return v;
}

// Vertices of the axis of g in the Cayley tree, truncated to |x| <= radius.
// Breadth-first from the conjugator of the cyclic decomposition, which lies on
// the axis; the axis is connected so nothing else is visited.
inline std::vector<Word> axis_words(const Word& g, int radius) {
    auto [u, c] = cyclic_decompose(g);
    if (c.empty()) throw InputError(ErrorCode::not_hyperbolic, "element is not hyperbolic");
    if (static_cast<int>(u.size()) > radius) return {};
    const std::size_t ell = c.size();
    auto on_axis = [&](const Word& x) { return reduce(inverse(x) + g + x).size() == ell; };
    std::set<char> letters;  // axis vertices only use letters of g
    for (char c : g) letters.insert(c), letters.insert(inverse_letter(c));
    std::set<Word> seen{u};
    std::vector<Word> frontier{u}, out{u};
    while (!frontier.empty()) {
        std::vector<Word> next;
        for (const auto& x : frontier)
            for (char letter : letters) {
                Word y = reduce(x + letter);
                if (static_cast<int>(y.size()) > radius || !seen.insert(y).second) continue;
                if (on_axis(y)) {
                    next.push_back(y);
                    out.push_back(y);
                }
            }
        frontier = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::size_t tree_word_distance(const Word& u, const Word& v) { return u.size() + v.size() - 2 * common_prefix(u, v); }

inline std::size_t tree_diameter(const std::vector<Word>& pts) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, tree_word_distance(pts[i], pts[j]));
    return best;
}

// Common prefix of u^inf and v^inf, stopping at `limit`.
inline std::size_t periodic_common_prefix(const Word& u, const Word& v, std::size_t limit) {
    std::size_t k = 0;
    while (k < limit && u[k % u.size()] == v[k % v.size()]) ++k;
    return k;
}

// Finite set of reduced words with the Cayley tree metric (unit edges).
class TreeWordSet {
public:
    explicit TreeWordSet(std::vector<Word> words) : words_(std::move(words)) {
        std::sort(words_.begin(), words_.end());
        words_.erase(std::unique(words_.begin(), words_.end()), words_.end());
    }
    std::size_t size() const { return words_.size(); }
    Rational d(std::size_t i, std::size_t j) const {
        return Rational(static_cast<long long>(tree_word_distance(words_[i], words_[j])));
    }
    const Word& word(std::size_t i) const { return words_[i]; }
    const std::vector<Word>& words() const { return words_; }
    Subset indices_of(const std::vector<Word>& ws) const {
        Subset out;
        for (const auto& w : ws) {
            auto it = std::lower_bound(words_.begin(), words_.end(), w);
            if (it != words_.end() && *it == w) out.push_back(static_cast<std::size_t>(it - words_.begin()));
        }
        return make_subset(std::move(out));
    }

private:
    std::vector<Word> words_;
};

struct AxisPairResult {
    Word r, s;
    std::size_t string_overlap = 0;
    std::size_t geometric_overlap = 0;
};

struct AxisEquivalenceReport {
    int radius = 0;
    bool truncated = false;          // some pair needed a larger ball
    std::size_t pairs_checked = 0;   // pairs with distinct axes
    std::size_t same_axis_pairs = 0;
    std::size_t max_discrepancy = 0;
    std::vector<AxisPairResult> mismatches;
    std::size_t max_piece = 0;
    std::size_t max_overlap = 0;
    std::size_t min_relator_length = 0;
    bool set_level_applicable = false;  // max piece < min relator length
    bool set_level_equal = true;
};

// For r != s in R* the axes of r and s both pass through 1. The string side
// reads the overlap off the periodic words in both directions; the geometric
// side measures the intersection of the two axis vertex sets in the ball.
inline AxisEquivalenceReport piece_axis_equivalence(const Presentation& p, int radius = 0) {
    AxisEquivalenceReport rep;
    auto rstar = cyclic_conjugates(p);
    if (rstar.empty()) return rep;
    std::size_t maxlen = 0, minlen = rstar.front().size();
    for (const auto& w : rstar) maxlen = std::max(maxlen, w.size()), minlen = std::min(minlen, w.size());
    rep.radius = radius > 0 ? radius : static_cast<int>(2 * maxlen);
    rep.min_relator_length = minlen;
    std::vector<std::vector<Word>> axes(rstar.size());
    for_each_block(rstar.size(), [&](std::size_t i) { axes[i] = axis_words(rstar[i], rep.radius); });

    std::vector<Word> inv(rstar.size());
    for (std::size_t i = 0; i < rstar.size(); ++i) inv[i] = inverse(rstar[i]);

    struct Acc {
        std::size_t checked = 0, same = 0, maxdisc = 0, maxov = 0;
        bool truncated = false;
        std::vector<AxisPairResult> bad;
    };
    auto acc = map_reduce_blocks(
        rstar.size(), Acc{},
        [&](std::size_t i) {
            Acc a;
            for (std::size_t j = i + 1; j < rstar.size(); ++j) {
                const Word& r = rstar[i];
                const Word& s = rstar[j];
                const std::size_t limit = r.size() + s.size();
                std::size_t fwd = periodic_common_prefix(r, s, limit);
                if (fwd >= limit || periodic_common_prefix(r, inv[j], limit) >= limit) {
                    ++a.same;
                    continue;
                }
                // Each ray of r from 1 can run along either ray of s.
                fwd = std::max(fwd, periodic_common_prefix(r, inv[j], limit));
                std::size_t bwd = std::max(periodic_common_prefix(inv[i], inv[j], limit),
                                           periodic_common_prefix(inv[i], s, limit));
                AxisPairResult res{r, s, fwd + bwd, 0};
                if (static_cast<std::size_t>(rep.radius) < limit) a.truncated = true;
                std::vector<Word> common;
                std::set_intersection(axes[i].begin(), axes[i].end(), axes[j].begin(), axes[j].end(),
                                      std::back_inserter(common));
                res.geometric_overlap = tree_diameter(common);
                ++a.checked;
                a.maxov = std::max(a.maxov, res.geometric_overlap);
                std::size_t disc = res.string_overlap > res.geometric_overlap
                                       ? res.string_overlap - res.geometric_overlap
                                       : res.geometric_overlap - res.string_overlap;
                if (disc > 0) a.bad.push_back(res);
                a.maxdisc = std::max(a.maxdisc, disc);
            }
            return a;
        },
        [](Acc x, const Acc& y) {
            x.checked += y.checked;
            x.same += y.same;
            x.maxdisc = std::max(x.maxdisc, y.maxdisc);
            x.maxov = std::max(x.maxov, y.maxov);
            x.truncated = x.truncated || y.truncated;
            x.bad.insert(x.bad.end(), y.bad.begin(), y.bad.end());
            return x;
        });
    rep.pairs_checked = acc.checked;
    rep.same_axis_pairs = acc.same;
    rep.max_discrepancy = acc.maxdisc;
    rep.mismatches = std::move(acc.bad);
    rep.truncated = acc.truncated;
    rep.max_overlap = acc.maxov;
    rep.max_piece = max_piece_naive(rstar).length;
    rep.set_level_applicable = rep.max_piece < minlen;
    rep.set_level_equal = !rep.set_level_applicable || rep.max_piece == rep.max_overlap;
    return rep;
}

struct QFamilyReport {
    TreeWordSet model{{}};
    QFamily<Word> family;
    Extended<Rational> Delta = Extended<Rational>::of(0);
    std::optional<std::pair<std::size_t, std::size_t>> Delta_witness;
    bool same_axis_conflict = false;  // two members share an axis but not a subgroup
    Extended<Rational> T = Extended<Rational>::inf();
    int radius = 0;
};

// Orbit representatives (<r'>, Y_{r'}) for r' in R*, i.e. the members whose
// axis passes through 1. Relators are first deduplicated up to conjugacy and
// inversion.
inline QFamilyReport q_family_from_relators(const Presentation& p) {
    QFamilyReport rep;
    std::set<Word> keys;
    Presentation q{p.generators, {}};
    for (const auto& r : p.relators)
        if (keys.insert(conjugacy_inversion_key(r)).second) q.relators.push_back(r);
    auto rstar = cyclic_conjugates(q);
    if (rstar.empty()) return rep;
    std::size_t maxlen = 0;
    for (const auto& w : rstar) maxlen = std::max(maxlen, w.size());
    rep.radius = static_cast<int>(2 * maxlen);

    std::map<Word, Word> by_key;  // subgroup key -> generator word
    for (const auto& w : rstar) by_key.emplace(std::min(w, inverse(w)), w);
    std::vector<std::vector<Word>> axes;
    std::vector<Word> all;
    for (const auto& [key, w] : by_key) {
        axes.push_back(axis_words(w, rep.radius));
        all.insert(all.end(), axes.back().begin(), axes.back().end());
    }
    rep.model = TreeWordSet(std::move(all));
    std::size_t i = 0;
    for (const auto& [key, w] : by_key) rep.family.push_back({key, {w, inverse(w)}, rep.model.indices_of(axes[i++])});

    auto fd = delta_of_family(rep.model, rep.family, Rational(0));
    rep.Delta = Extended<Rational>::of(fd.value);
    if (fd.any_overlap) rep.Delta_witness = fd.witness;
    for (std::size_t a = 0; a < rep.family.size() && !rep.same_axis_conflict; ++a)
        for (std::size_t b = a + 1; b < rep.family.size(); ++b)
            if (rep.family[a].Y == rep.family[b].Y) {
                rep.same_axis_conflict = true;
                rep.Delta = Extended<Rational>::inf();
                rep.Delta_witness = std::make_pair(a, b);
                break;
            }
    rep.T = t_of_family<Rational>(rep.family,
                                  [](const Word& w) { return Rational(static_cast<long long>(cyclic_reduce(w).size())); });
    return rep;
}

struct CdoubleEquivalence {
    Rational lambda;
    bool c_doubleprime = false;
    bool family_bound = false;  // Delta <= lambda T
    bool agree() const { return c_doubleprime == family_bound; }
};

inline CdoubleEquivalence cdouble_equivalence(const Presentation& p, const QFamilyReport& q, const Rational& lambda) {
    CdoubleEquivalence e;
    e.lambda = lambda;
    e.c_doubleprime = check_small_cancellation(p, lambda, ScVariant::cdoubleprime).pass;
    if (q.T.infinite)
        e.family_bound = true;
    else
        e.family_bound = !q.Delta.infinite && q.Delta.value <= lambda * q.T.value;
    return e;
}

// Finite connected graph, each edge oriented and labelled by a generator.
struct LabelledGraph {
    struct Edge {
        std::size_t u, v;
        char label;  // lowercase; read as label from u to v, inverse from v to u
    };
    std::vector<std::string> vertices;
    std::vector<Edge> edges;
};

inline LabelledGraph make_labelled_graph(std::vector<std::string> vertices,
                                         const std::vector<std::tuple<std::string, std::string, std::string>>& edges) {
    LabelledGraph g;
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < vertices.size(); ++i)
        if (!idx.emplace(vertices[i], i).second) throw InputError(ErrorCode::malformed, "duplicate vertex '" + vertices[i] + "'");
    g.vertices = std::move(vertices);
    if (g.vertices.empty()) throw InputError(ErrorCode::malformed, "graph has no vertices");
    std::vector<std::size_t> degree(g.vertices.size(), 0);
    for (const auto& [a, b, l] : edges) {
        auto ia = idx.find(a), ib = idx.find(b);
        if (ia == idx.end()) throw InputError(ErrorCode::unknown_point, "edge endpoint '" + a + "'");
        if (ib == idx.end()) throw InputError(ErrorCode::unknown_point, "edge endpoint '" + b + "'");
        if (l.size() != 1 || l[0] < 'a' || l[0] > 'z')
            throw InputError(ErrorCode::malformed, "edge label '" + l + "' is not a generator");
        g.edges.push_back({ia->second, ib->second, l[0]});
        ++degree[ia->second];
        ++degree[ib->second];
    }
    for (std::size_t i = 0; i < degree.size(); ++i)
        if (degree[i] == 1) throw InputError(ErrorCode::validation, "vertex '" + g.vertices[i] + "' has degree 1");
    std::vector<std::vector<std::size_t>> adj(g.vertices.size());
    for (const auto& e : g.edges) adj[e.u].push_back(e.v), adj[e.v].push_back(e.u);
    std::vector<char> seen(g.vertices.size(), 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        std::size_t x = stack.back();
        stack.pop_back();
        for (std::size_t y : adj[x])
            if (!seen[y]) seen[y] = 1, stack.push_back(y);
    }
    if (std::count(seen.begin(), seen.end(), 0) != 0) throw InputError(ErrorCode::disconnected, "graph is not connected");
    return g;
}

// Shortest cycle of the underlying multigraph: for each edge, the shortest
// path between its endpoints avoiding it. nullopt for a forest.
inline std::optional<std::size_t> graph_girth(const LabelledGraph& g) {
    const std::size_t n = g.vertices.size();
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(n);  // (neighbour, edge id)
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        adj[g.edges[e].u].push_back({g.edges[e].v, e});
        if (g.edges[e].u != g.edges[e].v) adj[g.edges[e].v].push_back({g.edges[e].u, e});
    }
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    auto best = map_reduce_blocks(
        g.edges.size(), none,
        [&](std::size_t e) {
            const auto [u, v, l] = g.edges[e];
            if (u == v) return std::size_t{1};
            std::vector<std::size_t> dist(n, none);
            std::vector<std::size_t> queue{u};
            dist[u] = 0;
            for (std::size_t qi = 0; qi < queue.size(); ++qi) {
                std::size_t x = queue[qi];
                for (const auto& [y, id] : adj[x]) {
                    if (id == e || dist[y] != none) continue;
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
            return dist[v] == none ? none : dist[v] + 1;
        },
        [](std::size_t a, std::size_t b) { return std::min(a, b); });
    if (best == none) return std::nullopt;
    return best;
}

// Oracle: breadth-first search from every vertex, closing cycles at non-tree edges.
inline std::optional<std::size_t> graph_girth_bfs_oracle(const LabelledGraph& g) {
    const std::size_t n = g.vertices.size();
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(n);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        adj[g.edges[e].u].push_back({g.edges[e].v, e});
        if (g.edges[e].u != g.edges[e].v) adj[g.edges[e].v].push_back({g.edges[e].u, e});
    }
    std::size_t best = none;
    for (std::size_t root = 0; root < n; ++root) {
        std::vector<std::size_t> dist(n, none), via(n, none);
        std::vector<std::size_t> queue{root};
        dist[root] = 0;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            std::size_t x = queue[qi];
            for (const auto& [y, id] : adj[x]) {
                if (id == via[x]) continue;
                if (dist[y] == none) {
                    dist[y] = dist[x] + 1;
                    via[y] = id;
                    queue.push_back(y);
                } else {
                    best = std::min(best, dist[x] + dist[y] + 1);
                }
            }
        }
    }
    if (best == none) return std::nullopt;
    return best;
}

struct GraphPieceReport {
    std::size_t length = 0;
    bool indeterminate = false;  // two distinct paths still agree at the cap
    std::size_t cap = 0;
    Word witness;
};

// Pairs of reduced edge-paths reading the same word, explored breadth-first
// over (last half-edge, last half-edge, paths already differ). A piece of
// length L exists iff layer L holds a state with the flag set.
inline GraphPieceReport graph_max_piece(const LabelledGraph& g, std::size_t cap) {
    if (cap == 0) throw InputError(ErrorCode::invalid_argument, "cap must be positive");
    const std::size_t H = 2 * g.edges.size();
    auto tail = [&](std::size_t h) { return h % 2 == 0 ? g.edges[h / 2].u : g.edges[h / 2].v; };
    auto head = [&](std::size_t h) { return h % 2 == 0 ? g.edges[h / 2].v : g.edges[h / 2].u; };
    auto label = [&](std::size_t h) { return h % 2 == 0 ? g.edges[h / 2].label : inverse_letter(g.edges[h / 2].label); };
    std::vector<std::vector<std::size_t>> out(g.vertices.size());
    for (std::size_t h = 0; h < H; ++h) out[tail(h)].push_back(h);

    using State = std::uint64_t;
    auto enc = [&](std::size_t a, std::size_t b, bool f) { return (static_cast<State>(a) * H + b) * 2 + (f ? 1 : 0); };
    auto h1 = [&](State s) { return static_cast<std::size_t>(s / 2 / H); };
    auto h2 = [&](State s) { return static_cast<std::size_t>(s / 2 % H); };
    auto flag = [](State s) { return (s & 1) != 0; };

    std::vector<std::map<State, State>> layers;  // state -> parent in previous layer
    std::map<State, State> cur;
    for (std::size_t a = 0; a < H; ++a)
        for (std::size_t b = 0; b < H; ++b)
            if (label(a) == label(b)) cur.emplace(enc(a, b, a != b), 0);
    GraphPieceReport rep;
    rep.cap = cap;
    for (std::size_t depth = 1;; ++depth) {
        layers.push_back(cur);
        for (const auto& [s, par] : cur)
            if (flag(s)) {
                rep.length = depth;
                break;
            }
        if (depth == cap || cur.empty()) break;
        std::map<State, State> next;
        for (const auto& [s, par] : cur) {
            std::size_t a = h1(s), b = h2(s);
            for (std::size_t a2 : out[head(a)]) {
                if (a2 == (a ^ 1)) continue;
                for (std::size_t b2 : out[head(b)]) {
                    if (b2 == (b ^ 1) || label(a2) != label(b2)) continue;
                    next.emplace(enc(a2, b2, flag(s) || a2 != b2), s);
                }
            }
        }
        cur = std::move(next);
    }
    if (rep.length == 0) return rep;
    rep.indeterminate = rep.length == cap;
    State s = 0;
    for (const auto& [st, par] : layers[rep.length - 1])
        if (flag(st)) {
            s = st;
            break;
        }
    for (std::size_t L = rep.length; L >= 1; --L) {
        rep.witness.push_back(label(h1(s)));
        s = layers[L - 1].at(s);
    }
    std::reverse(rep.witness.begin(), rep.witness.end());
    return rep;
}

struct PowerFamilyReport {
    std::vector<Word> pool;  // primitive hyperbolic words with l <= 1000 delta
    std::size_t n = 0;
    QFamily<Word> family;
    Extended<Rational> T = Extended<Rational>::inf();
    FamilyDelta<Rational> Delta;
};

inline PowerFamilyReport power_family(const std::vector<Word>& pool, std::size_t n, const Rational& delta,
                                      const CayleyTreeModel& m) {
    if (n == 0) throw InputError(ErrorCode::invalid_argument, "exponent must be positive");
    if (delta < 0) throw InputError(ErrorCode::invalid_argument, "delta must be nonnegative");
    PowerFamilyReport rep;
    rep.n = n;
    std::set<Word> roots;
    for (const auto& text : pool) {
        Word r = reduce(parse_word(text, m.rank()));
        Word c = cyclic_reduce(r);
        if (c.empty() || primitive_period(c) != c.size()) continue;
        if (m.translation_length(r) > Rational(1000) * delta) continue;
        Word root = group_root(r);
        if (!roots.insert(std::min(root, inverse(root))).second) continue;
        rep.pool.push_back(r);
    }
    Rational ell_min;
    for (std::size_t i = 0; i < rep.pool.size(); ++i) {
        const Word& r = rep.pool[i];
        Word rn;
        for (std::size_t k = 0; k < n; ++k) rn += r;
        rn = reduce(rn);
        rep.family.push_back({std::min(rn, inverse(rn)), {rn, inverse(rn)}, cylinder(m, r, delta).set});
        Rational ell = m.translation_length(r);
        if (i == 0 || ell < ell_min) ell_min = ell;
    }
    if (!rep.pool.empty()) rep.T = Extended<Rational>::of(ell_min * static_cast<long long>(n));
    rep.Delta = delta_of_family(m, rep.family, delta);
    return rep;
}

}  // namespace hypersc
