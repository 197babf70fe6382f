#pragma once

#include "convexity.hpp"
#include "hyperbolicity.hpp"
#include "space.hpp"
#include "words.hpp"

#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace hypersc {

using Perm = std::vector<std::size_t>;

inline Perm compose(const Perm& g, const Perm& h) {  // (g h)(x) = g(h(x))
    Perm out(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) out[i] = g[h[i]];
    return out;
}

inline Perm perm_inverse(const Perm& g) {
    Perm out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[g[i]] = i;
    return out;
}

inline Perm identity_perm(std::size_t n) {
    Perm p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    return p;
}

inline Perm perm_power(const Perm& g, std::size_t k) {
    Perm out = identity_perm(g.size());
    for (std::size_t i = 0; i < k; ++i) out = compose(g, out);
    return out;
}

template <class T>
bool is_isometry(const FiniteLengthSpace<T>& s, const Perm& g) {
    const std::size_t n = s.size();
    if (g.size() != n) return false;
    std::vector<char> hit(n, 0);
    for (std::size_t v : g) {
        if (v >= n || hit[v]) return false;
        hit[v] = 1;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (!eq_tol(s.d(g[i], g[j]), s.d(i, j))) return false;
    return true;
}

// Finite space with isometries given as vertex permutations.
template <class T>
class PermutationModel {
public:
    using element_type = Perm;
    using scalar_type = T;

    explicit PermutationModel(FiniteLengthSpace<T> s) : s_(std::move(s)) {}

    const FiniteLengthSpace<T>& space() const { return s_; }
    std::size_t size() const { return s_.size(); }
    const T& d(std::size_t i, std::size_t j) const { return s_.d(i, j); }

    void validate(const Perm& g) const {
        if (!is_isometry(s_, g)) throw InputError(ErrorCode::validation, "permutation is not an isometry");
    }
    T displacement(const Perm& g, std::size_t x) const { return s_.d(g[x], x); }
    T translation_length(const Perm& g) const {
        T best = displacement(g, 0);
        for (std::size_t x = 1; x < size(); ++x)
            if (displacement(g, x) < best) best = displacement(g, x);
        return best;
    }
    bool is_trivial(const Perm& g) const { return g == identity_perm(size()); }

private:
    FiniteLengthSpace<T> s_;
};

// Ball of radius R in the Cayley tree of the free group of rank r, edges of
// length lambda. Distances are computed from the words, not stored.
class CayleyTreeModel {
public:
    using element_type = Word;
    using scalar_type = Rational;

    CayleyTreeModel(int rank, int radius, Rational lambda = 1) : rank_(rank), radius_(radius), lambda_(std::move(lambda)) {
        if (rank <= 0) throw InputError(ErrorCode::invalid_argument, "empty alphabet");
        if (radius < 0) throw InputError(ErrorCode::invalid_argument, "radius must be nonnegative");
        if (!(lambda_ > 0)) throw InputError(ErrorCode::invalid_argument, "scale must be positive");
        words_ = enumerate_ball(rank, radius);
        for (std::size_t i = 0; i < words_.size(); ++i) index_.emplace(words_[i], i);
    }

    int rank() const { return rank_; }
    int radius() const { return radius_; }
    const Rational& scale() const { return lambda_; }
    std::size_t size() const { return words_.size(); }
    const Word& word(std::size_t i) const { return words_[i]; }
    std::optional<std::size_t> find(const Word& w) const {
        auto it = index_.find(w);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t word_distance(std::size_t i, std::size_t j) const {
        const Word& u = words_[i];
        const Word& v = words_[j];
        return u.size() + v.size() - 2 * common_prefix(u, v);
    }
    Rational d(std::size_t i, std::size_t j) const { return lambda_ * static_cast<long long>(word_distance(i, j)); }

    void validate(const Word& g) const { parse_word(g, rank_); }
    Rational displacement(const Word& g, std::size_t x) const {
        const Word& w = words_[x];
        return lambda_ * static_cast<long long>(reduce(inverse(w) + g + w).size());
    }
    // Classical value: length of the cyclic reduction.
    Rational translation_length(const Word& g) const { return lambda_ * static_cast<long long>(cyclic_reduce(g).size()); }
    Rational translation_length_on_ball(const Word& g) const {
        Rational best = displacement(g, 0);
        for (std::size_t x = 1; x < size(); ++x) {
            Rational v = displacement(g, x);
            if (v < best) best = v;
        }
        return best;
    }
    bool is_trivial(const Word& g) const { return reduce(g).empty(); }

    FiniteLengthSpace<Rational> to_space() const {
        std::vector<std::string> ids;
        std::vector<FiniteLengthSpace<Rational>::Edge> es;
        for (std::size_t i = 0; i < size(); ++i) {
            ids.push_back(words_[i].empty() ? "1" : words_[i]);
            if (!words_[i].empty()) es.push_back({index_.at(words_[i].substr(0, words_[i].size() - 1)), i, lambda_});
        }
        std::vector<Rational> tab(size() * size());
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = 0; j < size(); ++j) tab[i * size() + j] = d(i, j);
        return FiniteLengthSpace<Rational>::from_parts(std::move(ids), std::move(es), std::move(tab));
    }

private:
    int rank_;
    int radius_;
    Rational lambda_;
    std::vector<Word> words_;
    std::unordered_map<Word, std::size_t> index_;
};

template <class M>
concept IsometryModel = requires(const M& m, const typename M::element_type& g, std::size_t i) {
    m.size();
    m.d(i, i);
    m.displacement(g, i);
    m.translation_length(g);
};

template <IsometryModel M>
Subset axis(const M& m, const typename M::element_type& g, const metric_t<M>& delta) {
    using T = metric_t<M>;
    T lg = m.translation_length(g);
    T thr = lg > T(8) * delta ? lg : T(8) * delta;
    Subset out;
    for (std::size_t x = 0; x < m.size(); ++x)
        if (le_tol(m.displacement(g, x), thr)) out.push_back(x);
    return out;
}

// Min-displacement set: the exact axis line for hyperbolic tree isometries.
template <IsometryModel M>
Subset min_set(const M& m, const typename M::element_type& g) {
    auto lg = m.translation_length(g);
    Subset out;
    for (std::size_t x = 0; x < m.size(); ++x)
        if (eq_tol(m.displacement(g, x), lg)) out.push_back(x);
    return out;
}

template <class T>
struct StableLengthReport {
    T estimate{0};                 // min_x d(g^n x, x) / n at the budget
    std::vector<T> profile;        // same quantity for k = 1..n
    bool nonincreasing = true;
    T translation{0};
    bool bracket_holds = true;     // estimate <= l <= estimate + 32 delta
    bool exact = false;
};

inline StableLengthReport<Rational> stable_length(const CayleyTreeModel& m, const Word& g, const Rational& delta) {
    StableLengthReport<Rational> rep;
    rep.exact = true;
    rep.estimate = m.translation_length(g);
    rep.translation = rep.estimate;
    rep.profile = {rep.estimate};
    rep.bracket_holds = true;
    (void)delta;
    return rep;
}

template <class T>
StableLengthReport<T> stable_length(const PermutationModel<T>& m, const Perm& g, std::size_t budget, const T& delta) {
    if (budget == 0) throw InputError(ErrorCode::invalid_argument, "budget must be positive");
    StableLengthReport<T> rep;
    Perm gk = identity_perm(m.size());
    for (std::size_t k = 1; k <= budget; ++k) {
        gk = compose(g, gk);
        T v = m.translation_length(gk) / T(static_cast<long long>(k));
        if (!rep.profile.empty() && v > rep.profile.back() + ScalarTraits<T>::tolerance()) rep.nonincreasing = false;
        rep.profile.push_back(v);
    }
    rep.estimate = rep.profile.back();
    rep.translation = m.translation_length(g);
    rep.bracket_holds = le_tol(rep.estimate, rep.translation) && le_tol(rep.translation, rep.estimate + T(32) * delta);
    return rep;
}

template <class T>
struct CylinderResult {
    Subset set;
    std::string method;
    std::size_t boundary_vertices = 0;  // members on the outer sphere of a truncated ball
};

// Tree model: the min-displacement line, thickened by 10 delta.
inline CylinderResult<Rational> cylinder(const CayleyTreeModel& m, const Word& g, const Rational& delta) {
    if (cyclic_reduce(g).empty()) throw InputError(ErrorCode::not_hyperbolic, "element is not hyperbolic");
    CylinderResult<Rational> rep;
    Subset line = min_set(m, g);
    rep.set = delta == 0 ? line : neighborhood(m, line, Rational(10) * delta);
    rep.method = delta == 0 ? "axis line" : "10 delta neighborhood of the axis line";
    for (std::size_t x : rep.set)
        if (static_cast<int>(m.word(x).size()) == m.radius()) ++rep.boundary_vertices;
    return rep;
}

// Finite model: union of geodesics through the orbit of a min-displacement
// point, thickened by 10 delta. Requires a positive stable-length estimate.
template <class T>
CylinderResult<T> cylinder(const PermutationModel<T>& m, const Perm& g, const T& delta, std::size_t budget = 4) {
    auto st = stable_length(m, g, budget, delta);
    if (!(st.estimate > 0)) throw InputError(ErrorCode::not_hyperbolic, "stable length estimate is zero");
    const auto& s = m.space();
    std::size_t x0 = min_set(m, g).front();
    std::vector<std::size_t> orbit{x0};
    for (std::size_t y = g[x0]; y != x0; y = g[y]) orbit.push_back(y);
    std::vector<std::size_t> pts;
    for (std::size_t i = 0; i < orbit.size(); ++i) {
        auto seg = geodesic(s, orbit[i], orbit[(i + 1) % orbit.size()]);
        pts.insert(pts.end(), seg.points.begin(), seg.points.end());
    }
    CylinderResult<T> rep;
    rep.set = neighborhood(s, make_subset(pts), T(10) * delta);
    rep.method = "10 delta neighborhood of the orbit polygon";
    return rep;
}

template <class T, class Elem>
struct InvariantAReport {
    T value{0};
    std::size_t admissible = 0;   // isometries with l <= 1000 delta
    std::size_t pairs = 0;        // non-elementary pairs examined
    bool any_pair = false;
    std::pair<Elem, Elem> witness{};
};

template <IsometryModel M>
InvariantAReport<metric_t<M>, typename M::element_type> invariant_A(
    const M& m, const std::vector<typename M::element_type>& isometries,
    const std::function<bool(const typename M::element_type&, const typename M::element_type&)>& elementary,
    const metric_t<M>& delta) {
    using T = metric_t<M>;
    using E = typename M::element_type;
    if (!elementary) throw InputError(ErrorCode::invalid_argument, "no elementary-subgroup test supplied");
    InvariantAReport<T, E> rep;
    std::vector<E> pool;
    std::vector<Subset> thick;
    for (const auto& g : isometries) {
        if (le_tol(m.translation_length(g), T(1000) * delta)) {
            pool.push_back(g);
            thick.push_back(neighborhood(m, axis(m, g, delta), T(17) * delta));
        }
    }
    rep.admissible = pool.size();
    for (std::size_t i = 0; i < pool.size(); ++i)
        for (std::size_t j = i + 1; j < pool.size(); ++j) {
            if (elementary(pool[i], pool[j])) continue;
            ++rep.pairs;
            auto dm = diameter_of(m, subset_intersection(thick[i], thick[j]));
            T v = dm ? *dm : T(0);
            if (!rep.any_pair || v > rep.value) {
                rep.value = v;
                rep.witness = {pool[i], pool[j]};
            }
            rep.any_pair = true;
        }
    return rep;
}

// Minimal stable length over hyperbolic members; infinite when there is none.
inline Extended<Rational> rinj(const CayleyTreeModel& m, const std::vector<Word>& words) {
    Extended<Rational> best = Extended<Rational>::inf();
    for (const auto& w : words)
        if (!cyclic_reduce(w).empty()) best = ext_min(best, Extended<Rational>::of(m.translation_length(w)));
    return best;
}

template <class T>
Extended<T> rinj(const PermutationModel<T>& m, const std::vector<Perm>& gs, std::size_t budget, const T& delta) {
    Extended<T> best = Extended<T>::inf();
    for (const auto& g : gs) {
        auto st = stable_length(m, g, budget, delta);
        if (st.estimate > 0) best = ext_min(best, Extended<T>::of(st.estimate));
    }
    return best;
}

template <class T>
struct CharacteristicReport {
    Subset set;
    T worst_midpoint_distance{0};  // max over x of d(m_x, C_F)
    T worst_midpoint_excess{0};    // max over x of max(d(x,m), d(gx,m)) - d(x,gx)/2
    bool midpoints_within_slack = true;
    bool empty = false;
};

template <class T>
CharacteristicReport<T> characteristic_set(const PermutationModel<T>& m, const std::vector<Perm>& F, const T& delta,
                                           const T& slack) {
    const auto& s = m.space();
    const std::size_t n = s.size();
    for (const auto& g : F) m.validate(g);
    CharacteristicReport<T> rep;
    for (std::size_t x = 0; x < n; ++x) {
        bool in = true;
        for (const auto& g : F) in = in && le_tol(s.d(g[x], x), T(10) * delta);
        if (in) rep.set.push_back(x);
    }
    rep.empty = rep.set.empty();
    if (rep.empty || F.empty()) return rep;
    for (std::size_t x = 0; x < n; ++x) {
        std::size_t gi = 0;
        for (std::size_t k = 1; k < F.size(); ++k)
            if (s.d(F[k][x], x) > s.d(F[gi][x], x)) gi = k;
        const std::size_t gx = F[gi][x];
        const T halfd = half(s.d(x, gx));
        std::optional<std::size_t> best;
        T best_r{0}, best_c{0};
        for (std::size_t c = 0; c < n; ++c) {
            T r = s.d(x, c) > s.d(gx, c) ? s.d(x, c) : s.d(gx, c);
            T dc = dist_to_set(s, c, rep.set);
            if (!best || r < best_r || (r == best_r && dc < best_c)) {
                best = c;
                best_r = r;
                best_c = dc;
            }
        }
        T excess = best_r - halfd;
        if (excess > rep.worst_midpoint_excess) rep.worst_midpoint_excess = excess;
        if (best_c > rep.worst_midpoint_distance) rep.worst_midpoint_distance = best_c;
    }
    rep.midpoints_within_slack = le_tol(rep.worst_midpoint_distance, slack);
    return rep;
}

template <class T>
struct AxisPropertyReport {
    T translation{0};
    T qc_constant{0};          // quasi-convexity constant of A_g
    T qc_bound{0};             // 14 delta
    T worst_displacement_slack{0};  // min over x of d(gx,x) - (2 d(x,A_g) + l(g) - 14 delta)
    std::size_t worst_point = 0;
    bool quasi_convex = true;
    bool displacement = true;
    bool holds() const { return quasi_convex && displacement; }
};

template <class T>
AxisPropertyReport<T> axis_property_check(const PermutationModel<T>& m, const Perm& g, const T& delta) {
    m.validate(g);
    const auto& s = m.space();
    AxisPropertyReport<T> rep;
    rep.translation = m.translation_length(g);
    Subset A = axis(m, g, delta);
    rep.qc_constant = quasi_convexity_constant(s, A);
    rep.qc_bound = T(14) * delta;
    rep.quasi_convex = le_tol(rep.qc_constant, rep.qc_bound);
    for (std::size_t x = 0; x < s.size(); ++x) {
        T slack = s.d(g[x], x) - (T(2) * s.dist_to_set(x, A) + rep.translation - T(14) * delta);
        if (x == 0 || slack < rep.worst_displacement_slack) rep.worst_displacement_slack = slack, rep.worst_point = x;
    }
    rep.displacement = le_tol(T(0), rep.worst_displacement_slack);
    return rep;
}

// max over y, x, x' of d(gy,y) - max{d(gx,x), d(gx',x')} - 2<x,x'>_y - 6 delta;
// nonpositive when displacement is convex up to 6 delta.
template <class T>
T displacement_convexity_excess(const PermutationModel<T>& m, const Perm& g, const T& delta) {
    const auto& s = m.space();
    const std::size_t n = s.size();
    auto best = map_reduce_blocks(
        n, std::optional<T>{},
        [&](std::size_t y) {
            std::optional<T> best;
            const T dy = s.d(g[y], y);
            for (std::size_t x = 0; x < n; ++x)
                for (std::size_t xp = 0; xp < n; ++xp) {
                    const T a = s.d(g[x], x), b = s.d(g[xp], xp);
                    T v = dy - (a > b ? a : b) - T(2) * gromov_product(s, x, xp, y) - T(6) * delta;
                    if (!best || v > *best) best = v;
                }
            return best;
        },
        [](std::optional<T> a, std::optional<T> b) { return !a || (b && *b > *a) ? b : a; });
    return best.value_or(T(0));
}

// All distance-preserving permutations, by backtracking with distance checks
// against already placed vertices.
template <class T>
std::vector<Perm> automorphisms(const FiniteLengthSpace<T>& s, std::size_t limit = 100000) {
    const std::size_t n = s.size();
    std::vector<Perm> out;
    Perm img(n, n);
    std::vector<char> used(n, 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (out.size() >= limit) throw InputError(ErrorCode::invalid_argument, "automorphism group exceeds limit");
        if (i == n) {
            out.push_back(img);
            return;
        }
        for (std::size_t c = 0; c < n; ++c) {
            if (used[c]) continue;
            bool ok = true;
            for (std::size_t j = 0; j < i && ok; ++j) ok = s.d(i, j) == s.d(c, img[j]);
            if (!ok) continue;
            img[i] = c;
            used[c] = 1;
            rec(i + 1);
            used[c] = 0;
        }
    };
    rec(0);
    return out;
}

}  // namespace hypersc
