#pragma once

#include "hyperbolicity.hpp"
#include "space.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace hypersc {

// Vertex sequence whose consecutive entries are adjacent or equal, with
// cumulative arclength.
template <class T>
struct DiscretePath {
    std::vector<std::size_t> points;
    std::vector<T> cumlen;

    std::size_t size() const { return points.size(); }
    T length() const { return cumlen.empty() ? T(0) : cumlen.back(); }
};

template <class T>
DiscretePath<T> make_path(const FiniteLengthSpace<T>& s, std::vector<std::size_t> pts) {
    DiscretePath<T> p;
    p.points = std::move(pts);
    T acc{0};
    for (std::size_t i = 0; i < p.points.size(); ++i) {
        if (p.points[i] >= s.size()) throw InputError(ErrorCode::unknown_point, "path vertex out of range");
        if (i > 0 && p.points[i] != p.points[i - 1]) {
            auto w = s.edge_weight(p.points[i - 1], p.points[i]);
            if (!w)
                throw InputError(ErrorCode::invalid_argument, "path step '" + s.id(p.points[i - 1]) + "'->'" +
                                                                  s.id(p.points[i]) + "' is not an edge");
            acc += *w;
        }
        p.cumlen.push_back(acc);
    }
    return p;
}

// A shortest path between two vertices, ties broken toward smaller indices.
template <class T>
DiscretePath<T> geodesic(const FiniteLengthSpace<T>& s, std::size_t a, std::size_t b) {
    std::vector<std::size_t> pts{a};
    std::size_t cur = a;
    while (cur != b) {
        std::size_t next = cur;
        for (const auto& [k, w] : s.adjacency()[cur]) {
            if (eq_tol(w + s.d(k, b), s.d(cur, b)) && (next == cur || k < next)) next = k;
        }
        if (next == cur) throw InputError(ErrorCode::validation, "no geodesic step found");
        pts.push_back(next);
        cur = next;
    }
    return make_path(s, std::move(pts));
}

template <class T>
struct QuasiGeodesicReport {
    bool holds = true;
    T worst_excess{0};  // max of |t - t'| - k d - l
    std::pair<std::size_t, std::size_t> witness{0, 0};
};

namespace detail {
template <class T, class Window>
QuasiGeodesicReport<T> qg_scan(const FiniteLengthSpace<T>& s, const DiscretePath<T>& p, const T& k, const T& l,
                               Window&& in_window) {
    QuasiGeodesicReport<T> rep;
    bool first = true;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j) {
            if (!in_window(i, j)) continue;
            T v = (p.cumlen[j] - p.cumlen[i]) - k * s.d(p.points[i], p.points[j]) - l;
            if (first || v > rep.worst_excess) {
                rep.worst_excess = v;
                rep.witness = {i, j};
                first = false;
            }
        }
    rep.holds = le_tol(rep.worst_excess, T(0));
    return rep;
}
}  // namespace detail

template <class T>
QuasiGeodesicReport<T> is_quasi_geodesic(const FiniteLengthSpace<T>& s, const DiscretePath<T>& p, const T& k,
                                         const T& l) {
    if (k < 1 || l < 0) throw InputError(ErrorCode::invalid_argument, "need k >= 1 and l >= 0");
    return detail::qg_scan(s, p, k, l, [](std::size_t, std::size_t) { return true; });
}

// Every sub-path of arclength at most L is a (k,l)-quasi-geodesic.
template <class T>
QuasiGeodesicReport<T> is_local_quasi_geodesic(const FiniteLengthSpace<T>& s, const DiscretePath<T>& p, const T& L,
                                               const T& k, const T& l) {
    if (k < 1 || l < 0) throw InputError(ErrorCode::invalid_argument, "need k >= 1 and l >= 0");
    return detail::qg_scan(s, p, k, l,
                           [&](std::size_t i, std::size_t j) { return p.cumlen[j] - p.cumlen[i] <= L; });
}

template <class S>
metric_t<S> quasi_convexity_constant(const S& s, const Subset& y) {
    using T = metric_t<S>;
    if (y.empty()) throw InputError(ErrorCode::invalid_argument, "subset is empty");
    const std::size_t n = s.size();
    return map_reduce_blocks(
        n, T(0),
        [&](std::size_t x) {
            T dy = dist_to_set(s, x, y);
            T best{0};
            for (std::size_t a : y)
                for (std::size_t b : y) {
                    T v = dy - gromov_product(s, a, b, x);
                    if (v > best) best = v;
                }
            return best;
        },
        [](T a, T b) { return b > a ? b : a; });
}

template <class S>
Subset projection(const S& s, std::size_t x, const Subset& y, const metric_t<S>& eta) {
    if (y.empty()) throw InputError(ErrorCode::invalid_argument, "subset is empty");
    auto dy = dist_to_set(s, x, y);
    Subset out;
    for (std::size_t p : y)
        if (le_tol(s.d(x, p), dy + eta)) out.push_back(p);
    return out;
}

template <class S>
Subset neighborhood(const S& s, const Subset& y, const metric_t<S>& a) {
    Subset out;
    if (y.empty()) return out;
    for (std::size_t x = 0; x < s.size(); ++x)
        if (le_tol(dist_to_set(s, x, y), a)) out.push_back(x);
    return out;
}

// Vertices on some path between points of y of length at most d(y,y') + slack.
template <class S>
Subset hull(const S& s, const Subset& y, const metric_t<S>& slack) {
    Subset out;
    for (std::size_t v = 0; v < s.size(); ++v) {
        bool in = false;
        for (std::size_t i = 0; i < y.size() && !in; ++i)
            for (std::size_t j = i; j < y.size() && !in; ++j)
                in = le_tol(s.d(y[i], v) + s.d(v, y[j]), s.d(y[i], y[j]) + slack);
        if (in) out.push_back(v);
    }
    return out;
}

// Diameter of a vertex set; nullopt for the empty set.
template <class S>
std::optional<metric_t<S>> diameter_of(const S& s, const Subset& y) {
    if (y.empty()) return std::nullopt;
    metric_t<S> best{0};
    for (std::size_t i = 0; i < y.size(); ++i)
        for (std::size_t j = i + 1; j < y.size(); ++j)
            if (s.d(y[i], y[j]) > best) best = s.d(y[i], y[j]);
    return best;
}

template <class S>
std::optional<metric_t<S>> diam_intersection(const S& s, const Subset& y1, const metric_t<S>& a1, const Subset& y2,
                                             const metric_t<S>& a2) {
    return diameter_of(s, subset_intersection(neighborhood(s, y1, a1), neighborhood(s, y2, a2)));
}

template <class T>
struct StrongQcReport {
    bool path_connected = false;
    T excess{0};  // max of d_Y - d_X
    T alpha{0};
    bool verdict = false;
};

template <class T>
StrongQcReport<T> strong_quasi_convexity_check(const FiniteLengthSpace<T>& s, const Subset& y, const T& delta) {
    StrongQcReport<T> rep;
    rep.alpha = quasi_convexity_constant(s, y);
    auto sub = induced_subspace(s, y);
    if (!sub) return rep;
    rep.path_connected = true;
    for (std::size_t i = 0; i < y.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j) {
            T e = sub->d(i, j) - s.d(y[i], y[j]);
            if (e > rep.excess) rep.excess = e;
        }
    rep.verdict = le_tol(rep.excess, T(8) * delta) && le_tol(rep.alpha, T(2) * delta);
    return rep;
}

}  // namespace hypersc
