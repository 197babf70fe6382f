#pragma once

#include "parallel.hpp"
#include "scalar.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <tuple>
#include <type_traits>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hypersc {

// Sorted, duplicate-free list of vertex indices.
using Subset = std::vector<std::size_t>;

inline Subset make_subset(std::vector<std::size_t> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

inline bool subset_contains(const Subset& s, std::size_t x) {
    return std::binary_search(s.begin(), s.end(), x);
}

inline Subset subset_intersection(const Subset& a, const Subset& b) {
    Subset out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// Scalar type of any metric model exposing d(i, j).
template <class S>
using metric_t = std::decay_t<decltype(std::declval<const S&>().d(0, 0))>;

template <class S>
metric_t<S> dist_to_set(const S& s, std::size_t x, const Subset& y) {
    metric_t<S> best = s.d(x, y.front());
    for (std::size_t p : y)
        if (s.d(x, p) < best) best = s.d(x, p);
    return best;
}

// A weighted connected graph together with its all-pairs path metric.
template <class T>
class FiniteLengthSpace {
public:
    using scalar_type = T;

    struct Edge {
        std::size_t u;
        std::size_t v;
        T w;
    };

    FiniteLengthSpace() = default;

    static FiniteLengthSpace from_graph(std::vector<std::string> ids,
                                        const std::vector<std::tuple<std::string, std::string, T>>& edges) {
        std::unordered_map<std::string, std::size_t> idx;
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (!idx.emplace(ids[i], i).second)
                throw InputError(ErrorCode::malformed, "duplicate vertex id '" + ids[i] + "'");
        }
        std::vector<Edge> es;
        es.reserve(edges.size());
        for (const auto& [a, b, w] : edges) {
            auto ia = idx.find(a);
            auto ib = idx.find(b);
            if (ia == idx.end()) throw InputError(ErrorCode::unknown_point, "edge endpoint '" + a + "'");
            if (ib == idx.end()) throw InputError(ErrorCode::unknown_point, "edge endpoint '" + b + "'");
            es.push_back({ia->second, ib->second, w});
        }
        return from_indexed_graph(std::move(ids), std::move(es));
    }

    static FiniteLengthSpace from_indexed_graph(std::vector<std::string> ids, std::vector<Edge> edges) {
        FiniteLengthSpace s;
        s.ids_ = std::move(ids);
        const std::size_t n = s.ids_.size();
        std::set<std::pair<std::size_t, std::size_t>> seen;
        for (auto& e : edges) {
            if (e.u >= n || e.v >= n) throw InputError(ErrorCode::unknown_point, "edge endpoint out of range");
            if (!(e.w > 0)) throw InputError(ErrorCode::nonpositive_weight, "edge weight must be positive");
            if (e.u == e.v) throw InputError(ErrorCode::malformed, "self-loop at '" + s.ids_[e.u] + "'");
            auto key = std::minmax(e.u, e.v);
            if (!seen.insert(key).second)
                throw InputError(ErrorCode::duplicate_edge,
                                 "edge '" + s.ids_[e.u] + "'-'" + s.ids_[e.v] + "' given twice");
        }
        s.edges_ = std::move(edges);
        s.index_ids();
        s.build_adjacency();
        s.compute_distances();
        return s;
    }

    // Metric given directly as a table; edges become the complete graph so the
    // path metric is the table itself.
    static FiniteLengthSpace from_metric(std::vector<std::string> ids, std::vector<T> table, bool validate = true) {
        FiniteLengthSpace s;
        s.ids_ = std::move(ids);
        const std::size_t n = s.ids_.size();
        if (table.size() != n * n) throw InputError(ErrorCode::malformed, "metric table has wrong size");
        s.dist_ = std::move(table);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s.edges_.push_back({i, j, s.dist_[i * n + j]});
        s.index_ids();
        s.build_adjacency();
        if (validate) {
            auto bad = s.metric_violation();
            if (bad) throw InputError(ErrorCode::validation, *bad);
        }
        return s;
    }

    std::size_t size() const { return ids_.size(); }
    const T& d(std::size_t i, std::size_t j) const { return dist_[i * ids_.size() + j]; }
    const std::vector<T>& table() const { return dist_; }
    const std::string& id(std::size_t i) const { return ids_[i]; }
    const std::vector<std::string>& ids() const { return ids_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::vector<std::pair<std::size_t, T>>>& adjacency() const { return adj_; }

    std::size_t index(const std::string& id) const {
        auto it = index_.find(id);
        if (it == index_.end()) throw InputError(ErrorCode::unknown_point, "no point '" + id + "'");
        return it->second;
    }
    bool contains(const std::string& id) const { return index_.count(id) != 0; }

    bool adjacent(std::size_t i, std::size_t j) const {
        for (const auto& [k, w] : adj_[i])
            if (k == j) return true;
        return false;
    }

    std::optional<T> edge_weight(std::size_t i, std::size_t j) const {
        std::optional<T> best;
        for (const auto& [k, w] : adj_[i])
            if (k == j && (!best || w < *best)) best = w;
        return best;
    }

    T diameter() const {
        T best{0};
        for (const auto& x : dist_)
            if (x > best) best = x;
        return best;
    }

    T dist_to_set(std::size_t x, const Subset& y) const {
        T best = d(x, y.front());
        for (std::size_t p : y)
            if (d(x, p) < best) best = d(x, p);
        return best;
    }

    FiniteLengthSpace scaled(const T& lambda) const {
        if (!(lambda > 0)) throw InputError(ErrorCode::invalid_argument, "scale factor must be positive");
        FiniteLengthSpace s = *this;
        for (auto& e : s.edges_) e.w *= lambda;
        for (auto& row : s.adj_)
            for (auto& [k, w] : row) w *= lambda;
        for (auto& x : s.dist_) x *= lambda;
        return s;
    }

    template <class U, class Conv>
    FiniteLengthSpace<U> convert(Conv&& conv) const {
        std::vector<typename FiniteLengthSpace<U>::Edge> es;
        for (const auto& e : edges_) es.push_back({e.u, e.v, conv(e.w)});
        std::vector<U> tab;
        tab.reserve(dist_.size());
        for (const auto& x : dist_) tab.push_back(conv(x));
        return FiniteLengthSpace<U>::from_parts(ids_, std::move(es), std::move(tab));
    }

    static FiniteLengthSpace from_parts(std::vector<std::string> ids, std::vector<Edge> edges, std::vector<T> table) {
        FiniteLengthSpace s;
        s.ids_ = std::move(ids);
        s.edges_ = std::move(edges);
        s.dist_ = std::move(table);
        s.index_ids();
        s.build_adjacency();
        return s;
    }

    // First failure of symmetry, zero diagonal, separation or triangle inequality.
    std::optional<std::string> metric_violation() const {
        const std::size_t n = size();
        for (std::size_t i = 0; i < n; ++i) {
            if (d(i, i) != T(0)) return "nonzero diagonal at '" + ids_[i] + "'";
            for (std::size_t j = 0; j < n; ++j) {
                if (!eq_tol(d(i, j), d(j, i))) return "asymmetric at '" + ids_[i] + "','" + ids_[j] + "'";
                if (i != j && !(d(i, j) > 0)) return "nonpositive distance between distinct points";
            }
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k)
                    if (!le_tol(d(i, k), d(i, j) + d(j, k)))
                        return "triangle inequality fails at ('" + ids_[i] + "','" + ids_[j] + "','" + ids_[k] +
                               "')";
        return std::nullopt;
    }

private:
    void index_ids() {
        index_.clear();
        for (std::size_t i = 0; i < ids_.size(); ++i) index_.emplace(ids_[i], i);
    }

    void build_adjacency() {
        adj_.assign(ids_.size(), {});
        for (const auto& e : edges_) {
            adj_[e.u].push_back({e.v, e.w});
            adj_[e.v].push_back({e.u, e.w});
        }
    }

    void compute_distances() {
        const std::size_t n = ids_.size();
        dist_.assign(n * n, T(0));
        std::vector<char> reached_all(n, 1);
        for_each_block(n, [&](std::size_t src) {
            std::vector<std::optional<T>> best(n);
            using Item = std::pair<T, std::size_t>;
            std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
            best[src] = T(0);
            pq.push({T(0), src});
            while (!pq.empty()) {
                auto [dv, v] = pq.top();
                pq.pop();
                if (*best[v] < dv) continue;
                for (const auto& [k, w] : adj_[v]) {
                    T cand = dv + w;
                    if (!best[k] || cand < *best[k]) {
                        best[k] = cand;
                        pq.push({cand, k});
                    }
                }
            }
            for (std::size_t j = 0; j < n; ++j) {
                if (!best[j]) {
                    reached_all[src] = 0;
                    return;
                }
                dist_[src * n + j] = *best[j];
            }
        });
        for (std::size_t i = 0; i < n; ++i)
            if (!reached_all[i]) throw InputError(ErrorCode::disconnected, "graph is not connected");
    }

    std::vector<std::string> ids_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::pair<std::size_t, T>>> adj_;
    std::vector<T> dist_;
};

// Path metric of the subgraph induced on y, or nullopt when it is disconnected.
template <class T>
std::optional<FiniteLengthSpace<T>> induced_subspace(const FiniteLengthSpace<T>& s, const Subset& y) {
    std::vector<std::string> ids;
    std::map<std::size_t, std::size_t> local;
    for (std::size_t p : y) {
        local.emplace(p, ids.size());
        ids.push_back(s.id(p));
    }
    std::vector<typename FiniteLengthSpace<T>::Edge> es;
    for (const auto& e : s.edges()) {
        auto a = local.find(e.u);
        auto b = local.find(e.v);
        if (a != local.end() && b != local.end()) es.push_back({a->second, b->second, e.w});
    }
    try {
        return FiniteLengthSpace<T>::from_indexed_graph(std::move(ids), std::move(es));
    } catch (const InputError& err) {
        if (err.code() == ErrorCode::disconnected) return std::nullopt;
        throw;
    }
}

// Inserts the midpoint of every edge. The first size() points keep their
// indices; midpoints follow in edge order.
template <class T>
FiniteLengthSpace<T> subdivide_edges(const FiniteLengthSpace<T>& s) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < s.size(); ++i) ids.push_back(s.id(i));
    std::vector<typename FiniteLengthSpace<T>::Edge> es;
    for (const auto& e : s.edges()) {
        const std::size_t m = ids.size();
        ids.push_back(s.id(e.u) + "~" + s.id(e.v));
        const T h = e.w / T(2);
        es.push_back({e.u, m, h});
        es.push_back({m, e.v, h});
    }
    return FiniteLengthSpace<T>::from_indexed_graph(std::move(ids), std::move(es));
}

}  // namespace hypersc
