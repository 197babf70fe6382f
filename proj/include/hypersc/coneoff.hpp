#pragma once

#include "cone.hpp"
#include "convexity.hpp"
#include "hyperbolicity.hpp"
#include "space.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace hypersc {

// One cone attached along Y, built over the induced-subgraph metric d_Y.
struct Attachment {
    Subset Y;
    FiniteLengthSpace<double> dY;           // indices local to Y
    std::map<std::size_t, std::size_t> local;  // base index -> local index

    bool contains(std::size_t x) const { return local.count(x) != 0; }
    std::size_t at(std::size_t x) const { return local.at(x); }
};

// Point of the disjoint union before identification. Cone points carry the
// attachment index; r == rho identifies (y, rho) with the base vertex y.
struct CPoint {
    enum class Kind { base, cone };
    Kind kind = Kind::base;
    std::size_t vertex = 0;
    std::size_t attachment = 0;
    double r = 0.0;

    static CPoint at_base(std::size_t v) { return {Kind::base, v, 0, 0.0}; }
    static CPoint in_cone(std::size_t a, std::size_t y, double r) { return {Kind::cone, y, a, r}; }
    static CPoint apex(std::size_t a) { return {Kind::cone, 0, a, 0.0}; }
};

using ExtLength = Extended<double>;

class ConeOffSpace {
public:
    ConeOffSpace(FiniteLengthSpace<double> base, double rho, std::vector<Attachment> atts, std::vector<double> dot)
        : base_(std::move(base)), rho_(rho), atts_(std::move(atts)), dot_(std::move(dot)) {}

    const FiniteLengthSpace<double>& base() const { return base_; }
    double rho() const { return rho_; }
    const std::vector<Attachment>& attachments() const { return atts_; }
    double dot(std::size_t u, std::size_t v) const { return dot_[u * base_.size() + v]; }
    const std::vector<double>& dot_table() const { return dot_; }

    // Cone point with r == rho becomes its base vertex.
    CPoint normalize(const CPoint& p) const {
        if (p.kind == CPoint::Kind::base) {
            if (p.vertex >= base_.size()) throw InputError(ErrorCode::unknown_point, "base vertex out of range");
            return p;
        }
        if (p.attachment >= atts_.size()) throw InputError(ErrorCode::unknown_point, "attachment out of range");
        if (!(p.r >= 0.0) || p.r > rho_) throw InputError(ErrorCode::invalid_argument, "radial coordinate outside [0, rho]");
        if (p.r == 0.0) return CPoint::apex(p.attachment);
        if (!atts_[p.attachment].contains(p.vertex))
            throw InputError(ErrorCode::unknown_point, "cone point over a vertex outside its subset");
        if (p.r == rho_) return CPoint::at_base(p.vertex);
        return p;
    }

    // In-cone distance between two points of cone a given in base indices;
    // boundary points are (y, rho).
    double in_cone(std::size_t a, std::size_t y1, double r1, std::size_t y2, double r2) const {
        const auto& at = atts_[a];
        if (r1 == 0.0) return r2;
        if (r2 == 0.0) return r1;
        return cone_distance_raw(rho_, at.dY.d(at.at(y1), at.at(y2)), r1, r2);
    }

private:
    FiniteLengthSpace<double> base_;
    double rho_;
    std::vector<Attachment> atts_;
    std::vector<double> dot_;
};

inline ConeOffSpace build_coneoff(const FiniteLengthSpace<double>& base, double rho, const std::vector<Subset>& subsets) {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw InputError(ErrorCode::invalid_argument, "rho must be positive");
    const std::size_t n = base.size();
    std::vector<Attachment> atts;
    for (std::size_t k = 0; k < subsets.size(); ++k) {
        Subset y = make_subset(subsets[k]);
        if (y.empty()) throw InputError(ErrorCode::validation, "attachment " + std::to_string(k) + " is empty");
        for (std::size_t v : y)
            if (v >= n) throw InputError(ErrorCode::unknown_point, "attachment vertex out of range");
        auto dY = induced_subspace(base, y);
        if (!dY)
            throw InputError(ErrorCode::validation,
                             "attachment " + std::to_string(k) + " is not path-connected in the induced subgraph");
        Attachment at{y, std::move(*dY), {}};
        for (std::size_t i = 0; i < y.size(); ++i) at.local.emplace(y[i], i);
        for (std::size_t i = 0; i < y.size(); ++i)
            for (std::size_t j = 0; j < y.size(); ++j)
                if (mu(base.d(y[i], y[j]), rho) > mu(at.dY.d(i, j), rho) + 1e-9)
                    throw InputError(ErrorCode::validation, "comparison inequality fails in attachment " + std::to_string(k));
        atts.push_back(std::move(at));
    }
    std::vector<double> w(n * n);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) w[u * n + v] = base.d(u, v);
    for (const auto& at : atts)
        for (std::size_t i = 0; i < at.Y.size(); ++i)
            for (std::size_t j = 0; j < at.Y.size(); ++j) {
                double c = mu(at.dY.d(i, j), rho);
                double& cur = w[at.Y[i] * n + at.Y[j]];
                if (c < cur) cur = c;
            }
    // dense Dijkstra from every source over the complete graph
    std::vector<double> dot(n * n, 0.0);
    for_each_block(n, [&](std::size_t s) {
        std::vector<double> best(n, std::numeric_limits<double>::infinity());
        std::vector<char> done(n, 0);
        best[s] = 0.0;
        for (std::size_t it = 0; it < n; ++it) {
            std::size_t u = n;
            for (std::size_t v = 0; v < n; ++v)
                if (!done[v] && (u == n || best[v] < best[u])) u = v;
            done[u] = 1;
            for (std::size_t v = 0; v < n; ++v)
                if (!done[v] && best[u] + w[u * n + v] < best[v]) best[v] = best[u] + w[u * n + v];
        }
        for (std::size_t v = 0; v < n; ++v) dot[s * n + v] = best[v];
    });
    // symmetrize rounding noise
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v) dot[u * n + v] = dot[v * n + u] = std::min(dot[u * n + v], dot[v * n + u]);
    return ConeOffSpace(base, rho, std::move(atts), std::move(dot));
}

// Distance in the disjoint union modulo the boundary identification.
inline ExtLength d_sc(const ConeOffSpace& sp, const CPoint& p0, const CPoint& q0) {
    CPoint p = sp.normalize(p0), q = sp.normalize(q0);
    const double rho = sp.rho();
    using K = CPoint::Kind;
    if (p.kind == K::base && q.kind == K::base) {
        double best = sp.base().d(p.vertex, q.vertex);
        for (std::size_t a = 0; a < sp.attachments().size(); ++a) {
            const auto& at = sp.attachments()[a];
            if (at.contains(p.vertex) && at.contains(q.vertex))
                best = std::min(best, sp.in_cone(a, p.vertex, rho, q.vertex, rho));
        }
        return ExtLength::of(best);
    }
    if (p.kind == K::base) std::swap(p, q);
    if (q.kind == K::base) {
        const auto& at = sp.attachments()[p.attachment];
        if (!at.contains(q.vertex)) return ExtLength::inf();
        return ExtLength::of(sp.in_cone(p.attachment, p.vertex, p.r, q.vertex, rho));
    }
    if (p.attachment != q.attachment) return ExtLength::inf();
    return ExtLength::of(sp.in_cone(p.attachment, p.vertex, p.r, q.vertex, q.r));
}

inline ExtLength chain_length(const ConeOffSpace& sp, const std::vector<CPoint>& chain) {
    ExtLength acc = ExtLength::of(0.0);
    for (std::size_t i = 1; i < chain.size(); ++i) acc = acc + d_sc(sp, chain[i - 1], chain[i]);
    return acc;
}

// Cone-off distance between arbitrary points: interior cone points leave
// their cone through a boundary vertex, after which dot_dist applies.
inline double coneoff_distance(const ConeOffSpace& sp, const CPoint& p0, const CPoint& q0) {
    CPoint p = sp.normalize(p0), q = sp.normalize(q0);
    const double rho = sp.rho();
    using K = CPoint::Kind;
    auto exits = [&](const CPoint& c) {
        std::vector<std::pair<std::size_t, double>> out;
        if (c.kind == K::base) {
            out.push_back({c.vertex, 0.0});
            return out;
        }
        for (std::size_t y : sp.attachments()[c.attachment].Y)
            out.push_back({y, sp.in_cone(c.attachment, c.vertex, c.r, y, rho)});
        return out;
    };
    if (p.kind == K::base && q.kind == K::base) return sp.dot(p.vertex, q.vertex);
    double best = std::numeric_limits<double>::infinity();
    if (p.kind == K::cone && q.kind == K::cone && p.attachment == q.attachment)
        best = sp.in_cone(p.attachment, p.vertex, p.r, q.vertex, q.r);
    for (const auto& [y1, c1] : exits(p))
        for (const auto& [y2, c2] : exits(q)) best = std::min(best, c1 + sp.dot(y1, y2) + c2);
    return best;
}

struct SandwichReport {
    bool holds = true;
    double lower_slack = 0;  // min of dot - mu(d_X)
    double upper_slack = 0;  // min of d_X - dot
    std::pair<std::size_t, std::size_t> worst_lower{0, 0};
    std::pair<std::size_t, std::size_t> worst_upper{0, 0};
    bool triangle = true;
};

inline SandwichReport sandwich_check(const ConeOffSpace& sp) {
    SandwichReport rep;
    const std::size_t n = sp.base().size();
    bool first = true;
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) {
            const double dx = sp.base().d(u, v);
            const double lo = sp.dot(u, v) - mu(dx, sp.rho());
            const double up = dx - sp.dot(u, v);
            if (first || lo < rep.lower_slack) rep.lower_slack = lo, rep.worst_lower = {u, v};
            if (first || up < rep.upper_slack) rep.upper_slack = up, rep.worst_upper = {u, v};
            first = false;
        }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                if (sp.dot(a, c) > sp.dot(a, b) + sp.dot(b, c) + 1e-9) rep.triangle = false;
    rep.holds = rep.lower_slack >= -1e-9 && rep.upper_slack >= -1e-9 && rep.triangle;
    return rep;
}

// Finite metric space: base vertices, apices and interior levels of each cone,
// with coneoff distances.
inline FiniteLengthSpace<double> sample_coneoff_space(const ConeOffSpace& sp, const std::vector<double>& interior_levels,
                                                      bool validate = true) {
    std::vector<std::string> ids;
    std::vector<CPoint> pts;
    for (std::size_t v = 0; v < sp.base().size(); ++v) {
        ids.push_back(sp.base().id(v));
        pts.push_back(CPoint::at_base(v));
    }
    for (std::size_t a = 0; a < sp.attachments().size(); ++a) {
        ids.push_back("apex" + std::to_string(a));
        pts.push_back(CPoint::apex(a));
        for (std::size_t y : sp.attachments()[a].Y)
            for (double r : interior_levels) {
                if (!(r > 0.0) || !(r < sp.rho())) throw InputError(ErrorCode::invalid_argument, "interior levels must lie in (0, rho)");
                char buf[48];
                std::snprintf(buf, sizeof buf, "@%.17g", r);
                ids.push_back("cone" + std::to_string(a) + ":" + sp.base().id(y) + buf);
                pts.push_back(CPoint::in_cone(a, y, r));
            }
    }
    const std::size_t n = pts.size();
    std::vector<double> tab(n * n, 0.0);
    for_each_block(n, [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) tab[i * n + j] = coneoff_distance(sp, pts[i], pts[j]);
    });
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) tab[i * n + j] = tab[j * n + i] = std::min(tab[i * n + j], tab[j * n + i]);
    return FiniteLengthSpace<double>::from_metric(std::move(ids), std::move(tab), validate);
}

struct GreedyReport {
    std::vector<std::size_t> indices;  // positions kept in the original chain
    double chain_length = 0;
    double subchain_length = 0;
    std::size_t n = 0;
    double length_bound = 0;  // l(C) + 8 a n eta^3
    double count_bound = 0;   // 4 (l(C)/eta + 1)
    bool length_ok = true;
    bool count_ok = true;
};

// Subchain selection: from z_{j_k}, step to j_k + 1 when that point is more
// than 2 eta away, otherwise to the last index within 2 eta of z_{j_k}.
inline GreedyReport greedy_subchain(const ConeOffSpace& sp, const std::vector<std::size_t>& chain, double eta, double a) {
    if (!(a > 0.0)) throw InputError(ErrorCode::invalid_argument, "a must be positive");
    if (!(eta > 0.0) || !(eta < std::sqrt(1.0 / (10.0 * a))))
        throw InputError(ErrorCode::invalid_argument, "eta must lie in (0, sqrt(1/(10a)))");
    if (chain.empty()) throw InputError(ErrorCode::invalid_argument, "empty chain");
    const auto& X = sp.base();
    for (std::size_t v : chain)
        if (v >= X.size()) throw InputError(ErrorCode::unknown_point, "chain vertex out of range");
    auto dsc = [&](std::size_t u, std::size_t v) { return d_sc(sp, CPoint::at_base(u), CPoint::at_base(v)).value; };
    GreedyReport rep;
    const std::size_t m = chain.size();
    for (std::size_t i = 1; i < m; ++i) rep.chain_length += dsc(chain[i - 1], chain[i]);
    std::size_t j = 0;
    rep.indices.push_back(0);
    while (j + 1 < m) {
        std::size_t next = j + 1;
        if (!(X.d(chain[j + 1], chain[j]) > 2.0 * eta)) {
            for (std::size_t t = m; t-- > j + 1;)
                if (X.d(chain[t], chain[j]) <= 2.0 * eta) {
                    next = t;
                    break;
                }
        }
        rep.indices.push_back(next);
        j = next;
    }
    for (std::size_t k = 1; k < rep.indices.size(); ++k)
        rep.subchain_length += dsc(chain[rep.indices[k - 1]], chain[rep.indices[k]]);
    rep.n = rep.indices.size();
    const double nn = static_cast<double>(rep.n);
    rep.length_bound = rep.chain_length + 8.0 * a * nn * eta * eta * eta;
    rep.count_bound = 4.0 * (rep.chain_length / eta + 1.0);
    rep.length_ok = rep.subchain_length <= rep.length_bound + 1e-9;
    rep.count_ok = nn <= rep.count_bound + 1e-9;
    return rep;
}

// Family of pairs (H, Y). Members with equal h_key carry the same subgroup.
template <class Elem>
struct QMember {
    std::string h_key;
    std::vector<Elem> elements;  // listed nontrivial elements of H
    Subset Y;
};

template <class Elem>
using QFamily = std::vector<QMember<Elem>>;

enum class DeltaVariant { standard, prime };

template <class T>
struct FamilyDelta {
    T value{0};
    bool any_overlap = false;
    std::pair<std::size_t, std::size_t> witness{0, 0};
};

// standard: thickening 5 delta over pairs distinct as (H, Y).
// prime: thickening 12 delta over all ordered member pairs, each member
// standing for a different coset translate.
template <class S, class Elem, class T = metric_t<S>>
FamilyDelta<T> delta_of_family(const S& s, const QFamily<Elem>& q, const T& delta,
                               DeltaVariant variant = DeltaVariant::standard) {
    FamilyDelta<T> rep;
    const T A = variant == DeltaVariant::standard ? T(5) * delta : T(12) * delta;
    std::vector<Subset> thick;
    for (const auto& m : q) thick.push_back(neighborhood(s, m.Y, A));
    for (std::size_t i = 0; i < q.size(); ++i)
        for (std::size_t j = i + 1; j < q.size(); ++j) {
            if (variant == DeltaVariant::standard && q[i].h_key == q[j].h_key && q[i].Y == q[j].Y) continue;
            auto d = diameter_of(s, subset_intersection(thick[i], thick[j]));
            if (!d) continue;
            if (!rep.any_overlap || *d > rep.value) {
                rep.value = *d;
                rep.witness = {i, j};
            }
            rep.any_overlap = true;
        }
    return rep;
}

template <class T, class Elem, class LengthFn>
Extended<T> t_of_family(const QFamily<Elem>& q, LengthFn&& translation_length) {
    Extended<T> best = Extended<T>::inf();
    for (const auto& m : q)
        for (const auto& h : m.elements) best = ext_min(best, Extended<T>::of(translation_length(h)));
    return best;
}

struct ScHypothesisReport {
    double delta = 0;
    double delta0 = 0;
    double Delta = 0;
    ExtLength Delta0 = ExtLength::inf();
    ExtLength T = ExtLength::inf();
    double threshold = 0;  // pi sinh rho
    bool delta_ok = false;
    bool Delta_ok = false;
    bool T_ok = false;
    bool all() const { return delta_ok && Delta_ok && T_ok; }
};

inline ScHypothesisReport sc_hypothesis_report(double delta, double Delta, const ExtLength& T, double rho, double delta0,
                                               const ExtLength& Delta0) {
    if (!(rho > 0.0)) throw InputError(ErrorCode::invalid_argument, "rho must be positive");
    ScHypothesisReport rep;
    rep.delta = delta;
    rep.delta0 = delta0;
    rep.Delta = Delta;
    rep.Delta0 = Delta0;
    rep.T = T;
    rep.threshold = std::numbers::pi * std::sinh(rho);
    rep.delta_ok = delta <= delta0;
    rep.Delta_ok = Delta0.infinite || Delta <= Delta0.value;
    rep.T_ok = T.infinite || T.value >= rep.threshold;
    return rep;
}

}  // namespace hypersc
