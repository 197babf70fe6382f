#pragma once

#include "hyperbolicity.hpp"
#include "space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace hypersc {

using Perm = std::vector<std::size_t>;

// Cone of radius rho over a finite base, base metric in double precision.
struct ConeSpec {
    FiniteLengthSpace<double> base;
    double rho = 1.0;

    ConeSpec(FiniteLengthSpace<double> b, double r) : base(std::move(b)), rho(r) {
        if (!(rho > 0) || !std::isfinite(rho)) throw InputError(ErrorCode::invalid_argument, "cone radius must be positive");
    }
};

// Point (y, r) of the cone; r = 0 is the apex whatever y is.
struct ConePoint {
    std::size_t y = 0;
    double r = 0.0;

    static ConePoint apex() { return {0, 0.0}; }
    bool is_apex() const { return r == 0.0; }
};

namespace detail {
// acosh(1 + u) for u >= 0 without cancellation near u = 0.
inline double acosh1p(double u) {
    if (u <= 0) return 0.0;
    return std::log1p(u + std::sqrt(u * (u + 2.0)));
}
}  // namespace detail

// Distance in a hyperbolic cone between (y, r) and (y', r') when the base
// points are at distance dbase.
inline double cone_distance_raw(double rho, double dbase, double r1, double r2) {
    if (r1 == 0.0) return r2;
    if (r2 == 0.0) return r1;
    const double theta = std::min(std::numbers::pi, dbase / std::sinh(rho));
    if (theta >= std::numbers::pi) return r1 + r2;
    if (theta == 0.0) return std::fabs(r1 - r2);
    // cosh d - 1 = 2 sinh^2((r-r')/2) + 2 sinh r sinh r' sin^2(theta/2)
    const double a = std::sinh((r1 - r2) / 2.0);
    const double b = std::sin(theta / 2.0);
    const double u = 2.0 * a * a + 2.0 * std::sinh(r1) * std::sinh(r2) * b * b;
    return detail::acosh1p(u);
}

inline void check_cone_point(const ConeSpec& spec, const ConePoint& p) {
    if (!(p.r >= 0.0) || p.r > spec.rho) throw InputError(ErrorCode::invalid_argument, "radial coordinate outside [0, rho]");
    if (!p.is_apex() && p.y >= spec.base.size()) throw InputError(ErrorCode::unknown_point, "cone base point out of range");
}

inline double cone_distance(const ConeSpec& spec, const ConePoint& p, const ConePoint& q) {
    check_cone_point(spec, p);
    check_cone_point(spec, q);
    if (p.is_apex() || q.is_apex()) return p.is_apex() ? q.r : p.r;
    return cone_distance_raw(spec.rho, spec.base.d(p.y, q.y), p.r, q.r);
}

// Comparison map: cosh mu(t) = cosh^2 rho - sinh^2 rho cos(min{pi, t / sinh rho}).
inline double mu(double t, double rho) {
    if (!(t >= 0.0)) throw InputError(ErrorCode::invalid_argument, "mu needs t >= 0");
    if (!(rho > 0.0)) throw InputError(ErrorCode::invalid_argument, "mu needs rho > 0");
    const double sr = std::sinh(rho);
    const double theta = std::min(std::numbers::pi, t / sr);
    if (theta >= std::numbers::pi) return 2.0 * rho;
    const double b = sr * std::sin(theta / 2.0);
    return detail::acosh1p(2.0 * b * b);
}

// Cubic coefficient in the lower bound t - a t^3 <= mu(t).
inline double mu_cubic_coefficient(double rho) {
    const double s = std::sinh(rho);
    return (1.0 + 1.0 / (s * s)) / 24.0;
}

struct MuBoundsReport {
    double rho = 0;
    std::size_t points = 0;
    double lower_slack = 0;  // min over grid of mu(t) - (t - a t^3)
    double upper_slack = 0;  // min of t - mu(t)
    double sinh_slack = 0;   // min of pi sinh(mu(t)/2) - t, on [0, pi sinh rho]
    double worst_lower_t = 0;
    double worst_upper_t = 0;
    double worst_sinh_t = 0;
    bool monotone = true;
    bool concave = true;
};

inline MuBoundsReport mu_bounds_check(double rho, const std::vector<double>& grid) {
    MuBoundsReport rep;
    rep.rho = rho;
    rep.points = grid.size();
    const double a = mu_cubic_coefficient(rho);
    const double tmax = std::numbers::pi * std::sinh(rho);
    bool first = true;
    bool first_sinh = true;
    for (double t : grid) {
        const double m = mu(t, rho);
        const double lo = m - (t - a * t * t * t);
        const double up = t - m;
        if (first || lo < rep.lower_slack) rep.lower_slack = lo, rep.worst_lower_t = t;
        if (first || up < rep.upper_slack) rep.upper_slack = up, rep.worst_upper_t = t;
        first = false;
        if (t <= tmax) {
            const double sn = std::numbers::pi * std::sinh(m / 2.0) - t;
            if (first_sinh || sn < rep.sinh_slack) rep.sinh_slack = sn, rep.worst_sinh_t = t;
            first_sinh = false;
        }
    }
    std::vector<double> ts(grid);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    for (std::size_t i = 1; i < ts.size(); ++i)
        if (mu(ts[i], rho) < mu(ts[i - 1], rho) - 1e-12) rep.monotone = false;
    // second differences on [0, pi sinh rho]; uniform spacing not assumed
    for (std::size_t i = 1; i + 1 < ts.size(); ++i) {
        if (ts[i + 1] > tmax) break;
        const double s1 = (mu(ts[i], rho) - mu(ts[i - 1], rho)) / (ts[i] - ts[i - 1]);
        const double s2 = (mu(ts[i + 1], rho) - mu(ts[i], rho)) / (ts[i + 1] - ts[i]);
        if (s2 > s1 + 1e-7) rep.concave = false;
    }
    return rep;
}

inline std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
    std::vector<double> g;
    if (points == 0) return g;
    if (points == 1) return {lo};
    g.reserve(points);
    for (std::size_t i = 0; i < points; ++i) g.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
    return g;
}

inline void check_base_isometry(const FiniteLengthSpace<double>& base, const Perm& h) {
    const std::size_t n = base.size();
    if (h.size() != n) throw InputError(ErrorCode::validation, "permutation has wrong length");
    std::vector<char> hit(n, 0);
    for (std::size_t v : h) {
        if (v >= n || hit[v]) throw InputError(ErrorCode::validation, "not a permutation");
        hit[v] = 1;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (std::fabs(base.d(h[i], h[j]) - base.d(i, j)) > 1e-9)
                throw InputError(ErrorCode::validation, "permutation does not preserve distances");
}

inline bool is_identity(const Perm& h) {
    for (std::size_t i = 0; i < h.size(); ++i)
        if (h[i] != i) return false;
    return true;
}

inline ConePoint act(const Perm& h, const ConePoint& p) { return p.is_apex() ? p : ConePoint{h[p.y], p.r}; }

struct RotationDisplacementReport {
    double min_translation = 0;  // over nontrivial h, of min_y d(hy, y)
    double threshold = 0;        // pi sinh rho
    bool hypothesis = false;
    bool holds = true;            // d(hp, p) = 2r for every nontrivial h (when hypothesis)
    double max_deviation = 0;
    std::vector<double> displacements;  // per h
};

inline RotationDisplacementReport rotation_displacement_check(const ConeSpec& spec, const std::vector<Perm>& H,
                                                              const ConePoint& p) {
    check_cone_point(spec, p);
    RotationDisplacementReport rep;
    rep.threshold = std::numbers::pi * std::sinh(spec.rho);
    bool any = false;
    for (const auto& h : H) {
        check_base_isometry(spec.base, h);
        if (is_identity(h)) continue;
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t y = 0; y < spec.base.size(); ++y) m = std::min(m, spec.base.d(h[y], y));
        rep.min_translation = any ? std::min(rep.min_translation, m) : m;
        any = true;
    }
    rep.hypothesis = !any || rep.min_translation >= rep.threshold * (1 - 1e-12);
    for (const auto& h : H) {
        const double disp = cone_distance(spec, act(h, p), p);
        rep.displacements.push_back(disp);
        if (rep.hypothesis && !is_identity(h)) {
            const double dev = std::fabs(disp - 2.0 * p.r);
            rep.max_deviation = std::max(rep.max_deviation, dev);
            if (dev > 1e-9) rep.holds = false;
        }
    }
    return rep;
}

inline double quotient_cone_distance(const ConeSpec& spec, const std::vector<Perm>& H, const ConePoint& p,
                                     const ConePoint& q) {
    double best = cone_distance(spec, p, q);
    for (const auto& h : H) {
        check_base_isometry(spec.base, h);
        best = std::min(best, cone_distance(spec, p, act(h, q)));
    }
    return best;
}

// Finite metric space on {apex} and base x levels, with exact cone distances.
inline FiniteLengthSpace<double> sample_cone_space(const ConeSpec& spec, const std::vector<double>& levels,
                                                   bool validate = true) {
    for (double r : levels)
        if (!(r > 0.0) || r > spec.rho) throw InputError(ErrorCode::invalid_argument, "levels must lie in (0, rho]");
    std::vector<std::string> ids{"apex"};
    std::vector<ConePoint> pts{ConePoint::apex()};
    for (std::size_t y = 0; y < spec.base.size(); ++y)
        for (double r : levels) {
            char buf[48];
            std::snprintf(buf, sizeof buf, "@%.17g", r);
            ids.push_back(spec.base.id(y) + buf);
            pts.push_back({y, r});
        }
    const std::size_t n = pts.size();
    std::vector<double> tab(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) tab[i * n + j] = tab[j * n + i] = cone_distance(spec, pts[i], pts[j]);
    return FiniteLengthSpace<double>::from_metric(std::move(ids), std::move(tab), validate);
}

inline std::vector<double> level_radii(double rho, std::size_t k) {
    std::vector<double> out;
    for (std::size_t i = 1; i <= k; ++i) out.push_back(rho * static_cast<double>(i) / static_cast<double>(k));
    return out;
}

// Cycle graph with m vertices and total length circumference.
inline FiniteLengthSpace<double> cycle_space(std::size_t m, double circumference) {
    std::vector<std::string> ids;
    std::vector<FiniteLengthSpace<double>::Edge> es;
    for (std::size_t i = 0; i < m; ++i) {
        ids.push_back("c" + std::to_string(i));
        if (m > 1) es.push_back({i, (i + 1) % m, circumference / static_cast<double>(m)});
    }
    if (m == 2) es.pop_back();
    return FiniteLengthSpace<double>::from_indexed_graph(std::move(ids), std::move(es));
}

// Estimate of the four-point constant of the hyperbolic plane. Random
// quadruples in polar coordinates (radius uniform in [0, max_radius], angle
// uniform) and the largest observed half sum-gap. The analytic value is log 2.
struct BoldDeltaOracle {
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 20240613;
    double max_radius = 12.0;
};

inline double hyperbolic_plane_distance(double r1, double a1, double r2, double a2) {
    const double dr = std::sinh((r1 - r2) / 2.0);
    const double s = std::sin((a1 - a2) / 2.0);
    return detail::acosh1p(2.0 * dr * dr + 2.0 * std::sinh(r1) * std::sinh(r2) * s * s);
}

inline double bold_delta_estimate(const BoldDeltaOracle& cfg = {}) {
    constexpr std::size_t blocks = 64;
    return map_reduce_blocks(
        blocks, 0.0,
        [&](std::size_t b) {
            std::mt19937_64 rng(cfg.seed * 0x9E3779B97F4A7C15ULL + b);
            std::uniform_real_distribution<double> rad(0.0, cfg.max_radius);
            std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
            const std::uint64_t count = cfg.samples / blocks + (b < cfg.samples % blocks ? 1 : 0);
            double best = 0.0;
            for (std::uint64_t s = 0; s < count; ++s) {
                double r[4], a[4];
                for (int i = 0; i < 4; ++i) r[i] = rad(rng), a[i] = ang(rng);
                auto D = [&](int i, int j) { return hyperbolic_plane_distance(r[i], a[i], r[j], a[j]); };
                const double g = detail::sum_gap<double>(D(0, 1) + D(2, 3), D(0, 2) + D(1, 3), D(0, 3) + D(1, 2));
                best = std::max(best, g / 2.0);
            }
            return best;
        },
        [](double x, double y) { return std::max(x, y); });
}

// Frozen output of bold_delta_estimate() at its default configuration; a test
// re-runs the estimator and compares.
inline constexpr double BOLD_DELTA = 0.69313138403014918;

}  // namespace hypersc
