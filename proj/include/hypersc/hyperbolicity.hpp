#pragma once

#include "parallel.hpp"
#include "space.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <tuple>
#include <vector>

namespace hypersc {

template <class S>
metric_t<S> gromov_product(const S& s, std::size_t x, std::size_t y, std::size_t z) {
    return half(metric_t<S>(s.d(x, z) + s.d(y, z) - s.d(x, y)));
}

template <class T>
struct DeltaReport {
    T delta_four_point{0};
    T delta_product{0};
    std::array<std::size_t, 4> witness{0, 0, 0, 0};
    std::array<std::size_t, 4> product_witness{0, 0, 0, 0};  // (x, y, z, t)
    bool sampled = false;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

struct DeltaOptions {
    std::size_t cap = 256;            // exhaustive up to this many points
    std::uint64_t samples = 2000000;  // quadruples drawn beyond the cap
    std::uint64_t seed = 1;
};

namespace detail {

// Distances rescaled to a common integer grid, when that fits in int64 with
// headroom for sums of two distances.
inline std::optional<std::pair<std::vector<std::int64_t>, BigInt>> integerize(const std::vector<Rational>& tab) {
    BigInt lcm = 1;
    const BigInt den_cap = BigInt(1) << 40;
    for (const auto& x : tab) {
        BigInt den = boost::multiprecision::denominator(x);
        if (den == 1) continue;
        lcm = lcm / boost::multiprecision::gcd(lcm, den) * den;
        if (lcm > den_cap) return std::nullopt;
    }
    const BigInt lim = BigInt(1) << 59;
    std::vector<std::int64_t> out;
    out.reserve(tab.size());
    for (const auto& x : tab) {
        BigInt v = boost::multiprecision::numerator(x) * (lcm / boost::multiprecision::denominator(x));
        if (v > lim || v < -lim) return std::nullopt;
        out.push_back(v.convert_to<std::int64_t>());
    }
    return std::make_pair(std::move(out), lcm);
}

template <class K>
struct QuadBest {
    bool found = false;
    K value{};
    std::array<std::size_t, 4> at{0, 0, 0, 0};
};

template <class K>
QuadBest<K> fold_best(QuadBest<K> a, QuadBest<K> b) {
    if (!b.found) return a;
    if (!a.found || b.value > a.value) return b;
    return a;
}

template <class K>
K sum_gap(const K& s1, const K& s2, const K& s3) {
    // largest minus second largest
    K hi = s1, mid = s2, lo = s3;
    if (mid > hi) std::swap(hi, mid);
    if (lo > hi) std::swap(hi, lo);
    if (lo > mid) std::swap(mid, lo);
    return hi - mid;
}

// Sum-gap kernel: max over i<j<k<l of (largest pair sum - second largest).
template <class K>
QuadBest<K> four_point_exhaustive(const std::vector<K>& d, std::size_t n) {
    auto D = [&](std::size_t a, std::size_t b) -> const K& { return d[a * n + b]; };
    return map_reduce_blocks(
        n, QuadBest<K>{},
        [&](std::size_t i) {
            QuadBest<K> best;
            for (std::size_t j = i + 1; j < n; ++j)
                for (std::size_t k = j + 1; k < n; ++k)
                    for (std::size_t l = k + 1; l < n; ++l) {
                        K g = sum_gap<K>(D(i, j) + D(k, l), D(i, k) + D(j, l), D(i, l) + D(j, k));
                        if (!best.found || g > best.value) best = {true, g, {i, j, k, l}};
                    }
            return best;
        },
        fold_best<K>);
}

// Twice the condition-(1) defect at basepoint t, maximised over (x, y, z).
template <class K>
QuadBest<K> product_exhaustive(const std::vector<K>& d, std::size_t n) {
    auto D = [&](std::size_t a, std::size_t b) -> const K& { return d[a * n + b]; };
    return map_reduce_blocks(
        n, QuadBest<K>{},
        [&](std::size_t t) {
            QuadBest<K> best;
            for (std::size_t x = 0; x < n; ++x)
                for (std::size_t z = x; z < n; ++z) {
                    K gxz = D(x, t) + D(z, t) - D(x, z);
                    for (std::size_t y = 0; y < n; ++y) {
                        K gxy = D(x, t) + D(y, t) - D(x, y);
                        K gyz = D(y, t) + D(z, t) - D(y, z);
                        K v = (gxy < gyz ? gxy : gyz) - gxz;
                        if (!best.found || v > best.value) best = {true, v, {x, y, z, t}};
                    }
                }
            return best;
        },
        fold_best<K>);
}

template <class K>
std::pair<QuadBest<K>, QuadBest<K>> sampled_kernels(const std::vector<K>& d, std::size_t n, std::uint64_t samples,
                                                    std::uint64_t seed) {
    auto D = [&](std::size_t a, std::size_t b) -> const K& { return d[a * n + b]; };
    constexpr std::size_t blocks = 64;
    using Pair = std::pair<QuadBest<K>, QuadBest<K>>;
    return map_reduce_blocks(
        blocks, Pair{},
        [&](std::size_t b) {
            std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + b);
            std::uniform_int_distribution<std::size_t> pick(0, n - 1);
            std::uint64_t count = samples / blocks + (b < samples % blocks ? 1 : 0);
            Pair best;
            for (std::uint64_t s = 0; s < count; ++s) {
                std::size_t i = pick(rng), j = pick(rng), k = pick(rng), l = pick(rng);
                K g = sum_gap<K>(D(i, j) + D(k, l), D(i, k) + D(j, l), D(i, l) + D(j, k));
                if (!best.first.found || g > best.first.value) best.first = {true, g, {i, j, k, l}};
                K gxz = D(i, l) + D(k, l) - D(i, k);
                K gxy = D(i, l) + D(j, l) - D(i, j);
                K gyz = D(j, l) + D(k, l) - D(j, k);
                K v = (gxy < gyz ? gxy : gyz) - gxz;
                if (!best.second.found || v > best.second.value) best.second = {true, v, {i, j, k, l}};
            }
            return best;
        },
        [](Pair a, Pair b) { return Pair{fold_best(a.first, b.first), fold_best(a.second, b.second)}; });
}

template <class K, class T, class Back>
DeltaReport<T> delta_from_kernel(const std::vector<K>& d, std::size_t n, const DeltaOptions& opt, Back&& back) {
    DeltaReport<T> rep;
    if (n < 2) return rep;
    QuadBest<K> fp, pr;
    if (n <= opt.cap) {
        fp = four_point_exhaustive(d, n);
        pr = product_exhaustive(d, n);
    } else {
        std::tie(fp, pr) = sampled_kernels(d, n, opt.samples, opt.seed);
        rep.sampled = true;
        rep.samples = opt.samples;
        rep.seed = opt.seed;
    }
    if (fp.found && fp.value > K(0)) {
        rep.delta_four_point = half(back(fp.value));
        rep.witness = fp.at;
    } else if (fp.found) {
        rep.witness = fp.at;
    }
    if (pr.found && pr.value > K(0)) rep.delta_product = half(back(pr.value));
    if (pr.found) rep.product_witness = pr.at;
    return rep;
}

}  // namespace detail

// Both hyperbolicity constants of a finite space: the sum-gap constant and
// the Gromov-product constant. Exhaustive up to opt.cap points.
inline DeltaReport<Rational> hyperbolicity_delta(const FiniteLengthSpace<Rational>& s, const DeltaOptions& opt = {}) {
    const std::size_t n = s.size();
    if (auto ints = detail::integerize(s.table())) {
        const BigInt& scale = ints->second;
        return detail::delta_from_kernel<std::int64_t, Rational>(
            ints->first, n, opt, [&](std::int64_t v) { return Rational(BigInt(v), scale); });
    }
    return detail::delta_from_kernel<Rational, Rational>(s.table(), n, opt, [](const Rational& v) { return v; });
}

inline DeltaReport<double> hyperbolicity_delta(const FiniteLengthSpace<double>& s, const DeltaOptions& opt = {}) {
    return detail::delta_from_kernel<double, double>(s.table(), s.size(), opt, [](double v) { return v; });
}

// Four-point constant of an arbitrary distance table (used for balls and
// sampled subsets that are not themselves graph metrics).
template <class T>
T four_point_delta_of_table(const std::vector<T>& d, std::size_t n) {
    if (n < 4) return T(0);
    auto best = detail::four_point_exhaustive(d, n);
    return best.value > T(0) ? half(best.value) : T(0);
}

template <class T>
struct BasepointReport {
    bool holds = true;
    T worst_violation{0};  // max of min{<x,y>_t,<y,z>_t} - delta - <x,z>_t
    std::array<std::size_t, 3> witness{0, 0, 0};
};

template <class T>
BasepointReport<T> check_basepoint_criterion(const FiniteLengthSpace<T>& s, std::size_t t, const T& delta) {
    if (t >= s.size()) throw InputError(ErrorCode::unknown_point, "basepoint out of range");
    const std::size_t n = s.size();
    BasepointReport<T> rep;
    bool first = true;
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t z = 0; z < n; ++z) {
                T a = gromov_product(s, x, y, t);
                T b = gromov_product(s, y, z, t);
                T v = (a < b ? a : b) - delta - gromov_product(s, x, z, t);
                if (first || v > rep.worst_violation) {
                    rep.worst_violation = v;
                    rep.witness = {x, y, z};
                    first = false;
                }
            }
    rep.holds = le_tol(rep.worst_violation, T(0));
    return rep;
}

template <class T>
struct LocalDeltaProfile {
    T sigma{0};
    std::vector<T> ball_delta;  // per center, four-point constant of B(c, sigma)
    T local_delta{0};
    DeltaReport<T> global;
    bool prediction_holds = true;       // global <= 300 * local
    bool sigma_hypothesis = true;       // sigma > 1e7 * local
    bool simply_connected_certified = true;
    T max_fundamental_cycle_diameter{0};
};

// Ball-by-ball four-point constants against the global one. The simple
// connectivity clause is certified when the space is a tree or every
// fundamental cycle of a BFS spanning tree has diameter below 1e-5 * sigma.
template <class T>
LocalDeltaProfile<T> local_delta_profile(const FiniteLengthSpace<T>& s, const T& sigma, const DeltaOptions& opt = {}) {
    if (!(sigma > 0)) throw InputError(ErrorCode::invalid_argument, "sigma must be positive");
    const std::size_t n = s.size();
    LocalDeltaProfile<T> rep;
    rep.sigma = sigma;
    rep.ball_delta.assign(n, T(0));
    for_each_block(n, [&](std::size_t c) {
        std::vector<std::size_t> ball;
        for (std::size_t x = 0; x < n; ++x)
            if (s.d(c, x) <= sigma) ball.push_back(x);
        std::vector<T> sub(ball.size() * ball.size());
        for (std::size_t i = 0; i < ball.size(); ++i)
            for (std::size_t j = 0; j < ball.size(); ++j) sub[i * ball.size() + j] = s.d(ball[i], ball[j]);
        rep.ball_delta[c] = four_point_delta_of_table(sub, ball.size());
    });
    for (const auto& v : rep.ball_delta)
        if (v > rep.local_delta) rep.local_delta = v;
    rep.global = hyperbolicity_delta(s, opt);
    rep.prediction_holds = le_tol(rep.global.delta_four_point, T(300) * rep.local_delta);
    rep.sigma_hypothesis = sigma > T(10000000) * rep.local_delta;

    // fundamental cycles of a BFS tree from vertex 0
    if (n > 0) {
        std::vector<std::ptrdiff_t> parent(n, -1);
        std::vector<char> seen(n, 0);
        std::vector<std::size_t> order{0};
        seen[0] = 1;
        for (std::size_t h = 0; h < order.size(); ++h)
            for (const auto& [k, w] : s.adjacency()[order[h]])
                if (!seen[k]) {
                    seen[k] = 1;
                    parent[k] = static_cast<std::ptrdiff_t>(order[h]);
                    order.push_back(k);
                }
        auto path_to_root = [&](std::size_t v) {
            std::vector<std::size_t> p{v};
            while (parent[p.back()] >= 0) p.push_back(static_cast<std::size_t>(parent[p.back()]));
            return p;
        };
        const T bound = sigma / T(100000);
        for (const auto& e : s.edges()) {
            if (parent[e.v] == static_cast<std::ptrdiff_t>(e.u) || parent[e.u] == static_cast<std::ptrdiff_t>(e.v))
                continue;
            auto pu = path_to_root(e.u);
            auto pv = path_to_root(e.v);
            std::vector<std::size_t> cyc;
            std::set<std::size_t> inv(pv.begin(), pv.end());
            std::size_t lca = 0;
            for (std::size_t x : pu) {
                cyc.push_back(x);
                if (inv.count(x)) {
                    lca = x;
                    break;
                }
            }
            for (std::size_t x : pv) {
                if (x == lca) break;
                cyc.push_back(x);
            }
            T diam{0};
            for (std::size_t a : cyc)
                for (std::size_t b : cyc)
                    if (s.d(a, b) > diam) diam = s.d(a, b);
            if (diam > rep.max_fundamental_cycle_diameter) rep.max_fundamental_cycle_diameter = diam;
            if (!(diam < bound)) rep.simply_connected_certified = false;
        }
    }
    return rep;
}

}  // namespace hypersc
