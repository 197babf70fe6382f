#include "support.hpp"

#include "hypersc/convexity.hpp"
#include "hypersc/hyperbolicity.hpp"

#include <gtest/gtest.h>

using namespace hypersc;
using namespace hypersc::testing;

namespace {

FiniteLengthSpace<Rational> path_graph(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> es;
    for (std::size_t i = 0; i + 1 < n; ++i) es.emplace_back(i, i + 1);
    return unit_graph(n, es);
}

// Brute force over index pairs, separate from the library scan.
bool qg_oracle(const FiniteLengthSpace<Rational>& s, const DiscretePath<Rational>& p, const Rational& k,
               const Rational& l) {
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j) {
            Rational t = abs(p.cumlen[j] - p.cumlen[i]);
            if (t > k * s.d(p.points[i], p.points[j]) + l) return false;
        }
    return true;
}

}  // namespace

TEST(QuasiGeodesic, ShortestPathsAreGeodesic) {
    Rng rng(3);
    auto s = random_graph(rng, 15, 10);
    for (std::size_t a = 0; a < s.size(); a += 3)
        for (std::size_t b = 0; b < s.size(); b += 2) {
            auto p = geodesic(s, a, b);
            EXPECT_EQ(p.length(), s.d(a, b));
            EXPECT_TRUE(is_quasi_geodesic(s, p, Rational(1), Rational(0)).holds);
        }
}

TEST(QuasiGeodesic, BacktrackNeedsAdditiveTwo) {
    auto s = path_graph(2);
    auto p = make_path(s, {0, 1, 0});
    EXPECT_FALSE(is_quasi_geodesic(s, p, Rational(1), Rational(0)).holds);
    EXPECT_TRUE(is_quasi_geodesic(s, p, Rational(1), Rational(2)).holds);
}

TEST(QuasiGeodesic, RejectsNonAdjacentSteps) {
    auto s = path_graph(4);
    EXPECT_THROW(make_path(s, {0, 2}), InputError);
    EXPECT_THROW(is_quasi_geodesic(s, make_path(s, {0, 1}), Rational(1, 2), Rational(0)), InputError);
}

TEST(QuasiGeodesic, RandomWalksMatchPairOracle) {
    Rng rng(5);
    auto s = random_graph(rng, 12, 8);
    for (int t = 0; t < 40; ++t) {
        std::vector<std::size_t> pts{0};
        for (int step = 0; step < 10; ++step) {
            std::vector<std::size_t> nb;
            for (std::size_t v = 0; v < s.size(); ++v)
                if (s.adjacent(pts.back(), v)) nb.push_back(v);
            pts.push_back(nb[std::uniform_int_distribution<std::size_t>(0, nb.size() - 1)(rng)]);
        }
        auto p = make_path(s, pts);
        for (auto [k, l] : {std::pair{Rational(1), Rational(0)}, {Rational(2), Rational(1)}, {Rational(1), Rational(4)}})
            EXPECT_EQ(is_quasi_geodesic(s, p, k, l).holds, qg_oracle(s, p, k, l));
    }
}

TEST(QuasiGeodesic, HexagonIsLocalButNotGlobal) {
    auto s = circulant(6, {1});
    auto p = make_path(s, {0, 1, 2, 3, 4, 5, 0});
    EXPECT_TRUE(is_local_quasi_geodesic(s, p, Rational(2), Rational(1), Rational(0)).holds);
    EXPECT_FALSE(is_quasi_geodesic(s, p, Rational(1), Rational(0)).holds);
    EXPECT_TRUE(is_local_quasi_geodesic(s, p, Rational(1, 2), Rational(1), Rational(0)).holds);
}

TEST(QuasiConvexity, Examples) {
    auto p5 = path_graph(5);
    EXPECT_EQ(quasi_convexity_constant(p5, Subset{0, 4}), Rational(2));
    EXPECT_EQ(quasi_convexity_constant(p5, Subset{2}), Rational(0));
    EXPECT_EQ(quasi_convexity_constant(p5, Subset{0, 1, 2, 3, 4}), Rational(0));
    EXPECT_THROW(quasi_convexity_constant(p5, Subset{}), InputError);
}

TEST(Projection, TiesAndSlack) {
    auto p3 = path_graph(3);
    EXPECT_EQ(projection(p3, 1, Subset{0, 2}, Rational(0)), (Subset{0, 2}));
    EXPECT_EQ(projection(p3, 0, Subset{0, 2}, Rational(0)), (Subset{0}));
    EXPECT_EQ(projection(p3, 0, Subset{0, 2}, Rational(5)), (Subset{0, 2}));
}

TEST(Neighborhood, Examples) {
    auto p5 = path_graph(5);
    EXPECT_EQ(neighborhood(p5, Subset{0, 4}, Rational(1)).size(), 4u);
    EXPECT_EQ(neighborhood(p5, Subset{0, 4}, Rational(0)), (Subset{0, 4}));
    EXPECT_EQ(neighborhood(p5, Subset{0}, Rational(100)).size(), 5u);
}

TEST(Hull, Examples) {
    auto c4 = circulant(4, {1});
    EXPECT_EQ(hull(c4, Subset{0, 2}, Rational(0)).size(), 4u);
    Rng rng(9);
    auto t = random_tree(rng, 12);
    Subset y{0, 5, 9};
    auto h = hull(t, y, Rational(0));
    for (std::size_t v = 0; v < t.size(); ++v) {
        bool on = false;
        for (std::size_t a : y)
            for (std::size_t b : y) on = on || t.d(a, v) + t.d(v, b) == t.d(a, b);
        EXPECT_EQ(subset_contains(h, v), on);
    }
    EXPECT_TRUE(std::includes(hull(t, h, Rational(0)).begin(), hull(t, h, Rational(0)).end(), h.begin(), h.end()));
}

TEST(Intersection, EmptyIsDistinctFromZero) {
    auto p5 = path_graph(5);
    EXPECT_FALSE(diam_intersection(p5, Subset{0}, Rational(0), Subset{4}, Rational(1)).has_value());
    auto d = diam_intersection(p5, Subset{0}, Rational(2), Subset{4}, Rational(2));
    ASSERT_TRUE(d.has_value());
    EXPECT_EQ(*d, Rational(0));
}

TEST(StrongQc, Examples) {
    Rng rng(21);
    auto t = random_tree(rng, 10);
    auto r = strong_quasi_convexity_check(t, hull(t, Subset{0, 7}, Rational(0)), Rational(0));
    EXPECT_TRUE(r.path_connected);
    EXPECT_EQ(r.excess, Rational(0));
    EXPECT_TRUE(r.verdict);

    auto c6 = circulant(6, {1});
    EXPECT_FALSE(strong_quasi_convexity_check(c6, Subset{0, 3}, Rational(1)).verdict);
    auto four = strong_quasi_convexity_check(c6, Subset{0, 1, 2, 3}, hyperbolicity_delta(c6).delta_product);
    EXPECT_TRUE(four.path_connected);
    EXPECT_EQ(four.excess, Rational(0));
    EXPECT_EQ(four.alpha, quasi_convexity_constant(c6, Subset{0, 1, 2, 3}));
}

// Properties on random graphs, delta = product constant of the ambient space.

TEST(Property, QuasiGeodesicsAreQuasiConvex) {
    Rng rng(31);
    for (int t = 0; t < 10; ++t) {
        auto s = random_graph(rng, 12 + t, 4 + t);
        const Rational delta = hyperbolicity_delta(s).delta_product;
        for (std::size_t a = 0; a < s.size(); a += 4)
            for (std::size_t b = a + 1; b < s.size(); b += 3) {
                auto p = geodesic(s, a, b);
                EXPECT_LE(quasi_convexity_constant(s, make_subset(p.points)), 3 * delta);
            }
    }
}

TEST(Property, NeighborhoodOfQuasiConvexSet) {
    Rng rng(37);
    for (int t = 0; t < 10; ++t) {
        auto s = random_graph(rng, 14, 6);
        const Rational delta = hyperbolicity_delta(s).delta_product;
        Subset y = random_connected_subset(rng, s, 4);
        const Rational alpha = quasi_convexity_constant(s, y);
        for (Rational A : {alpha, alpha + 1, alpha + 3})
            EXPECT_LE(quasi_convexity_constant(s, neighborhood(s, y, A)), 2 * delta);
    }
}

TEST(Property, HullIsQuasiConvex) {
    Rng rng(41);
    for (int t = 0; t < 10; ++t) {
        auto s = random_graph(rng, 14, 7);
        const Rational delta = hyperbolicity_delta(s).delta_product;
        Subset y = random_connected_subset(rng, s, 3);
        EXPECT_LE(quasi_convexity_constant(s, hull(s, y, delta)), 6 * delta);
    }
}

TEST(Property, IntersectionOfThickenedSets) {
    Rng rng(43);
    for (int t = 0; t < 10; ++t) {
        auto s = random_graph(rng, 14, 6);
        const Rational delta = hyperbolicity_delta(s).delta_product;
        Subset y1 = random_connected_subset(rng, s, 4), y2 = random_connected_subset(rng, s, 4);
        const Rational a1 = quasi_convexity_constant(s, y1), a2 = quasi_convexity_constant(s, y2);
        Subset inter = subset_intersection(neighborhood(s, y1, a1 + 3 * delta), neighborhood(s, y2, a2 + 3 * delta));
        if (!inter.empty()) EXPECT_LE(quasi_convexity_constant(s, inter), 7 * delta);
        for (Rational A : {Rational(0), Rational(1), Rational(3)}) {
            auto big = diam_intersection(s, y1, A, y2, A);
            auto small = diam_intersection(s, y1, a1 + 3 * delta, y2, a2 + 3 * delta);
            if (big && small) EXPECT_LE(*big, *small + 2 * A + 4 * delta);
        }
    }
}

TEST(Property, DiamIntersectionMatchesPairwiseOracle) {
    Rng rng(47);
    auto s = random_graph(rng, 16, 8);
    for (int t = 0; t < 10; ++t) {
        Subset y1 = random_connected_subset(rng, s, 3), y2 = random_connected_subset(rng, s, 3);
        Rational A(t % 4);
        std::optional<Rational> oracle;
        for (std::size_t u = 0; u < s.size(); ++u)
            for (std::size_t v = 0; v < s.size(); ++v) {
                auto in = [&](std::size_t x) { return s.dist_to_set(x, y1) <= A && s.dist_to_set(x, y2) <= A; };
                if (in(u) && in(v) && (!oracle || s.d(u, v) > *oracle)) oracle = s.d(u, v);
            }
        EXPECT_EQ(diam_intersection(s, y1, A, y2, A), oracle);
    }
}

TEST(Property, TreeStabilityOfLocalGeodesics) {
    // On a tree two local (1,0)-geodesics with equal endpoints coincide.
    Rng rng(53);
    auto s = random_tree(rng, 14);
    for (std::size_t a = 0; a < s.size(); ++a) {
        auto p = geodesic(s, 0, a);
        EXPECT_TRUE(is_local_quasi_geodesic(s, p, Rational(1000), Rational(1), Rational(0)).holds);
        for (std::size_t v : p.points) EXPECT_EQ(s.d(0, v) + s.d(v, a), s.d(0, a));
    }
}
