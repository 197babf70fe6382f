#include "support.hpp"

#include "hypersc/group_actions.hpp"
#include "hypersc/hyperbolicity.hpp"

#include <gtest/gtest.h>

using namespace hypersc;
using namespace hypersc::testing;

namespace {

Perm rotation(std::size_t n, std::size_t k) {
    Perm p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = (i + k) % n;
    return p;
}

// smallest positive rotation fixing the cyclic reduction
std::size_t brute_root_length(const Word& w) {
    Word c = cyclic_reduce(w);
    for (std::size_t p = 1; p < c.size(); ++p)
        if (c.substr(p) + c.substr(0, p) == c) return p;
    return c.size();
}

}  // namespace

TEST(Words, Reduction) {
    EXPECT_EQ(reduce("aA"), "");
    EXPECT_EQ(reduce("abBAc"), "c");
    EXPECT_EQ(cyclic_reduce("baB"), "a");
    EXPECT_EQ(primitive_root("abab"), "ab");
    EXPECT_EQ(primitive_root("aaa"), "a");
    EXPECT_EQ(inverse("abC"), "cBA");
    EXPECT_THROW(parse_word("abz", 2), InputError);
    EXPECT_THROW(enumerate_ball(0, 2), InputError);
}

TEST(Words, PrimitiveRootMatchesBruteForce) {
    Rng rng(3);
    for (int t = 0; t < 200; ++t) {
        Word u = random_word(rng, 2, 1, 4);
        std::size_t k = 1 + t % 4;
        Word w;
        for (std::size_t i = 0; i < k; ++i) w += u;
        EXPECT_EQ(primitive_root(w).size(), brute_root_length(w));
        EXPECT_EQ(cyclic_reduce(w).size() % primitive_root(w).size(), 0u);
    }
}

TEST(Words, BallSize) {
    // 1 + 2r sum_{k<R} (2r-1)^k
    for (int r : {1, 2, 3})
        for (int R : {0, 1, 2, 4}) {
            std::size_t want = 1, layer = 2 * r;
            for (int k = 1; k <= R; ++k) want += layer, layer *= (2 * r - 1);
            EXPECT_EQ(enumerate_ball(r, R).size(), want);
        }
}

TEST(Elementary, FreeGroupTest) {
    EXPECT_TRUE(elementary_test_free("ab", "abab"));
    EXPECT_FALSE(elementary_test_free("a", "b"));
    EXPECT_FALSE(elementary_test_free("ab", "ba"));
    EXPECT_TRUE(elementary_test_free("ab", "BA"));
    EXPECT_TRUE(elementary_test_free("", "b"));
    EXPECT_TRUE(elementary_test_free("baB", "baaB"));
}

TEST(CayleyTree, TranslationLengthMatchesBall) {
    CayleyTreeModel m(2, 5);
    for (const char* w : {"a", "ab", "abAB", "baB", "aab", "abba"}) {
        EXPECT_EQ(m.translation_length(w), m.translation_length_on_ball(w)) << w;
    }
    EXPECT_EQ(m.translation_length("ab"), Rational(2));
    EXPECT_EQ(m.translation_length(""), Rational(0));
    EXPECT_EQ(hyperbolicity_delta(CayleyTreeModel(2, 3).to_space()).delta_four_point, Rational(0));
}

TEST(CayleyTree, StableLengthIsExact) {
    CayleyTreeModel m(2, 3);
    EXPECT_EQ(stable_length(m, "aaa", Rational(0)).estimate, Rational(3));
    EXPECT_EQ(stable_length(m, "baB", Rational(0)).estimate, Rational(1));
}

TEST(CayleyTree, AxisIsTheLine) {
    CayleyTreeModel m(2, 4);
    auto ax = axis(m, Word("a"), Rational(0));
    for (std::size_t i : ax) {
        for (char c : m.word(i)) EXPECT_TRUE(c == 'a' || c == 'A');
    }
    EXPECT_EQ(ax.size(), 9u);
    EXPECT_EQ(axis(m, Word(""), Rational(0)).size(), m.size());
}

TEST(CayleyTree, CylinderIsTheAxisLineAndNeedsHyperbolic) {
    CayleyTreeModel m(2, 4);
    auto c = cylinder(m, "ab", Rational(0));
    EXPECT_EQ(c.set, min_set(m, Word("ab")));
    EXPECT_EQ(c.boundary_vertices, 2u);
    try {
        cylinder(m, "aA", Rational(0));
        FAIL();
    } catch (const InputError& e) {
        EXPECT_EQ(e.code(), ErrorCode::not_hyperbolic);
    }
}

TEST(Finite, CycleRotation) {
    PermutationModel<Rational> m(circulant(8, {1}));
    Perm r1 = rotation(8, 1);
    EXPECT_EQ(m.translation_length(r1), Rational(1));
    EXPECT_EQ(m.translation_length(identity_perm(8)), Rational(0));
    EXPECT_EQ(axis(m, r1, Rational(1)).size(), 8u);
    EXPECT_THROW(m.validate(Perm{1, 0, 2, 3, 4, 5, 6, 7}), InputError);
}

TEST(Finite, StableLengthOfEllipticIsZeroAndBracketHolds) {
    auto s = circulant(10, {1});
    PermutationModel<Rational> m(s);
    const Rational delta = hyperbolicity_delta(s).delta_product;
    for (std::size_t k = 0; k < 10; ++k) {
        auto st = stable_length(m, rotation(10, k), 10, delta);
        EXPECT_EQ(st.estimate, Rational(0));
        EXPECT_TRUE(st.bracket_holds);
    }
    EXPECT_THROW(stable_length(m, rotation(10, 1), 0, delta), InputError);
    EXPECT_THROW(cylinder(m, rotation(10, 1), delta, 10), InputError);
}

TEST(Finite, AutomorphismCounts) {
    EXPECT_EQ(automorphisms(circulant(7, {1})).size(), 14u);
    EXPECT_EQ(automorphisms(hypercube(3)).size(), 48u);
    EXPECT_EQ(automorphisms(petersen()).size(), 120u);
    for (const auto& g : automorphisms(prism(5))) EXPECT_TRUE(is_isometry(prism(5), g));
}

TEST(Property, AxisPropertiesOnVertexTransitiveModels) {
    for (const auto& [name, s] : vertex_transitive_models()) {
        if (s.size() > 20) continue;  // the acceptance runner covers the larger ones
        PermutationModel<Rational> m(s);
        // the vertex set alone can be 0-hyperbolic (K4), the metric graph is not
        const Rational delta = hyperbolicity_delta(subdivide_edges(s)).delta_product;
        for (const auto& g : automorphisms(s)) {
            auto r = axis_property_check(m, g, delta);
            EXPECT_TRUE(r.holds()) << name << " qc " << r.qc_constant << " slack " << r.worst_displacement_slack;
        }
    }
}

TEST(Property, DisplacementConvexity) {
    for (std::size_t n : {6u, 9u}) {
        auto s = circulant(n, {1});
        PermutationModel<Rational> m(s);
        const Rational delta = hyperbolicity_delta(subdivide_edges(s)).delta_product;
        for (const auto& g : automorphisms(s)) EXPECT_LE(displacement_convexity_excess(m, g, delta), Rational(0));
    }
}

TEST(Property, StableLengthBracketOnModels) {
    for (const auto& [name, s] : vertex_transitive_models()) {
        if (s.size() > 16) continue;
        PermutationModel<Rational> m(s);
        const Rational delta = hyperbolicity_delta(subdivide_edges(s)).delta_product;
        for (const auto& g : automorphisms(s)) {
            auto st = stable_length(m, g, 8, delta);
            EXPECT_TRUE(st.bracket_holds) << name;
        }
    }
}

TEST(InvariantA, FreeGroupConventionAndScaling) {
    CayleyTreeModel m(2, 4);
    std::function<bool(const Word&, const Word&)> el = [](const Word& a, const Word& b) { return elementary_test_free(a, b); };
    auto zero = invariant_A(m, {"a", "b"}, el, Rational(0));
    EXPECT_EQ(zero.value, Rational(0));
    EXPECT_FALSE(zero.any_pair);
    const std::vector<Word> ws{"a", "b", "ab", "aB"};
    auto base = invariant_A(m, ws, el, Rational(1, 10));
    EXPECT_TRUE(base.any_pair);
    for (Rational lambda : {Rational(3), Rational(1, 2), Rational(5, 7)}) {
        CayleyTreeModel ml(2, 4, lambda);
        EXPECT_EQ(invariant_A(ml, ws, el, lambda / 10).value, lambda * base.value);
    }
}

TEST(InvariantA, FiniteModelBruteForce) {
    auto s = circulant(8, {1});
    PermutationModel<Rational> m(s);
    const Rational delta(1, 4);
    std::vector<Perm> gs{rotation(8, 1), rotation(8, 2), Perm{0, 7, 6, 5, 4, 3, 2, 1}};
    // commuting rotations count as elementary, the reflection does not
    std::function<bool(const Perm&, const Perm&)> el = [](const Perm& a, const Perm& b) { return compose(a, b) == compose(b, a); };
    auto r = invariant_A(m, gs, el, delta);
    Rational want(0);
    for (std::size_t i = 0; i < gs.size(); ++i)
        for (std::size_t j = i + 1; j < gs.size(); ++j) {
            if (el(gs[i], gs[j])) continue;
            auto a = neighborhood(s, axis(m, gs[i], delta), 17 * delta);
            auto b = neighborhood(s, axis(m, gs[j], delta), 17 * delta);
            auto d = diameter_of(s, subset_intersection(a, b));
            if (d && *d > want) want = *d;
        }
    EXPECT_EQ(r.value, want);
    EXPECT_EQ(r.pairs, 2u);
}

TEST(Rinj, Examples) {
    CayleyTreeModel m(2, 2);
    EXPECT_EQ(rinj(m, {"a", "b"}).value, Rational(1));
    EXPECT_TRUE(rinj(m, {"aA"}).infinite);
    EXPECT_EQ(rinj(m, {"abab", "ba"}).value, Rational(2));
}

TEST(Characteristic, Examples) {
    auto c8 = circulant(8, {1});
    PermutationModel<Rational> m(c8);
    const Rational delta = hyperbolicity_delta(c8).delta_product;
    EXPECT_EQ(characteristic_set(m, {identity_perm(8)}, delta, delta).set.size(), 8u);
    auto two = unit_graph(2, {{0, 1}});
    PermutationModel<Rational> m2(two);
    EXPECT_EQ(characteristic_set(m2, {Perm{1, 0}}, Rational(1, 10), Rational(0)).set.size(), 2u);
    // Z/4 rotation on C8, checked by brute force
    std::vector<Perm> F{identity_perm(8), rotation(8, 2), rotation(8, 4), rotation(8, 6)};
    const Rational small(1, 5);
    auto r = characteristic_set(m, F, small, Rational(0));
    EXPECT_TRUE(r.empty);
    auto r2 = characteristic_set(m, F, delta, 4 * delta);
    EXPECT_EQ(r2.set.size(), 8u);
    EXPECT_LE(quasi_convexity_constant(c8, r2.set), 8 * delta);
}
