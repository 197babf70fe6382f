#include "support.hpp"

#include "hypersc/cone.hpp"
#include "hypersc/hyperbolicity.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace hypersc;
using namespace hypersc::testing;

namespace {

const double kPi = std::numbers::pi;

ConeSpec circle_cone(std::size_t m, double rho) { return ConeSpec(cycle_space(m, 2 * kPi * std::sinh(rho)), rho); }

}  // namespace

TEST(Cone, RadialAndApexDistances) {
    auto spec = circle_cone(12, 2.0);
    EXPECT_DOUBLE_EQ(cone_distance(spec, {3, 0.5}, {3, 1.75}), 1.25);
    EXPECT_DOUBLE_EQ(cone_distance(spec, ConePoint::apex(), {5, 1.5}), 1.5);
    EXPECT_DOUBLE_EQ(cone_distance(spec, {0, 1.0}, {6, 2.0}), 3.0);  // antipodal: through the apex
    EXPECT_THROW(cone_distance(spec, {0, 2.5}, {1, 1.0}), InputError);
    EXPECT_THROW(cone_distance(spec, {40, 1.0}, {1, 1.0}), InputError);
}

TEST(Cone, CircleConeIsAHyperbolicDisk) {
    // cone over a circle of length 2 pi sinh rho: angle = base distance / sinh rho
    for (double rho : {0.5, 2.0, 5.0}) {
        auto spec = circle_cone(24, rho);
        for (std::size_t y = 0; y < 24; y += 5)
            for (double r1 : {0.1, rho / 2, rho})
                for (double r2 : {0.3, rho}) {
                    double ang = spec.base.d(0, y) / std::sinh(rho);
                    double want = hyperbolic_plane_distance(r1, 0.0, r2, ang);
                    EXPECT_NEAR(cone_distance(spec, {0, r1}, {y, r2}), want, 1e-9 * std::max(1.0, want));
                }
    }
}

TEST(Cone, SmallDistancesKeepPrecision) {
    // acosh(1 + u) for tiny u is sqrt(2u) to leading order
    double d = cone_distance_raw(3.0, 1e-12, 3.0, 3.0);
    EXPECT_GT(d, 0.0);
    EXPECT_NEAR(d, 1e-12, 1e-18);
}

TEST(Mu, KnownValuesAndSaturation) {
    for (double rho : {0.5, 2.0, 5.0, 10.0}) {
        const double cap = kPi * std::sinh(rho);
        EXPECT_NEAR(mu(cap, rho), 2 * rho, 1e-9);
        EXPECT_EQ(mu(2 * cap, rho), 2 * rho);
        EXPECT_EQ(mu(0.0, rho), 0.0);
    }
    EXPECT_THROW(mu(-1.0, 1.0), InputError);
    EXPECT_THROW(mu(1.0, 0.0), InputError);
}

TEST(Mu, EqualsBoundaryDistanceInTheCone) {
    for (double rho : {1.0, 3.0}) {
        auto spec = circle_cone(36, rho);
        for (std::size_t y = 0; y < 36; ++y)
            EXPECT_NEAR(mu(spec.base.d(0, y), rho), cone_distance(spec, {0, rho}, {y, rho}), 1e-9);
    }
}

TEST(Mu, BoundsOnDenseGrids) {
    for (double rho : {2.0, 5.0, 10.0}) {
        auto grid = uniform_grid(0.0, 1.5 * kPi * std::sinh(rho), 10000);
        auto r = mu_bounds_check(rho, grid);
        EXPECT_EQ(r.points, 10000u);
        EXPECT_GE(r.lower_slack, -1e-9) << "rho " << rho << " at t=" << r.worst_lower_t;
        EXPECT_GE(r.upper_slack, -1e-9);
        EXPECT_GE(r.sinh_slack, -1e-9 * kPi * std::sinh(rho));
        EXPECT_TRUE(r.monotone);
        EXPECT_TRUE(r.concave);
    }
}

TEST(Mu, CubicCoefficient) {
    const double s = std::sinh(2.0);
    EXPECT_DOUBLE_EQ(mu_cubic_coefficient(2.0), (1 + 1 / (s * s)) / 24);
}

TEST(Cone, SampledSpacesAreMetric) {
    for (double rho : {0.5, 3.0, 8.0})
        for (std::size_t m : {5u, 13u, 40u}) {
            auto spec = circle_cone(m, rho);
            auto X = sample_cone_space(spec, level_radii(rho, 4), false);
            EXPECT_LE(X.size(), 200u);
            EXPECT_FALSE(X.metric_violation().has_value()) << *X.metric_violation();
        }
    Rng rng(3);
    auto base = to_double_space(random_graph(rng, 12, 6));
    auto X = sample_cone_space(ConeSpec(base, 1.5), level_radii(1.5, 5), false);
    EXPECT_FALSE(X.metric_violation().has_value());
}

TEST(Cone, CircleConeDeltaNearPlaneConstant) {
    for (double rho : {2.0, 3.0, 4.0}) {
        auto X = sample_cone_space(circle_cone(24, rho), level_radii(rho, 3));
        EXPECT_LE(hyperbolicity_delta(X).delta_four_point, 2 * BOLD_DELTA + 0.05);
    }
}

TEST(BoldDelta, OracleReproducesFrozenValue) {
    const double est = bold_delta_estimate();
    EXPECT_EQ(est, BOLD_DELTA);
    EXPECT_LE(est, std::log(2.0));
    EXPECT_GT(est, std::log(2.0) - 1e-3);
}

TEST(Rotation, HalfTurnDisplacesByTwiceTheRadius) {
    const double rho = 2.0;
    auto spec = circle_cone(12, rho);
    Perm half(12);
    for (std::size_t i = 0; i < 12; ++i) half[i] = (i + 6) % 12;
    for (double r : {0.25, 1.0, 2.0}) {
        auto rep = rotation_displacement_check(spec, {identity_perm(12), half}, {3, r});
        EXPECT_TRUE(rep.hypothesis);
        EXPECT_TRUE(rep.holds);
        EXPECT_NEAR(rep.displacements[1], 2 * r, 1e-12);
    }
}

TEST(Rotation, SmallRotationFailsHypothesis) {
    auto spec = circle_cone(12, 2.0);
    Perm step(12);
    for (std::size_t i = 0; i < 12; ++i) step[i] = (i + 1) % 12;
    auto rep = rotation_displacement_check(spec, {step}, {0, 1.0});
    EXPECT_FALSE(rep.hypothesis);
    EXPECT_LT(rep.displacements[0], 2.0);
}

TEST(Rotation, RejectsNonIsometries) {
    auto spec = circle_cone(6, 1.0);
    Perm bad{1, 0, 2, 3, 4, 5};
    EXPECT_THROW(rotation_displacement_check(spec, {bad}, {0, 0.5}), InputError);
}

TEST(QuotientCone, MinimumOverOrbit) {
    const double rho = 2.0;
    auto spec = circle_cone(12, rho);
    Perm half(12);
    for (std::size_t i = 0; i < 12; ++i) half[i] = (i + 6) % 12;
    std::vector<Perm> H{identity_perm(12), half};
    for (std::size_t y = 0; y < 12; ++y) {
        ConePoint p{0, 1.5}, q{y, 1.0};
        double qd = quotient_cone_distance(spec, H, p, q);
        EXPECT_LE(qd, cone_distance(spec, p, q));
        EXPECT_NEAR(qd, std::min(cone_distance(spec, p, q), cone_distance(spec, p, {(y + 6) % 12, 1.0})), 1e-12);
        EXPECT_NEAR(qd, quotient_cone_distance(spec, H, q, p), 1e-12);
    }
}
