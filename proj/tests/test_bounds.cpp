// Copyright 2026 The prast Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <prast/bounds.hpp>
#include <prast/oracle.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace prast;

namespace {

// 90 degree square frustum: a point at z = -1 projects to NDC (x, y).
const Camera kCam = Camera::from_fov_y(90, 1, 0.05);

SpaceTimeTriangle make_tri(const Triangle3& start, const Triangle3& end) {
    SpaceTimeTriangle t;
    t.position[0] = start;
    t.position[1] = end;
    for (int s = 0; s < 2; ++s)
        for (int j = 0; j < 3; ++j) t.normal[s][j] = {0, 0, 1};
    return t;
}

SpaceTimeTriangle make_static(const Triangle3& p) { return make_tri(p, p); }

// The context points at `map`, which must outlive it.
BoundContext context(RenderMode mode, int size = 64, std::optional<ScanAxis> scan = ScanAxis{{1, 0}},
                     const FoveationMap* map = nullptr, double guard = 1.0) {
    RenderConfig c;
    c.mode = mode;
    c.width = c.height = size;
    c.guard_px = guard;
    if (c.rolling()) c.scan = scan;
    if (c.foveated()) c.foveation = *map;
    BoundContext ctx = make_bound_context(c, kCam);
    if (c.foveated()) ctx.foveation = map;
    return ctx;
}

SpaceTimeTriangle random_tri(std::mt19937_64& rng, bool moving = true) {
    std::uniform_real_distribution<double> u(-1, 1);
    const Vec3 center{1.5 * u(rng), 1.5 * u(rng), -3.5 + 2.5 * u(rng)};
    const double size = 0.1 + 0.8 * (u(rng) + 1);
    const Vec3 motion = moving ? Vec3{u(rng), u(rng), u(rng)} : Vec3{};
    Triangle3 a, b;
    for (int j = 0; j < 3; ++j) {
        a[j] = center + Vec3{u(rng), u(rng), 0.5 * u(rng)} * size;
        b[j] = a[j] + motion;
    }
    return make_tri(a, b);
}

bool inside_all(const Polygon& outer, std::span<const Vec2> pts, double eps = 1e-9) {
    for (const Vec2& p : pts)
        if (!contains(outer, p, eps)) return false;
    return true;
}

// Projections of a grid of points on the triangle at 65 instants.
std::vector<Vec2> sweep_samples(const SpaceTimeTriangle& tri, const Camera& cam) {
    std::vector<Vec2> out;
    for (int k = 0; k <= 64; ++k) {
        const Triangle3 at = triangle_at(tri, k / 64.0);
        for (int i = 0; i <= 8; ++i)
            for (int j = 0; i + j <= 8; ++j) {
                const Vec3 p = at[0] * ((8.0 - i - j) / 8) + at[1] * (i / 8.0) + at[2] * (j / 8.0);
                if (-p.z >= cam.near) out.push_back(project(p, cam.projection()));
            }
    }
    return out;
}

// Largest distance of any point outside the convex CCW polygon.
double max_outside(const Polygon& poly, std::span<const Vec2> pts) {
    double worst = 0;
    for (const Vec2& p : pts)
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const Vec2 e = poly[(i + 1) % poly.size()] - poly[i];
            worst = std::max(worst, -cross(e, p - poly[i]) / length(e));
        }
    return worst;
}

bool same_polygon(const Polygon& a, const Polygon& b, double eps) {
    return inside_all(a, b, eps) && inside_all(b, a, eps);
}

}  // namespace

TEST(NearPlane, KeptCulledSplit) {
    const Triangle3 front{Vec3{-1, 0, -2}, Vec3{1, 0, -2}, Vec3{0, 1, -3}};
    EXPECT_EQ(near_plane_split(make_static(front), 0.1).kind, NearPlaneResult::Kind::Kept);

    const Triangle3 behind{Vec3{-1, 0, 1}, Vec3{1, 0, 0.5}, Vec3{0, 1, -0.05}};
    EXPECT_EQ(near_plane_split(make_static(behind), 0.1).kind, NearPlaneResult::Kind::Culled);

    const Triangle3 left_of_frustum{Vec3{-10, 0, -2}, Vec3{-9, 0, -2}, Vec3{-9, 1, -2}};
    EXPECT_EQ(near_plane_split(make_static(left_of_frustum), 0.1, &kCam).kind, NearPlaneResult::Kind::Culled);
    EXPECT_EQ(near_plane_split(make_static(left_of_frustum), 0.1).kind, NearPlaneResult::Kind::Kept);

    Triangle3 crossing = front;
    crossing[2] = {0, 1, 1};
    const auto split = near_plane_split(make_tri(front, crossing), 0.1);
    ASSERT_EQ(split.kind, NearPlaneResult::Kind::Split);
    EXPECT_GE(split.points.size(), 5u);
    for (const Vec3& p : split.points) EXPECT_GE(-p.z, 0.1 - 1e-15);
}

TEST(QuadBound, StaticIsBoxPlusGuard) {
    const BoundContext ctx = context(RenderMode::Common);
    const BoundPoly b = bound_quad(make_static({Vec3{-0.5, -0.2, -1}, Vec3{0.3, -0.4, -1}, Vec3{0.1, 0.6, -1}}), ctx);
    const double g = 2.0 / 64;
    EXPECT_TRUE(same_polygon(b.vertices, {{-0.5 - g, -0.4 - g}, {0.3 + g, -0.4 - g}, {0.3 + g, 0.6 + g}, {-0.5 - g, 0.6 + g}},
                             1e-12));
}

TEST(QuadBound, TranslatingCoversBothFootprints) {
    const BoundContext ctx = context(RenderMode::Rolling);
    const Triangle3 a{Vec3{-0.8, -0.2, -1}, Vec3{-0.4, -0.2, -1}, Vec3{-0.6, 0.2, -1}};
    Triangle3 b = a;
    for (Vec3& p : b) p.x += 1.0;
    const BoundPoly q = bound_quad(make_tri(a, b), ctx);
    for (const Triangle3* t : std::array<const Triangle3*, 2>{&a, &b})
        for (const Vec3& p : *t) EXPECT_TRUE(contains(q.vertices, project(p, kCam.projection())));
}

// Quad and hull hold every projection of the moving triangle, whatever the scan.
TEST(RollingBounds, QuadAndHullContainTimeSweep) {
    std::mt19937_64 rng(31);
    const BoundContext ctx = context(RenderMode::Rolling);
    for (int k = 0; k < 300; ++k) {
        const SpaceTimeTriangle tri = random_tri(rng);
        if (near_plane_split(tri, kCam.near).kind != NearPlaneResult::Kind::Kept) continue;
        const auto samples = sweep_samples(tri, kCam);
        const BoundPoly quad = bound_quad(tri, ctx), hull = bound_hull(tri, ctx);
        EXPECT_TRUE(inside_all(quad.vertices, samples)) << "trial " << k;
        EXPECT_TRUE(inside_all(hull.vertices, samples)) << "trial " << k;
        EXPECT_LE(hull.area(), quad.area() + 1e-12);
        EXPECT_LE(bound_adaptive(tri, ctx).area(), hull.area() + 1e-12);
    }
}

TEST(HullBound, ThinSliverBeatsBox) {
    const BoundContext ctx = context(RenderMode::Common, 64, std::nullopt, nullptr, 0);
    const SpaceTimeTriangle sliver = make_static({Vec3{-0.9, -0.9, -1}, Vec3{0.9, 0.88, -1}, Vec3{0.88, 0.9, -1}});
    EXPECT_LT(bound_hull(sliver, ctx).area(), 0.05 * bound_quad(sliver, ctx).area());
}

TEST(HullBound, StaticIsTrianglePlusGuard) {
    const BoundContext ctx = context(RenderMode::Common);
    const Polygon tri{{-0.5, -0.2}, {0.3, -0.4}, {0.1, 0.6}};
    const BoundPoly b = bound_hull(make_static({Vec3{-0.5, -0.2, -1}, Vec3{0.3, -0.4, -1}, Vec3{0.1, 0.6, -1}}), ctx);
    EXPECT_TRUE(same_polygon(b.vertices, expand(tri, ctx.guard_half()), 1e-12));
}

TEST(AdaptiveBound, TimeRangeFromScan) {
    const BoundContext ctx = context(RenderMode::Rolling);
    const SpaceTimeTriangle tri = make_static({Vec3{-0.5, -0.3, -1}, Vec3{0, -0.3, -1}, Vec3{-0.25, 0.4, -1}});
    const BoundPoly b = bound_adaptive(tri, ctx);
    EXPECT_NEAR(b.t_min, 0.25, 1e-12);
    EXPECT_NEAR(b.t_max, 0.5, 1e-12);
    EXPECT_TRUE(same_polygon(b.vertices, bound_hull(tri, ctx).vertices, 1e-12));
}

TEST(ZenonTime, Examples) {
    // Beam from 0 at unit speed meets a stationary point at 0.5.
    EXPECT_NEAR(*zenon_time(0, 1, 0.5, 0, 1, 0), 0.5, 1e-15);
    // Beam starts on the point.
    EXPECT_NEAR(*zenon_time(0.25, 1, 0.5, 0.3, 2, 0.7), 0, 1e-15);
    // Point outruns the beam.
    EXPECT_FALSE(zenon_time(0, 1, 0.5, 2, 1, 0));

    // Perspective motion against a bisection of x_s + t*xdot_s - x(t)/w(t).
    auto g = [](double t) { return 0 + t * 1 - (0.3 + 0.2 * t) / (1 - 0.4 * t); };
    double lo = 0, hi = 1;
    ASSERT_LT(g(lo) * g(hi), 0);
    for (int i = 0; i < 200; ++i) (g(lo) * g(0.5 * (lo + hi)) <= 0 ? hi : lo) = 0.5 * (lo + hi);
    EXPECT_NEAR(*zenon_time(0, 1, 0.3, 0.2, 1, -0.4), 0.5 * (lo + hi), 1e-9);
}

TEST(ZenonBound, StaticEqualsHull) {
    const BoundContext ctx = context(RenderMode::Rolling);
    std::mt19937_64 rng(32);
    for (int k = 0; k < 50; ++k) {
        const SpaceTimeTriangle tri = random_tri(rng, false);
        if (near_plane_split(tri, kCam.near).kind != NearPlaneResult::Kind::Kept) continue;
        const BoundPoly z = bound_zenon(tri, ctx);
        EXPECT_FALSE(z.fell_back);
        EXPECT_TRUE(same_polygon(z.vertices, bound_hull(tri, ctx).vertices, 1e-9)) << "trial " << k;
    }
}

TEST(ZenonBound, TranslatingTriangleInsideAdaptive) {
    const BoundContext ctx = context(RenderMode::Rolling);
    const Triangle3 a{Vec3{-0.6, -0.2, -1}, Vec3{-0.3, -0.2, -1}, Vec3{-0.45, 0.2, -1}};
    Triangle3 b = a;
    for (Vec3& p : b) p.x += 0.8;
    const SpaceTimeTriangle tri = make_tri(a, b);
    const BoundPoly z = bound_zenon(tri, ctx), ad = bound_adaptive(tri, ctx);
    ASSERT_FALSE(z.fell_back);
    EXPECT_TRUE(inside_all(ad.vertices, z.vertices));
    EXPECT_LT(z.area(), 0.6 * ad.area());
}

// Every pixel the ray-traced oracle finds lies inside each rolling bound.
TEST(RollingBounds, SoundAgainstOracle) {
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> angle(0, std::numbers::pi / 2);
    RenderConfig c;
    c.mode = RenderMode::Rolling;
    c.width = c.height = 32;
    int hits = 0;
    for (int k = 0; k < 150; ++k) {
        const double a = angle(rng);
        Vec2 d{std::cos(a), std::sin(a)};
        c.scan = ScanAxis{d * (1 / (d.x + d.y))};
        const BoundContext ctx = make_bound_context(c, kCam);
        const SpaceTimeTriangle tri = random_tri(rng);
        const auto cov = coverage_set(tri, kCam, c);
        hits += static_cast<int>(cov.size());
        for (BoundMethod m : {BoundMethod::Quad, BoundMethod::Hull, BoundMethod::Adaptive, BoundMethod::Zenon}) {
            const BoundPoly b = compute_bound(tri, RenderMode::Rolling, m, ctx, &kCam);
            EXPECT_LE(b.vertices.size(), kMaxBoundVertices);
            for (auto [x, y] : cov)
                EXPECT_TRUE(bound_covers_pixel(b.vertices, ctx.viewport, x, y)) << to_string(m) << " trial " << k;
        }
    }
    EXPECT_GT(hits, 1000);
}

TEST(BoundCurve, IdentityAndRadialHaveNoBulge) {
    const Viewport vp{256, 256};
    const FoveationMap id = FoveationMap::identity();
    const EdgeBound e = bound_foveated_simple({-0.5, 0.3}, {0.5, 0.3}, {0, 0}, id, vp);
    EXPECT_NEAR(e.delta_max_px, 0, 1e-9);
    EXPECT_NEAR(e.v_hi, 0, 1e-12);

    const FoveationMap sq = FoveationMap::power({0, 0}, 2);
    const EdgeBound r = bound_foveated_simple({-0.5, -0.5}, {0.4, 0.4}, {0.5, -0.5}, sq, vp);
    EXPECT_NEAR(r.delta_max_px, 0, 1e-6);
}

TEST(BoundCurve, TernaryMatchesDenseSampling) {
    const Viewport vp{256, 256};
    const double px = 2.0 / vp.width;
    std::mt19937_64 rng(34);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    for (int k = 0; k < 100; ++k) {
        const FoveationMap map = FoveationMap::power({0.3 * u(rng), 0.3 * u(rng)}, 2);
        const Vec2 a{u(rng), u(rng)}, b{u(rng), u(rng)}, inside{u(rng), u(rng)};
        if (std::abs(cross(b - a, inside - a)) < 1e-3) continue;
        for (bool recursive : {false, true}) {
            const EdgeBound e = recursive ? bound_foveated_recursive(a, b, inside, map, vp)
                                          : bound_foveated_simple(a, b, inside, map, vp);
            double v_max = -INFINITY;
            for (int s = 0; s <= 4096; ++s) {
                const Vec2 p = map.display_to_buffer(lerp(a, b, s / 4096.0));
                const double v = dot(p - e.chord_a, e.normal), w = dot(p - e.chord_a, e.tangent);
                v_max = std::max(v_max, v);
                EXPECT_LE(v, e.v_hi + 0.5 * px);
                EXPECT_GE(v, e.v_lo - 0.5 * px);
                EXPECT_LE(w, e.u_hi + 0.5 * px);
                EXPECT_GE(w, e.u_lo - 0.5 * px);
            }
            EXPECT_NEAR(e.v_hi, std::max(0.0, v_max), 0.5 * px) << "trial " << k;
        }
    }
}

TEST(FoveatedBound, IdentityReducesToTriangle) {
    const FoveationMap id = FoveationMap::identity();
    const BoundContext ctx = context(RenderMode::Foveated, 64, std::nullopt, &id);
    const SpaceTimeTriangle tri = make_static({Vec3{-0.5, -0.2, -1}, Vec3{0.3, -0.4, -1}, Vec3{0.1, 0.6, -1}});
    for (bool recursive : {false, true})
        EXPECT_TRUE(same_polygon(bound_foveated_triangle(tri, ctx, recursive).vertices,
                                 bound_hull(tri, ctx).vertices, 1e-9));
}

// Dense display samples of the triangle, mapped to the buffer, stay within half a
// pixel of both unguarded bounds; the recursive bound is no larger than the simple one.
TEST(FoveatedBound, ContainsMappedTriangle) {
    std::mt19937_64 rng(35);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    for (int k = 0; k < 60; ++k) {
        const FoveationMap map = FoveationMap::power(k % 2 ? Vec2{0, 0} : Vec2{0.3 * u(rng), 0.3 * u(rng)}, 2 + k % 3);
        const BoundContext ctx = context(RenderMode::Foveated, 128, std::nullopt, &map, 0);
        const Triangle3 t{Vec3{u(rng), u(rng), -1}, Vec3{u(rng), u(rng), -1}, Vec3{u(rng), u(rng), -1}};
        const BoundPoly simple = bound_foveated_triangle(make_static(t), ctx, false);
        const BoundPoly rec = bound_foveated_triangle(make_static(t), ctx, true);
        std::vector<Vec2> pts;
        for (int i = 0; i <= 32; ++i)
            for (int j = 0; i + j <= 32; ++j) {
                const Vec3 p = t[0] * ((32.0 - i - j) / 32) + t[1] * (i / 32.0) + t[2] * (j / 32.0);
                pts.push_back(map.display_to_buffer({p.x, p.y}));
            }
        const double px = 2.0 / 128;
        EXPECT_LT(max_outside(simple.vertices, pts), 0.5 * px) << "trial " << k;
        EXPECT_LT(max_outside(rec.vertices, pts), 0.5 * px) << "trial " << k;
        EXPECT_LE(rec.area(), simple.area() * (1 + 1e-9)) << "trial " << k;
    }
}

TEST(FoveatedBound, SoundAgainstOracleAtFovea) {
    RenderConfig c;
    c.mode = RenderMode::Foveated;
    c.width = c.height = 64;
    c.foveation = FoveationMap::power({0, 0}, 2);
    const BoundContext ctx = make_bound_context(c, kCam);
    const SpaceTimeTriangle tri = make_static({Vec3{-0.3, -0.25, -1}, Vec3{0.35, -0.2, -1}, Vec3{0.05, 0.4, -1}});
    const auto cov = coverage_set(tri, kCam, c);
    ASSERT_GT(cov.size(), 100u);
    for (BoundMethod m : {BoundMethod::FovSimple, BoundMethod::FovRecursive, BoundMethod::Quad}) {
        const BoundPoly b = compute_bound(tri, RenderMode::Foveated, m, ctx, &kCam);
        for (auto [x, y] : cov) EXPECT_TRUE(bound_covers_pixel(b.vertices, ctx.viewport, x, y)) << to_string(m);
    }
}

TEST(JointBound, Reductions) {
    const Triangle3 a{Vec3{-0.6, -0.2, -1}, Vec3{-0.3, -0.2, -1}, Vec3{-0.45, 0.2, -1}};
    Triangle3 b = a;
    for (Vec3& p : b) p.x += 0.8;

    // Identity foveation: joint is the Zenon bound.
    const FoveationMap identity = FoveationMap::identity(), squared = FoveationMap::power({0.1, 0}, 2);
    const BoundContext id = context(RenderMode::Joint, 64, ScanAxis{{1, 0}}, &identity);
    const BoundContext roll = context(RenderMode::Rolling);
    const SpaceTimeTriangle moving = make_tri(a, b);
    EXPECT_TRUE(same_polygon(bound_joint(moving, id).vertices, bound_zenon(moving, roll).vertices, 1e-9));

    // No motion: joint is the recursive foveated bound.
    const BoundContext fov = context(RenderMode::Joint, 64, ScanAxis{{1, 0}}, &squared);
    const SpaceTimeTriangle still = make_static(a);
    EXPECT_TRUE(same_polygon(bound_joint(still, fov).vertices, bound_foveated_triangle(still, fov, true).vertices, 1e-12));
}

TEST(JointBound, SoundAgainstOracle) {
    std::mt19937_64 rng(36);
    RenderConfig c;
    c.mode = RenderMode::Joint;
    c.width = c.height = 32;
    c.scan = ScanAxis{{0.6, 0.4}};
    c.foveation = FoveationMap::power({0.2, -0.1}, 2);
    const BoundContext ctx = make_bound_context(c, kCam);
    const PixelSampler sampler(c, kCam);
    for (int k = 0; k < 100; ++k) {
        const SpaceTimeTriangle tri = random_tri(rng);
        const auto cov = coverage_set(tri, kCam, sampler);
        for (BoundMethod m : {BoundMethod::Joint, BoundMethod::Quad}) {
            const BoundPoly bound = compute_bound(tri, RenderMode::Joint, m, ctx, &kCam);
            EXPECT_LE(bound.vertices.size(), kMaxBoundVertices);
            for (auto [x, y] : cov)
                EXPECT_TRUE(bound_covers_pixel(bound.vertices, ctx.viewport, x, y)) << to_string(m) << " trial " << k;
        }
    }
}

TEST(ComputeBound, RejectsForeignMethodAndCulls) {
    const BoundContext ctx = context(RenderMode::Common);
    const SpaceTimeTriangle tri = make_static({Vec3{-0.5, -0.2, -1}, Vec3{0.3, -0.4, -1}, Vec3{0.1, 0.6, -1}});
    EXPECT_THROW(compute_bound(tri, RenderMode::Common, BoundMethod::FovSimple, ctx), ConfigMismatch);
    EXPECT_THROW(compute_bound(tri, RenderMode::Foveated, BoundMethod::Zenon, ctx), ConfigMismatch);
    const SpaceTimeTriangle behind = make_static({Vec3{-0.5, -0.2, 1}, Vec3{0.3, -0.4, 1}, Vec3{0.1, 0.6, 1}});
    EXPECT_TRUE(compute_bound(behind, RenderMode::Common, BoundMethod::Hull, ctx).empty());
    EXPECT_NEAR(compute_bound(tri, RenderMode::Common, BoundMethod::Trivial, ctx).area(), std::pow(2 + 4.0 / 64, 2), 1e-12);
}
