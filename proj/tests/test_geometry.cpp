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

#include <prast/geometry.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace prast;

namespace {

Mat4 random_affine(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1, 1);
    const Mat4 r = Mat4::rotation(2 + u(rng), u(rng), u(rng), u(rng));
    return Mat4::translation({u(rng), u(rng), u(rng)}) * r * Mat4::scale({1 + 0.5 * u(rng), 1, 1 + 0.5 * u(rng)});
}

void expect_mat_near(const Mat4& a, const Mat4& b, double tol) {
    for (std::size_t i = 0; i < 16; ++i) EXPECT_NEAR(a.m[i], b.m[i], tol) << "entry " << i;
}

}  // namespace

TEST(Transform, InterpolationHitsEndpoints) {
    std::mt19937_64 rng(1);
    const TimeVaryingTransform x{random_affine(rng), random_affine(rng)};
    EXPECT_EQ(interpolate_transform(x, 0), x.start);
    EXPECT_EQ(interpolate_transform(x, 1), x.end);
    const Mat4 m = random_affine(rng);
    EXPECT_EQ(interpolate_transform(TimeVaryingTransform::constant(m), 0.37), m);
}

TEST(Transform, InverseOfRandomAffine) {
    std::mt19937_64 rng(2);
    for (int k = 0; k < 100; ++k) {
        const Mat4 m = random_affine(rng);
        const auto inv = inverse(m);
        ASSERT_TRUE(inv);
        expect_mat_near(m * *inv, Mat4::identity(), 1e-10);
    }
    Mat4 singular;
    EXPECT_FALSE(inverse(singular));
}

TEST(SpaceTimeTriangle, Interpolation) {
    SpaceTimeTriangle tri;
    tri.position[0] = {Vec3{0, 0, 1}, Vec3{1, 0, 0}, Vec3{0, 1, 0}};
    tri.position[1] = tri.position[0];
    EXPECT_TRUE(tri.is_static());
    EXPECT_EQ(triangle_at(tri, 0.73), tri.position[0]);

    tri.position[1][0] = {1, 0, 1};
    EXPECT_FALSE(tri.is_static());
    EXPECT_EQ(triangle_at(tri, 0), tri.position[0]);
    const Vec3 mid = triangle_at(tri, 0.5)[0];
    EXPECT_DOUBLE_EQ(mid.x, 0.5);
    EXPECT_DOUBLE_EQ(mid.y, 0);
    EXPECT_DOUBLE_EQ(mid.z, 1);
    EXPECT_TRUE(tri.frozen().is_static());
}

TEST(Projection, AxisAndFrustumCorners) {
    const Camera cam = Camera::from_fov_y(60, 1.5, 0.1);
    const Mat4 p = cam.projection();
    const Vec2 c = project(Vec4{0, 0, -1, 1}, p);
    EXPECT_DOUBLE_EQ(c.x, 0);
    EXPECT_DOUBLE_EQ(c.y, 0);
    for (double sx : {-1.0, 1.0})
        for (double sy : {-1.0, 1.0}) {
            const double z = -3.5;
            const Vec2 q = project(Vec3{sx * cam.tan_half_x * -z, sy * cam.tan_half_y * -z, z}, p);
            EXPECT_NEAR(q.x, sx, 1e-12);
            EXPECT_NEAR(q.y, sy, 1e-12);
        }
    EXPECT_THROW(project(Vec3{0, 0, 1}, p), NonPositiveW);
}

TEST(Projection, MatchesDirectMultiply) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2, 2);
    const Mat4 p = Camera::from_fov_y(70, 1, 0.05).projection() * random_affine(rng);
    for (int k = 0; k < 1000; ++k) {
        const double v[4] = {u(rng), u(rng), u(rng), 1};
        double out[4] = {0, 0, 0, 0};
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) out[r] += p.m[r * 4 + c] * v[c];
        if (out[3] <= 1e-3) continue;
        const Vec2 q = project(Vec3{v[0], v[1], v[2]}, p);
        EXPECT_NEAR(q.x, out[0] / out[3], 1e-9);
        EXPECT_NEAR(q.y, out[1] / out[3], 1e-9);
    }
}

TEST(PixelRay, DirectionAndRoundTrip) {
    const Camera cam = Camera::from_fov_y(90, 1, 0.05);
    const Ray axis = pixel_ray({0, 0}, cam);
    EXPECT_NEAR(axis.direction.x, 0, 1e-15);
    EXPECT_NEAR(axis.direction.z, -1, 1e-15);
    const Ray edge = pixel_ray({1, 0}, cam);
    EXPECT_NEAR(edge.direction.x, -edge.direction.z, 1e-12);
    EXPECT_NEAR(edge.direction.y, 0, 1e-15);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1, 1), s(0.1, 50);
    const Camera wide = Camera::from_fov_y(50, 1.7, 0.05);
    for (int k = 0; k < 1000; ++k) {
        const Vec2 ndc{u(rng), u(rng)};
        const Ray r = pixel_ray(ndc, wide);
        EXPECT_NEAR(length(r.direction), 1.0, 1e-6);
        const Vec2 back = project(r.at(s(rng)), wide.projection());
        EXPECT_NEAR(back.x, ndc.x, 1e-12);
        EXPECT_NEAR(back.y, ndc.y, 1e-12);
    }
}

TEST(Intersect, AxisAlignedAndParallel) {
    const Ray r{{0, 0, 0}, {0, 0, -1}};
    const Triangle3 tri{Vec3{-1, -1, -2}, Vec3{1, -1, -2}, Vec3{0, 1, -2}};
    const auto h = intersect(r, tri);
    ASSERT_TRUE(h);
    EXPECT_DOUBLE_EQ(h->depth, 2);
    EXPECT_NEAR(h->barycentrics[0] + h->barycentrics[1] + h->barycentrics[2], 1, 1e-15);

    const Triangle3 edge_on{Vec3{-1, 0, -1}, Vec3{1, 0, -1}, Vec3{0, 0, -3}};
    EXPECT_FALSE(intersect(r, edge_on));
    EXPECT_FALSE(intersect(r, tri, 2.5));  // in front of the near plane
}

TEST(Intersect, InclusiveEdges) {
    const Ray r{{0, 0, 0}, {0, 0, -1}};
    // The ray passes exactly through a shared edge: both triangles report a hit.
    const Triangle3 left{Vec3{0, -1, -2}, Vec3{0, 1, -2}, Vec3{-1, 0, -2}};
    const Triangle3 right{Vec3{0, -1, -2}, Vec3{1, 0, -2}, Vec3{0, 1, -2}};
    EXPECT_TRUE(intersect(r, left));
    EXPECT_TRUE(intersect(r, right));
}

// Plane intersection followed by barycentric sign tests, independent of
// Moller-Trumbore.
TEST(Intersect, AgreesWithPlaneOracle) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1, 1);
    int hits = 0, compared = 0;
    for (int k = 0; k < 10000; ++k) {
        const Triangle3 tri{Vec3{u(rng), u(rng), -2 + u(rng)}, Vec3{u(rng), u(rng), -2 + u(rng)},
                            Vec3{u(rng), u(rng), -2 + u(rng)}};
        const Ray ray = pixel_ray({u(rng), u(rng)}, Camera::from_fov_y(60, 1, 0.05));
        const Vec3 n = cross(tri[1] - tri[0], tri[2] - tri[0]);
        const double denom = dot(n, ray.direction);
        if (std::abs(denom) < 1e-6 * length(n)) continue;
        const double s = dot(n, tri[0] - ray.origin) / denom;
        const Vec3 p = ray.at(s);
        double b[3];
        for (int i = 0; i < 3; ++i) b[i] = dot(cross(tri[(i + 2) % 3] - tri[(i + 1) % 3], p - tri[(i + 1) % 3]), n);
        const double total = b[0] + b[1] + b[2];
        const double margin = std::min({std::abs(b[0]), std::abs(b[1]), std::abs(b[2])}) / std::abs(total);
        if (margin < 1e-9) continue;  // too close to an edge to call
        const bool inside = s > 0 && (b[0] > 0) == (total > 0) && (b[1] > 0) == (total > 0) && (b[2] > 0) == (total > 0);
        const auto h = intersect(ray, tri);
        ++compared;
        ASSERT_EQ(inside, h.has_value()) << "trial " << k;
        if (h) {
            ++hits;
            EXPECT_NEAR(h->depth, -p.z, 1e-9);
            for (int i = 0; i < 3; ++i) {
                EXPECT_NEAR(h->barycentrics[i], b[i] / total, 1e-9);
                EXPECT_GE(h->barycentrics[i], -1e-5);
                EXPECT_LE(h->barycentrics[i], 1 + 1e-5);
            }
        }
    }
    EXPECT_GT(compared, 9000);
    EXPECT_GT(hits, 500);
}
