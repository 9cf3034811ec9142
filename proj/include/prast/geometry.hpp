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

#pragma once

#include <prast/errors.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>

namespace prast {

struct Vec2 {
    double x = 0, y = 0;

    constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr bool operator==(const Vec2&) const = default;
};

inline constexpr Vec2 operator*(double s, const Vec2& v) { return v * s; }
inline constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double length(const Vec2& v) { return std::hypot(v.x, v.y); }

struct Vec3 {
    double x = 0, y = 0, z = 0;

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    constexpr bool operator==(const Vec3&) const = default;
};

inline constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
inline constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double length(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline Vec3 normalize(const Vec3& v) {
    const double len = length(v);
    return len > 0 ? v * (1.0 / len) : v;
}
inline Vec3 hadamard(const Vec3& a, const Vec3& b) { return {a.x * b.x, a.y * b.y, a.z * b.z}; }

struct Vec4 {
    double x = 0, y = 0, z = 0, w = 1;

    constexpr Vec3 xyz() const { return {x, y, z}; }
    constexpr bool operator==(const Vec4&) const = default;
};

// Endpoint-exact blend; lerp(a, a, t) == a for every t.
inline double lerp(double a, double b, double t) { return std::lerp(a, b, t); }
inline Vec2 lerp(const Vec2& a, const Vec2& b, double t) { return {lerp(a.x, b.x, t), lerp(a.y, b.y, t)}; }
inline Vec3 lerp(const Vec3& a, const Vec3& b, double t) {
    return {lerp(a.x, b.x, t), lerp(a.y, b.y, t), lerp(a.z, b.z, t)};
}
inline Vec4 lerp(const Vec4& a, const Vec4& b, double t) {
    return {lerp(a.x, b.x, t), lerp(a.y, b.y, t), lerp(a.z, b.z, t), lerp(a.w, b.w, t)};
}

// Row-major 4x4 matrix acting on column vectors.
struct Mat4 {
    std::array<double, 16> m{};

    static constexpr Mat4 identity() {
        Mat4 r;
        r.m = {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};
        return r;
    }

    constexpr double& operator()(int row, int col) { return m[row * 4 + col]; }
    constexpr double operator()(int row, int col) const { return m[row * 4 + col]; }

    constexpr Vec4 operator*(const Vec4& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z + m[3] * v.w,
                m[4] * v.x + m[5] * v.y + m[6] * v.z + m[7] * v.w,
                m[8] * v.x + m[9] * v.y + m[10] * v.z + m[11] * v.w,
                m[12] * v.x + m[13] * v.y + m[14] * v.z + m[15] * v.w};
    }

    constexpr Mat4 operator*(const Mat4& o) const {
        Mat4 r;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double s = 0;
                for (int k = 0; k < 4; ++k) s += (*this)(i, k) * o(k, j);
                r(i, j) = s;
            }
        return r;
    }

    constexpr bool operator==(const Mat4&) const = default;

    Vec3 transform_point(const Vec3& p) const { return ((*this) * Vec4{p.x, p.y, p.z, 1}).xyz(); }
    Vec3 transform_vector(const Vec3& v) const { return ((*this) * Vec4{v.x, v.y, v.z, 0}).xyz(); }

    static Mat4 translation(const Vec3& t) {
        Mat4 r = identity();
        r(0, 3) = t.x;
        r(1, 3) = t.y;
        r(2, 3) = t.z;
        return r;
    }

    static Mat4 scale(const Vec3& s) {
        Mat4 r = identity();
        r(0, 0) = s.x;
        r(1, 1) = s.y;
        r(2, 2) = s.z;
        return r;
    }

    // Unit quaternion (w, x, y, z); normalized here.
    static Mat4 rotation(double qw, double qx, double qy, double qz) {
        const double n = std::sqrt(qw * qw + qx * qx + qy * qy + qz * qz);
        qw /= n, qx /= n, qy /= n, qz /= n;
        Mat4 r = identity();
        r(0, 0) = 1 - 2 * (qy * qy + qz * qz);
        r(0, 1) = 2 * (qx * qy - qz * qw);
        r(0, 2) = 2 * (qx * qz + qy * qw);
        r(1, 0) = 2 * (qx * qy + qz * qw);
        r(1, 1) = 1 - 2 * (qx * qx + qz * qz);
        r(1, 2) = 2 * (qy * qz - qx * qw);
        r(2, 0) = 2 * (qx * qz - qy * qw);
        r(2, 1) = 2 * (qy * qz + qx * qw);
        r(2, 2) = 1 - 2 * (qx * qx + qy * qy);
        return r;
    }

    static Mat4 rotation_y(double radians) {
        return rotation(std::cos(radians / 2), 0, std::sin(radians / 2), 0);
    }
};

// General inverse by cofactor expansion. Returns nullopt when singular.
inline std::optional<Mat4> inverse(const Mat4& a) {
    const auto& m = a.m;
    Mat4 r;
    auto& inv = r.m;
    inv[0] = m[5] * m[10] * m[15] - m[5] * m[11] * m[14] - m[9] * m[6] * m[15] + m[9] * m[7] * m[14] +
             m[13] * m[6] * m[11] - m[13] * m[7] * m[10];
    inv[4] = -m[4] * m[10] * m[15] + m[4] * m[11] * m[14] + m[8] * m[6] * m[15] - m[8] * m[7] * m[14] -
             m[12] * m[6] * m[11] + m[12] * m[7] * m[10];
    inv[8] = m[4] * m[9] * m[15] - m[4] * m[11] * m[13] - m[8] * m[5] * m[15] + m[8] * m[7] * m[13] +
             m[12] * m[5] * m[11] - m[12] * m[7] * m[9];
    inv[12] = -m[4] * m[9] * m[14] + m[4] * m[10] * m[13] + m[8] * m[5] * m[14] - m[8] * m[6] * m[13] -
              m[12] * m[5] * m[10] + m[12] * m[6] * m[9];
    inv[1] = -m[1] * m[10] * m[15] + m[1] * m[11] * m[14] + m[9] * m[2] * m[15] - m[9] * m[3] * m[14] -
             m[13] * m[2] * m[11] + m[13] * m[3] * m[10];
    inv[5] = m[0] * m[10] * m[15] - m[0] * m[11] * m[14] - m[8] * m[2] * m[15] + m[8] * m[3] * m[14] +
             m[12] * m[2] * m[11] - m[12] * m[3] * m[10];
    inv[9] = -m[0] * m[9] * m[15] + m[0] * m[11] * m[13] + m[8] * m[1] * m[15] - m[8] * m[3] * m[13] -
             m[12] * m[1] * m[11] + m[12] * m[3] * m[9];
    inv[13] = m[0] * m[9] * m[14] - m[0] * m[10] * m[13] - m[8] * m[1] * m[14] + m[8] * m[2] * m[13] +
              m[12] * m[1] * m[10] - m[12] * m[2] * m[9];
    inv[2] = m[1] * m[6] * m[15] - m[1] * m[7] * m[14] - m[5] * m[2] * m[15] + m[5] * m[3] * m[14] +
             m[13] * m[2] * m[7] - m[13] * m[3] * m[6];
    inv[6] = -m[0] * m[6] * m[15] + m[0] * m[7] * m[14] + m[4] * m[2] * m[15] - m[4] * m[3] * m[14] -
             m[12] * m[2] * m[7] + m[12] * m[3] * m[6];
    inv[10] = m[0] * m[5] * m[15] - m[0] * m[7] * m[13] - m[4] * m[1] * m[15] + m[4] * m[3] * m[13] +
              m[12] * m[1] * m[7] - m[12] * m[3] * m[5];
    inv[14] = -m[0] * m[5] * m[14] + m[0] * m[6] * m[13] + m[4] * m[1] * m[14] - m[4] * m[2] * m[13] -
              m[12] * m[1] * m[6] + m[12] * m[2] * m[5];
    inv[3] = -m[1] * m[6] * m[11] + m[1] * m[7] * m[10] + m[5] * m[2] * m[11] - m[5] * m[3] * m[10] -
             m[9] * m[2] * m[7] + m[9] * m[3] * m[6];
    inv[7] = m[0] * m[6] * m[11] - m[0] * m[7] * m[10] - m[4] * m[2] * m[11] + m[4] * m[3] * m[10] +
             m[8] * m[2] * m[7] - m[8] * m[3] * m[6];
    inv[11] = -m[0] * m[5] * m[11] + m[0] * m[7] * m[9] + m[4] * m[1] * m[11] - m[4] * m[3] * m[9] -
              m[8] * m[1] * m[7] + m[8] * m[3] * m[5];
    inv[15] = m[0] * m[5] * m[10] - m[0] * m[6] * m[9] - m[4] * m[1] * m[10] + m[4] * m[2] * m[9] +
              m[8] * m[1] * m[6] - m[8] * m[2] * m[5];
    const double det = m[0] * inv[0] + m[1] * inv[4] + m[2] * inv[8] + m[3] * inv[12];
    if (det == 0 || !std::isfinite(det)) return std::nullopt;
    for (double& v : inv) v /= det;
    return r;
}

// A transform at frame start and frame end, blended entry-wise in between.
struct TimeVaryingTransform {
    Mat4 start = Mat4::identity();
    Mat4 end = Mat4::identity();

    static TimeVaryingTransform constant(const Mat4& m) { return {m, m}; }
};

inline Mat4 interpolate_transform(const TimeVaryingTransform& x, double t) {
    Mat4 r;
    for (std::size_t i = 0; i < 16; ++i) r.m[i] = lerp(x.start.m[i], x.end.m[i], t);
    return r;
}

// Pinhole intrinsics of the canonical camera. The camera looks down -z,
// NDC spans (-1,1)^2 and w = -z.
struct Camera {
    double tan_half_x = 1.0;
    double tan_half_y = 1.0;
    double near = 0.05;

    static Camera from_fov_y(double fov_y_deg, double aspect, double near_plane) {
        const double ty = std::tan(fov_y_deg * 0.5 * 3.14159265358979323846 / 180.0);
        return {ty * aspect, ty, near_plane};
    }

    // Infinite-far perspective matrix; only x, y and w are used downstream.
    Mat4 projection() const {
        Mat4 p;
        p(0, 0) = 1.0 / tan_half_x;
        p(1, 1) = 1.0 / tan_half_y;
        p(2, 2) = -1.0;
        p(2, 3) = -2.0 * near;
        p(3, 2) = -1.0;
        return p;
    }
};

// Three moving vertices: position[0] at frame start, position[1] at frame end.
struct SpaceTimeTriangle {
    std::array<std::array<Vec3, 3>, 2> position{};
    std::array<std::array<Vec3, 3>, 2> normal{};
    std::int32_t material = 0;
    std::int32_t id = 0;

    bool is_static() const { return position[0] == position[1]; }

    // Copy frozen at frame start.
    SpaceTimeTriangle frozen() const {
        SpaceTimeTriangle r = *this;
        r.position[1] = r.position[0];
        r.normal[1] = r.normal[0];
        return r;
    }
};

using Triangle3 = std::array<Vec3, 3>;

inline Triangle3 triangle_at(const SpaceTimeTriangle& tri, double t) {
    return {lerp(tri.position[0][0], tri.position[1][0], t), lerp(tri.position[0][1], tri.position[1][1], t),
            lerp(tri.position[0][2], tri.position[1][2], t)};
}

inline Vec2 project(const Vec4& point, const Mat4& transform) {
    const Vec4 c = transform * point;
    if (!(c.w > 0)) throw NonPositiveW(c.w);
    return {c.x / c.w, c.y / c.w};
}

inline Vec2 project(const Vec3& point, const Mat4& transform) { return project(Vec4{point.x, point.y, point.z, 1}, transform); }

struct Ray {
    Vec3 origin;
    Vec3 direction;  // unit length
    double time = 0;

    Vec3 at(double s) const { return origin + direction * s; }
};

inline Ray pixel_ray(const Vec2& ndc, const Camera& camera, double time = 0) {
    const Vec3 d{ndc.x * camera.tan_half_x, ndc.y * camera.tan_half_y, -1.0};
    return {{0, 0, 0}, normalize(d), time};
}

struct Hit {
    double depth = 0;  // camera-space distance along -z
    std::array<double, 3> barycentrics{};
    std::int32_t primitive = -1;
};

// Moller-Trumbore with inclusive edges. Hits closer than min_depth (camera-space
// -z) are rejected. Zero-area triangles and rays parallel to the plane miss.
inline std::optional<Hit> intersect(const Ray& ray, const Triangle3& tri, double min_depth = 0.0) {
    const Vec3 e1 = tri[1] - tri[0];
    const Vec3 e2 = tri[2] - tri[0];
    const Vec3 p = cross(ray.direction, e2);
    const double det = dot(e1, p);
    const double scale2 = dot(e1, e1) * dot(e2, e2);
    if (!(det * det > 1e-28 * scale2) || scale2 == 0) return std::nullopt;
    const double inv = 1.0 / det;
    const Vec3 s = ray.origin - tri[0];
    const double u = dot(s, p) * inv;
    if (u < 0.0 || u > 1.0) return std::nullopt;
    const Vec3 q = cross(s, e1);
    const double v = dot(ray.direction, q) * inv;
    if (v < 0.0 || u + v > 1.0) return std::nullopt;
    const double dist = dot(e2, q) * inv;
    if (!(dist > 0)) return std::nullopt;
    const double depth = -(ray.origin.z + dist * ray.direction.z);
    if (!(depth >= min_depth) || depth <= 0) return std::nullopt;
    Hit h;
    h.depth = depth;
    h.barycentrics = {1.0 - u - v, u, v};
    return h;
}

}  // namespace prast
