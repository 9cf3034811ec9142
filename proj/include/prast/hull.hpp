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

#include <prast/geometry.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace prast {

using Polygon = std::vector<Vec2>;

// Andrew's monotone chain. Counter-clockwise, collinear points dropped.
// One or two distinct points come back as a degenerate polygon.
inline Polygon convex_hull_2d(std::span<const Vec2> points) {
    Polygon pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() <= 2) return pts;

    Polygon hull(2 * pts.size());
    std::size_t k = 0;
    auto turn = [](const Vec2& o, const Vec2& a, const Vec2& b) { return cross(a - o, b - o); };
    for (const Vec2& p : pts) {
        while (k >= 2 && turn(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        const Vec2& p = pts[i];
        while (k >= lower && turn(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    hull.resize(k - 1);
    return hull;
}

inline Polygon convex_hull_2d(std::initializer_list<Vec2> points) {
    return convex_hull_2d(std::span<const Vec2>(points.begin(), points.size()));
}

inline double signed_area(std::span<const Vec2> poly) {
    double a = 0;
    for (std::size_t i = 0, n = poly.size(); i < n; ++i) a += cross(poly[i], poly[(i + 1) % n]);
    return 0.5 * a;
}

inline double polygon_area(std::span<const Vec2> poly) { return std::abs(signed_area(poly)); }

// Inclusive test against a CCW convex polygon.
inline bool contains(std::span<const Vec2> poly, const Vec2& p, double eps = 0.0) {
    const std::size_t n = poly.size();
    if (n == 0) return false;
    if (n == 1) return length(p - poly[0]) <= eps;
    if (n == 2) {
        const Vec2 e = poly[1] - poly[0];
        const double len = length(e);
        if (len == 0) return length(p - poly[0]) <= eps;
        const double along = dot(p - poly[0], e) / len;
        return std::abs(cross(e, p - poly[0])) / len <= eps && along >= -eps && along <= len + eps;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 e = poly[(i + 1) % n] - poly[i];
        const double len = length(e);
        if (cross(e, p - poly[i]) < -eps * len) return false;
    }
    return true;
}

// Minkowski sum of a convex polygon with the box
// [-half.x, half.x] x [-half.y, half.y]: the hull of the polygon's vertices
// shifted to each box corner.
inline Polygon expand(std::span<const Vec2> poly, const Vec2& half) {
    if (half.x == 0 && half.y == 0) return Polygon(poly.begin(), poly.end());
    std::vector<Vec2> corners;
    corners.reserve(4 * poly.size());
    for (const Vec2& p : poly)
        for (double sx : {-1.0, 1.0})
            for (double sy : {-1.0, 1.0}) corners.push_back({p.x + sx * half.x, p.y + sy * half.y});
    return convex_hull_2d(corners);
}

// Convex polygon clipped to the box |x| <= half.x, |y| <= half.y. Polygons with
// fewer than three vertices are returned unchanged.
inline Polygon clip_to_box(std::span<const Vec2> poly, const Vec2& half) {
    Polygon cur(poly.begin(), poly.end());
    if (cur.size() < 3) return cur;
    const std::array<std::pair<Vec2, double>, 4> planes{{{{1, 0}, half.x}, {{-1, 0}, half.x}, {{0, 1}, half.y}, {{0, -1}, half.y}}};
    for (const auto& [n, off] : planes) {
        Polygon next;
        const std::size_t m = cur.size();
        for (std::size_t i = 0; i < m; ++i) {
            const Vec2 a = cur[i], b = cur[(i + 1) % m];
            const double da = dot(a, n) - off, db = dot(b, n) - off;
            if (da <= 0) next.push_back(a);
            if ((da < 0 && db > 0) || (da > 0 && db < 0)) next.push_back(a + (b - a) * (da / (da - db)));
        }
        cur = std::move(next);
        if (cur.empty()) break;
    }
    return cur;
}

// Closed x-interval of the horizontal line y=const inside a convex polygon.
inline bool row_span(std::span<const Vec2> poly, double y, double& x_lo, double& x_hi) {
    const std::size_t n = poly.size();
    x_lo = INFINITY;
    x_hi = -INFINITY;
    if (n == 0) return false;
    if (n == 1) {
        if (poly[0].y != y) return false;
        x_lo = x_hi = poly[0].x;
        return true;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = poly[i], b = poly[(i + 1) % n];
        if ((a.y - y) * (b.y - y) > 0) continue;
        if (a.y == b.y) {
            x_lo = std::min({x_lo, a.x, b.x});
            x_hi = std::max({x_hi, a.x, b.x});
            continue;
        }
        const double f = (y - a.y) / (b.y - a.y);
        const double x = a.x + f * (b.x - a.x);
        x_lo = std::min(x_lo, x);
        x_hi = std::max(x_hi, x);
    }
    return x_lo <= x_hi;
}

// Convex CCW polygon with at most `max_vertices` vertices that contains `poly`.
// Repeatedly drops the edge whose neighbours, extended to meet, add the least
// area.
inline Polygon limit_vertices(Polygon poly, std::size_t max_vertices) {
    while (poly.size() > std::max<std::size_t>(max_vertices, 4)) {
        const std::size_t n = poly.size();
        std::size_t best = n;
        Vec2 best_apex;
        double best_area = INFINITY;
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2 a = poly[(i + n - 1) % n], b = poly[i], c = poly[(i + 1) % n], d = poly[(i + 2) % n];
            const Vec2 u = b - a, v = d - c;
            const double den = cross(u, v);
            if (!(den > 0)) continue;  // neighbours do not meet beyond the edge
            const Vec2 apex = b + u * (cross(c - b, v) / den);
            const double area = 0.5 * std::abs(cross(c - b, apex - b));
            if (area < best_area) {
                best_area = area;
                best = i;
                best_apex = apex;
            }
        }
        if (best == n) break;
        poly[best] = best_apex;
        poly.erase(poly.begin() + static_cast<std::ptrdiff_t>((best + 1) % n));
    }
    return poly;
}

}  // namespace prast
