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
#include <prast/foveation.hpp>
#include <prast/geometry.hpp>
#include <prast/hull.hpp>
#include <prast/viewport.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace prast {

enum class RenderMode { Common, Foveated, Rolling, Joint };

enum class BoundMethod { Trivial, Quad, Hull, Adaptive, Zenon, FovSimple, FovRecursive, Joint };

inline std::string_view to_string(RenderMode m) {
    switch (m) {
        case RenderMode::Common: return "common";
        case RenderMode::Foveated: return "foveated";
        case RenderMode::Rolling: return "rolling";
        case RenderMode::Joint: return "joint";
    }
    return "?";
}

inline std::string_view to_string(BoundMethod b) {
    switch (b) {
        case BoundMethod::Trivial: return "trivial";
        case BoundMethod::Quad: return "quad";
        case BoundMethod::Hull: return "hull";
        case BoundMethod::Adaptive: return "adaptive";
        case BoundMethod::Zenon: return "zenon";
        case BoundMethod::FovSimple: return "fov-simple";
        case BoundMethod::FovRecursive: return "fov-recursive";
        case BoundMethod::Joint: return "joint";
    }
    return "?";
}

inline RenderMode parse_mode(std::string_view s) {
    for (RenderMode m : {RenderMode::Common, RenderMode::Foveated, RenderMode::Rolling, RenderMode::Joint})
        if (to_string(m) == s) return m;
    throw ConfigError("unknown mode '" + std::string(s) + "'");
}

inline BoundMethod parse_bound(std::string_view s) {
    for (BoundMethod b : {BoundMethod::Trivial, BoundMethod::Quad, BoundMethod::Hull, BoundMethod::Adaptive,
                          BoundMethod::Zenon, BoundMethod::FovSimple, BoundMethod::FovRecursive, BoundMethod::Joint})
        if (to_string(b) == s) return b;
    throw ConfigError("unknown bound method '" + std::string(s) + "'");
}

inline BoundMethod default_bound(RenderMode m) {
    switch (m) {
        case RenderMode::Common: return BoundMethod::Hull;
        case RenderMode::Foveated: return BoundMethod::FovRecursive;
        case RenderMode::Rolling: return BoundMethod::Zenon;
        case RenderMode::Joint: return BoundMethod::Joint;
    }
    return BoundMethod::Hull;
}

inline bool bound_allowed(RenderMode mode, BoundMethod b) {
    if (b == BoundMethod::Trivial || b == BoundMethod::Quad) return true;
    switch (mode) {
        case RenderMode::Common:
        case RenderMode::Rolling:
            return b == BoundMethod::Hull || b == BoundMethod::Adaptive || b == BoundMethod::Zenon;
        case RenderMode::Foveated: return b == BoundMethod::FovSimple || b == BoundMethod::FovRecursive;
        case RenderMode::Joint: return b == BoundMethod::Joint;
    }
    return false;
}

// Convex CCW polygon in NDC guaranteed to contain every pixel center the
// primitive can cover during [t_min, t_max].
struct BoundPoly {
    Polygon vertices;
    double t_min = 0;
    double t_max = 1;
    double guard_px = 0;
    bool fell_back = false;  // tighter method unavailable for this primitive

    bool empty() const { return vertices.empty(); }
    double area() const { return polygon_area(vertices); }
};

struct BoundContext {
    Viewport viewport{256, 256};
    TimeVaryingTransform clip = TimeVaryingTransform::constant(Camera{}.projection());
    double near = Camera{}.near;
    double guard_px = 1.0;
    std::optional<ScanAxis> scan;          // rolling and joint
    const FoveationMap* foveation = nullptr;  // foveated and joint
    // NDC half-extent of the display region rays can look through.
    Vec2 display_extent{1, 1};
    // True when every displayed pixel's scan time lies in [0,1] unclamped, so the
    // beam position is linear in time over the whole display.
    bool linear_scan = true;

    Vec2 guard_half() const { return viewport.pixel_size() * guard_px; }
};

// ---------------------------------------------------------------------------
// Near plane.

struct NearPlaneResult {
    enum class Kind { Kept, Culled, Split };
    Kind kind = Kind::Kept;
    // For Split: vertices of the convex hull of the six space-time vertices
    // clipped to depth >= near (camera space). Every point has w >= near.
    std::vector<Vec3> points;
};

// Culls when all six space-time vertices lie behind the near plane or outside one
// side plane of the frustum widened to `extent`; keeps when all six are in front
// of the near plane. Otherwise clips the convex hull of the six vertices against
// the near plane: kept vertices plus the crossings of all 15 vertex pairs.
inline NearPlaneResult near_plane_split(const SpaceTimeTriangle& tri, double near, const Camera* camera = nullptr,
                                        Vec2 extent = {1, 1}) {
    std::array<Vec3, 6> v;
    for (int s = 0; s < 2; ++s)
        for (int j = 0; j < 3; ++j) v[s * 3 + j] = tri.position[s][j];

    auto depth = [](const Vec3& p) { return -p.z; };
    int in_front = 0;
    for (const Vec3& p : v) in_front += depth(p) >= near;
    if (in_front == 0) return {NearPlaneResult::Kind::Culled, {}};

    if (camera) {
        const double ex = extent.x * camera->tan_half_x, ey = extent.y * camera->tan_half_y;
        auto all_outside = [&](auto plane) {
            for (const Vec3& p : v)
                if (plane(p) <= 0) return false;
            return true;
        };
        if (all_outside([&](const Vec3& p) { return p.x - ex * depth(p); }) ||
            all_outside([&](const Vec3& p) { return -p.x - ex * depth(p); }) ||
            all_outside([&](const Vec3& p) { return p.y - ey * depth(p); }) ||
            all_outside([&](const Vec3& p) { return -p.y - ey * depth(p); }))
            return {NearPlaneResult::Kind::Culled, {}};
    }
    if (in_front == 6) return {NearPlaneResult::Kind::Kept, {}};

    NearPlaneResult r{NearPlaneResult::Kind::Split, {}};
    for (const Vec3& p : v)
        if (depth(p) >= near) r.points.push_back(p);
    for (int a = 0; a < 6; ++a)
        for (int b = a + 1; b < 6; ++b) {
            const double da = depth(v[a]) - near, db = depth(v[b]) - near;
            if ((da >= 0) == (db >= 0)) continue;
            const double f = da / (da - db);
            Vec3 p = lerp(v[a], v[b], f);
            p.z = -near;  // exactly on the plane
            r.points.push_back(p);
        }
    return r;
}

// ---------------------------------------------------------------------------
// Rolling bounds.

namespace detail {

inline std::array<Vec2, 12> endpoint_projections(const SpaceTimeTriangle& tri, const TimeVaryingTransform& clip) {
    std::array<Vec2, 12> out;
    std::size_t k = 0;
    for (int s = 0; s < 2; ++s)
        for (int j = 0; j < 3; ++j)
            for (const Mat4* m : {&clip.start, &clip.end}) out[k++] = project(tri.position[s][j], *m);
    return out;
}

inline BoundPoly finish(std::span<const Vec2> pts, const BoundContext& ctx, double t_min = 0, double t_max = 1) {
    BoundPoly b;
    b.vertices = expand(convex_hull_2d(pts), ctx.guard_half());
    b.t_min = t_min;
    b.t_max = t_max;
    b.guard_px = ctx.guard_px;
    return b;
}

inline Polygon bbox_polygon(std::span<const Vec2> pts) {
    Vec2 lo{INFINITY, INFINITY}, hi{-INFINITY, -INFINITY};
    for (const Vec2& p : pts) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    if (pts.empty()) return {};
    return {{lo.x, lo.y}, {hi.x, lo.y}, {hi.x, hi.y}, {lo.x, hi.y}};
}

}  // namespace detail

inline BoundPoly bound_quad(const SpaceTimeTriangle& tri, const BoundContext& ctx) {
    const auto pts = detail::endpoint_projections(tri, ctx.clip);
    const Polygon box = detail::bbox_polygon(pts);
    return detail::finish(box, ctx);
}

inline BoundPoly bound_hull(const SpaceTimeTriangle& tri, const BoundContext& ctx) {
    const auto pts = detail::endpoint_projections(tri, ctx.clip);
    return detail::finish(pts, ctx);
}

inline BoundPoly bound_adaptive(const SpaceTimeTriangle& tri, const BoundContext& ctx) {
    if (!ctx.scan) return bound_hull(tri, ctx);
    const auto pts = detail::endpoint_projections(tri, ctx.clip);
    double lo = INFINITY, hi = -INFINITY;
    for (const Vec2& p : pts) {
        const double t = ctx.scan->time_unclamped(p);
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    const double t_min = std::clamp(lo, 0.0, 1.0), t_max = std::clamp(hi, 0.0, 1.0);
    std::vector<Vec2> sub;
    sub.reserve(12);
    for (double t : {t_min, t_max}) {
        const Mat4 m = interpolate_transform(ctx.clip, t);
        for (const Vec3& p : triangle_at(tri, t)) sub.push_back(project(p, m));
    }
    return detail::finish(sub, ctx, t_min, t_max);
}

// Quadratic ax^2 + bx + c = 0 for the catch-up equation, real roots ascending.
// Falls back to the linear equation when a is negligible.
inline std::vector<double> zenon_quadratic_roots(double a, double b, double c) {
    std::vector<double> roots;
    const double scale = std::abs(b) + std::abs(c);
    if (std::abs(a) <= 1e-12 * scale || a == 0) {
        if (b != 0) roots.push_back(-c / b);
        return roots;
    }
    double disc = b * b - 4 * a * c;
    if (disc < 0) {
        if (disc < -1e-14 * b * b) return roots;
        disc = 0;
    }
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    double r1 = q / a;
    double r2 = q != 0 ? c / q : r1;
    auto polish = [&](double t) {
        for (int i = 0; i < 2; ++i) {
            const double f = (a * t + b) * t + c;
            const double df = 2 * a * t + b;
            if (df == 0) break;
            const double nt = t - f / df;
            if (!std::isfinite(nt)) break;
            if (std::abs((a * nt + b) * nt + c) > std::abs(f)) break;
            t = nt;
        }
        return t;
    };
    r1 = polish(r1);
    r2 = polish(r2);
    if (r1 > r2) std::swap(r1, r2);
    roots.push_back(r1);
    if (r2 != r1) roots.push_back(r2);
    return roots;
}

// All catch-up times of a beam x_s + t*xdot_s with a projectively moving point
// (x_p + t*xdot_p) / (w_p + t*wdot_p), restricted to times where the point's w
// is positive.
inline std::vector<double> zenon_all_times(double x_s, double xdot_s, double x_p, double xdot_p, double w_p,
                                           double wdot_p) {
    const double a = xdot_s * wdot_p;
    const double b = x_s * wdot_p + xdot_s * w_p - xdot_p;
    const double c = x_s * w_p - x_p;
    std::vector<double> out;
    for (double t : zenon_quadratic_roots(a, b, c))
        if (w_p + t * wdot_p > 0 && std::isfinite(t)) out.push_back(t);
    return out;
}

// Smallest catch-up time in [0,1]; nullopt when the beam never meets the point
// inside the frame.
inline std::optional<double> zenon_time(double x_s, double xdot_s, double x_p, double xdot_p, double w_p,
                                        double wdot_p) {
    constexpr double slack = 1e-12;
    for (double t : zenon_all_times(x_s, xdot_s, x_p, xdot_p, w_p, wdot_p))
        if (t >= -slack && t <= 1 + slack) return std::clamp(t, 0.0, 1.0);
    return std::nullopt;
}

// Where and when the scan beam meets a linearly moving camera-space point.
struct CatchUp {
    Vec2 ndc;
    double time = 0;
};

// Returns nullopt unless exactly one catch-up time exists with positive w.
inline std::optional<CatchUp> catch_up(const Vec3& start, const Vec3& end, const BoundContext& ctx) {
    const Mat4& proj = ctx.clip.start;
    if (start == end) {
        const Vec4 c = proj * Vec4{start.x, start.y, start.z, 1};
        if (!(c.w > 0)) return std::nullopt;
        const Vec2 ndc{c.x / c.w, c.y / c.w};
        return CatchUp{ndc, ctx.scan ? ctx.scan->time_unclamped(ndc) : 0.0};
    }
    const ScanAxis& scan = *ctx.scan;
    const double speed = scan.speed();
    const Vec2 ud = scan.d * (1.0 / speed);
    const Vec2 c{ud.x * 0.5, -ud.y * 0.5};
    const double k = (ud.x + ud.y) * 0.5;
    const Vec4 xs = proj * Vec4{start.x, start.y, start.z, 1};
    const Vec4 xe = proj * Vec4{end.x, end.y, end.z, 1};
    const auto times = zenon_all_times(-k, 1.0 / speed, c.x * xs.x + c.y * xs.y,
                                       c.x * (xe.x - xs.x) + c.y * (xe.y - xs.y), xs.w, xe.w - xs.w);
    if (times.size() != 1) return std::nullopt;
    const double t = times[0];
    const Vec4 x = lerp(xs, xe, t);
    if (!(x.w > 0)) return std::nullopt;
    return CatchUp{{x.x / x.w, x.y / x.w}, t};
}

// ---------------------------------------------------------------------------
// Curved-edge bounding shared by the foveated, Zenon and joint bounds.

// Bound of one curve against a straight chord: the curve lies in the rectangle
// spanned by [u_lo, u_hi] along the chord and [v_lo, v_hi] along its normal.
struct EdgeBound {
    Vec2 chord_a, chord_b;
    Vec2 tangent, normal;  // unit, NDC
    double u_lo = 0, u_hi = 0, v_lo = 0, v_hi = 0;
    double delta_max_px = 0;  // outward bulge in pixels, >= 0
    bool exhaustive = false;  // ternary result disagreed with sampling
    std::array<Vec2, 4> corners() const {
        auto at = [&](double u, double v) { return chord_a + tangent * u + normal * v; };
        return {at(u_lo, v_lo), at(u_hi, v_lo), at(u_hi, v_hi), at(u_lo, v_hi)};
    }
    // The chord pushed out by the bulge: the "displaced edge pair".
    std::pair<Vec2, Vec2> displaced() const {
        return {chord_a + normal * v_hi, chord_b + normal * v_hi};
    }
};

using CurveFn = std::function<std::optional<Vec2>(double)>;

struct CurveFailure {};

namespace detail {

// Maximizes f over [0,1] assuming unimodality; stops when the parameter
// interval maps to less than `tol` in f's argument units or after 64 steps.
inline double ternary_max(const std::function<double(double)>& f, double param_tol, double& arg) {
    double lo = 0, hi = 1;
    for (int it = 0; it < 64 && hi - lo > param_tol; ++it) {
        const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        if (f(m1) < f(m2)) lo = m1;
        else hi = m2;
    }
    arg = 0.5 * (lo + hi);
    return std::max({f(arg), f(0.0), f(1.0)});
}

}  // namespace detail

// `outward` is the side of the chord facing away from the polygon interior.
// Throws CurveFailure when the curve cannot be evaluated somewhere.
inline EdgeBound bound_curve(const Vec2& a, const Vec2& b, const CurveFn& curve, const Vec2& outward,
                             const Viewport& vp) {
    EdgeBound e;
    e.chord_a = a;
    e.chord_b = b;
    const Vec2 ab = b - a;
    const double len = length(ab);
    e.tangent = len > 0 ? ab * (1.0 / len) : Vec2{1, 0};
    e.normal = {e.tangent.y, -e.tangent.x};
    if (dot(e.normal, outward) < 0) e.normal = -e.normal;

    auto eval = [&](double s) {
        auto p = curve(s);
        if (!p || !std::isfinite(p->x) || !std::isfinite(p->y)) throw CurveFailure{};
        return *p;
    };
    auto u_of = [&](const Vec2& p) { return dot(p - a, e.tangent); };
    auto v_of = [&](const Vec2& p) { return dot(p - a, e.normal); };

    constexpr int kCoarse = 32;
    std::array<Vec2, kCoarse + 1> samples;
    double curve_px = 0;
    for (int k = 0; k <= kCoarse; ++k) {
        samples[k] = eval(static_cast<double>(k) / kCoarse);
        if (k > 0) curve_px += vp.pixel_length(samples[k] - samples[k - 1]);
    }
    const double px_along_n = vp.pixel_length(e.normal);
    const double px_along_t = vp.pixel_length(e.tangent);
    // Parameter resolution of half a pixel along the curve.
    const double param_tol = 0.5 / std::max(curve_px, 1.0);

    struct Extremum {
        double ternary;
        double coarse;
    };
    auto extremum = [&](auto&& g) {
        double arg = 0;
        const double t = detail::ternary_max([&](double s) { return g(eval(s)); }, param_tol, arg);
        double c = -INFINITY;
        for (const Vec2& p : samples) c = std::max(c, g(p));
        return Extremum{t, c};
    };
    auto exhaustive = [&](auto&& g) {
        double m = -INFINITY;
        for (int k = 0; k <= 256; ++k) m = std::max(m, g(eval(k / 256.0)));
        return m;
    };

    auto settle = [&](auto&& g, double px_scale) {
        const Extremum x = extremum(g);
        double best = std::max(x.ternary, x.coarse);
        if ((x.coarse - x.ternary) * px_scale > 0.5) {
            e.exhaustive = true;
            best = std::max(best, exhaustive(g));
        }
        return best;
    };

    e.v_hi = std::max(0.0, settle(v_of, px_along_n));
    e.v_lo = std::min(0.0, -settle([&](const Vec2& p) { return -v_of(p); }, px_along_n));
    e.u_hi = std::max(len, settle(u_of, px_along_t));
    e.u_lo = std::min(0.0, -settle([&](const Vec2& p) { return -u_of(p); }, px_along_t));
    e.delta_max_px = e.v_hi * px_along_n;
    return e;
}

// Bounds a closed loop of curves whose endpoints are the chord polygon's
// vertices: hull of every edge rectangle, then the guard band.
inline Polygon bound_curved_polygon(std::span<const Vec2> chords, std::span<const CurveFn> curves,
                                    const Viewport& vp, std::vector<EdgeBound>* edges_out = nullptr) {
    const std::size_t n = chords.size();
    const double orient = signed_area(chords) >= 0 ? 1.0 : -1.0;
    std::vector<Vec2> pts;
    pts.reserve(4 * n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = chords[i], b = chords[(i + 1) % n];
        const Vec2 t = b - a;
        const Vec2 outward = Vec2{t.y, -t.x} * orient;
        const EdgeBound eb = bound_curve(a, b, curves[i], outward, vp);
        for (const Vec2& c : eb.corners()) pts.push_back(c);
        if (edges_out) edges_out->push_back(eb);
    }
    return convex_hull_2d(pts);
}

// Splits edge i of a closed chord/curve loop at parameter params[i] when that
// lies strictly inside (0,1). The new chord vertex is `split_point(i, s)`.
inline void split_loop(std::vector<Vec2>& chords, std::vector<CurveFn>& curves, std::span<const double> params,
                       const std::function<Vec2(std::size_t, double)>& split_point) {
    constexpr double kMin = 1e-6;
    std::vector<Vec2> c2;
    std::vector<CurveFn> f2;
    for (std::size_t i = 0; i < chords.size(); ++i) {
        c2.push_back(chords[i]);
        const double s = params[i];
        if (!(s > kMin && s < 1 - kMin)) {
            f2.push_back(curves[i]);
            continue;
        }
        c2.push_back(split_point(i, s));
        CurveFn whole = curves[i];
        f2.push_back([whole, s](double x) { return whole(x * s); });
        f2.push_back([whole, s](double x) { return whole(s + x * (1 - s)); });
    }
    chords = std::move(c2);
    curves = std::move(f2);
}

// ---------------------------------------------------------------------------
// Foveated bounds.

namespace detail {

// Parameter of the point on segment a-b closest to f.
inline double closest_param(const Vec2& a, const Vec2& b, const Vec2& f) {
    const Vec2 d = b - a;
    const double dd = dot(d, d);
    return dd > 0 ? std::clamp(dot(f - a, d) / dd, 0.0, 1.0) : 0.0;
}

inline CurveFn foveated_segment(const Vec2& x0, const Vec2& x1, const FoveationMap& map) {
    return [x0, x1, &map](double s) -> std::optional<Vec2> { return map.display_to_buffer(lerp(x0, x1, s)); };
}

inline Vec2 outward_normal(const Vec2& a, const Vec2& b, const Vec2& inside) {
    const Vec2 t = b - a;
    Vec2 n{t.y, -t.x};
    if (dot(n, inside - a) > 0) n = -n;
    return n;
}

}  // namespace detail

// Edge x0->x1 (display NDC) bounded against the original straight edge.
// `inside` is any point on the interior side (e.g. the opposite vertex).
inline EdgeBound bound_foveated_simple(const Vec2& x0, const Vec2& x1, const Vec2& inside, const FoveationMap& map,
                                       const Viewport& vp) {
    return bound_curve(x0, x1, detail::foveated_segment(x0, x1, map), detail::outward_normal(x0, x1, inside), vp);
}

// Same edge bounded against the straight edge between the foveated endpoints.
inline EdgeBound bound_foveated_recursive(const Vec2& x0, const Vec2& x1, const Vec2& inside,
                                          const FoveationMap& map, const Viewport& vp) {
    const Vec2 a = map.display_to_buffer(x0), b = map.display_to_buffer(x1);
    return bound_curve(a, b, detail::foveated_segment(x0, x1, map),
                       detail::outward_normal(a, b, map.display_to_buffer(inside)), vp);
}

// Buffer-domain bound of a display-domain convex polygon.
inline Polygon bound_foveated_polygon(std::span<const Vec2> display_poly, const FoveationMap& map, bool recursive,
                                      const Viewport& vp) {
    const std::size_t n = display_poly.size();
    if (n == 0) return {};
    if (n < 3) {
        std::vector<Vec2> pts;
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2 a = display_poly[i], b = display_poly[(i + 1) % n];
            for (int k = 0; k <= 64; ++k) pts.push_back(map.display_to_buffer(lerp(a, b, k / 64.0)));
        }
        return convex_hull_2d(pts);
    }
    // Edges are split where they pass closest to the fovea, where the mapped
    // curve bends hardest.
    std::vector<Vec2> chords(n);
    std::vector<CurveFn> curves(n);
    std::vector<double> split(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = display_poly[i], b = display_poly[(i + 1) % n];
        chords[i] = recursive ? map.display_to_buffer(a) : a;
        curves[i] = detail::foveated_segment(a, b, map);
        split[i] = detail::closest_param(a, b, map.fovea());
    }
    split_loop(chords, curves, split, [&](std::size_t i, double s) {
        const Vec2 m = lerp(display_poly[i], display_poly[(i + 1) % n], s);
        return recursive ? map.display_to_buffer(m) : m;
    });
    const std::size_t loop = chords.size();
    if (!recursive) {
        // The straight display edges do not meet the curve ends, so the chord
        // loop is only used for orientation.
        std::vector<Vec2> pts;
        const double orient = signed_area(display_poly) >= 0 ? 1.0 : -1.0;
        for (std::size_t i = 0; i < loop; ++i) {
            const Vec2 a = chords[i], b = chords[(i + 1) % loop];
            const Vec2 t = b - a;
            const EdgeBound eb = bound_curve(a, b, curves[i], Vec2{t.y, -t.x} * orient, vp);
            for (const Vec2& c : eb.corners()) pts.push_back(c);
        }
        return convex_hull_2d(pts);
    }
    return bound_curved_polygon(chords, curves, vp);
}

// ---------------------------------------------------------------------------
// Zenon and joint bounds.

namespace detail {

// Caught positions of the three vertices, or nullopt when any is ambiguous.
inline std::optional<std::array<CatchUp, 3>> catch_vertices(const SpaceTimeTriangle& tri, const BoundContext& ctx) {
    std::array<CatchUp, 3> out;
    for (int j = 0; j < 3; ++j) {
        auto c = catch_up(tri.position[0][j], tri.position[1][j], ctx);
        if (!c) return std::nullopt;
        out[j] = *c;
    }
    return out;
}

// Rolling region bound with every edge mapped through `remap` (display -> buffer).
inline std::optional<BoundPoly> caught_region(const SpaceTimeTriangle& tri, const BoundContext& ctx,
                                              const FoveationMap* remap) {
    if (!ctx.scan || !ctx.linear_scan || ctx.scan->speed() == 0) return std::nullopt;
    const auto caught = catch_vertices(tri, ctx);
    if (!caught) return std::nullopt;
    auto to_buffer = [remap](const Vec2& p) { return remap ? remap->display_to_buffer(p) : p; };
    std::vector<Vec2> chords(3);
    std::vector<CurveFn> curves(3);
    std::vector<CurveFn> display_curves(3);
    double t_lo = INFINITY, t_hi = -INFINITY;
    for (int j = 0; j < 3; ++j) {
        chords[j] = to_buffer((*caught)[j].ndc);
        t_lo = std::min(t_lo, (*caught)[j].time);
        t_hi = std::max(t_hi, (*caught)[j].time);
        const int k = (j + 1) % 3;
        const Vec3 s0 = tri.position[0][j], s1 = tri.position[0][k];
        const Vec3 e0 = tri.position[1][j], e1 = tri.position[1][k];
        const Vec2 end_a = (*caught)[j].ndc, end_b = (*caught)[k].ndc;
        display_curves[j] = [=, &ctx](double s) -> std::optional<Vec2> {
            if (s == 0) return end_a;
            if (s == 1) return end_b;
            auto c = catch_up(lerp(s0, s1, s), lerp(e0, e1, s), ctx);
            if (!c) return std::nullopt;
            return c->ndc;
        };
        curves[j] = [shown = display_curves[j], to_buffer](double s) -> std::optional<Vec2> {
            auto p = shown(s);
            if (!p) return std::nullopt;
            return to_buffer(*p);
        };
    }
    BoundPoly b;
    try {
        if (remap) {
            // Split each edge where its displayed path passes closest to the fovea.
            std::vector<double> split(3);
            for (int j = 0; j < 3; ++j) {
                auto dist = [&](double s) {
                    auto p = display_curves[j](s);
                    if (!p) throw CurveFailure{};
                    return length(*p - remap->fovea());
                };
                constexpr int kSamples = 64;
                int best = 0;
                double best_d = INFINITY;
                for (int k = 0; k <= kSamples; ++k)
                    if (const double d = dist(static_cast<double>(k) / kSamples); d < best_d) best_d = d, best = k;
                double lo = std::max(0, best - 1) / static_cast<double>(kSamples);
                double hi = std::min(kSamples, best + 1) / static_cast<double>(kSamples);
                for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
                    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
                    if (dist(m1) > dist(m2)) lo = m1;
                    else hi = m2;
                }
                split[j] = 0.5 * (lo + hi);
            }
            split_loop(chords, curves, split, [&](std::size_t i, double s) {
                auto p = curves[i](s);
                if (!p) throw CurveFailure{};
                return *p;
            });
        }
        b.vertices = expand(bound_curved_polygon(chords, curves, ctx.viewport), ctx.guard_half());
    } catch (const CurveFailure&) {
        return std::nullopt;
    }
    b.t_min = std::clamp(t_lo, 0.0, 1.0);
    b.t_max = std::clamp(t_hi, 0.0, 1.0);
    b.guard_px = ctx.guard_px;
    return b;
}

}  // namespace detail

// Hull of where the beam catches each vertex, plus each edge's bulge between
// those points. Falls back to the adaptive bound when a catch-up is ambiguous.
inline BoundPoly bound_zenon(const SpaceTimeTriangle& tri, const BoundContext& ctx) {
    if (auto b = detail::caught_region(tri, ctx, nullptr)) return *b;
    BoundPoly b = bound_adaptive(tri, ctx);
    b.fell_back = true;
    return b;
}

// Hull of the catch-up points alone, with no edge bulge. Not sound under
// perspective motion; kept for measuring how often that matters.
inline std::optional<BoundPoly> bound_zenon_vertices(const SpaceTimeTriangle& tri, const BoundContext& ctx) {
    if (!ctx.scan || ctx.scan->speed() == 0) return std::nullopt;
    const auto caught = detail::catch_vertices(tri, ctx);
    if (!caught) return std::nullopt;
    std::array<Vec2, 3> pts;
    double t_lo = INFINITY, t_hi = -INFINITY;
    for (int j = 0; j < 3; ++j) {
        pts[j] = (*caught)[j].ndc;
        t_lo = std::min(t_lo, (*caught)[j].time);
        t_hi = std::max(t_hi, (*caught)[j].time);
    }
    return detail::finish(pts, ctx, std::clamp(t_lo, 0.0, 1.0), std::clamp(t_hi, 0.0, 1.0));
}

inline BoundPoly bound_foveated_triangle(const SpaceTimeTriangle& tri, const BoundContext& ctx, bool recursive) {
    const FoveationMap& map = *ctx.foveation;
    const Mat4& proj = ctx.clip.start;
    std::array<Vec2, 3> disp;
    for (int j = 0; j < 3; ++j) disp[j] = project(tri.position[0][j], proj);
    const Polygon visible = clip_to_box(disp, ctx.display_extent);
    BoundPoly b;
    if (visible.empty()) return b;
    b.vertices = expand(bound_foveated_polygon(visible, map, recursive, ctx.viewport), ctx.guard_half());
    b.t_min = b.t_max = 0;
    b.guard_px = ctx.guard_px;
    return b;
}

inline BoundPoly bound_joint(const SpaceTimeTriangle& tri, const BoundContext& ctx) {
    const FoveationMap& map = *ctx.foveation;
    if (tri.is_static()) {
        BoundPoly b = bound_foveated_triangle(tri, ctx, true);
        b.t_min = 0;
        b.t_max = 1;
        if (ctx.scan) {
            double lo = INFINITY, hi = -INFINITY;
            for (const Vec3& p : tri.position[0]) {
                const double t = ctx.scan->time(project(p, ctx.clip.start));
                lo = std::min(lo, t);
                hi = std::max(hi, t);
            }
            b.t_min = lo;
            b.t_max = hi;
        }
        return b;
    }
    if (auto b = detail::caught_region(tri, ctx, &map)) return *b;
    // Adaptive display-space region mapped into the buffer.
    BoundContext display_ctx = ctx;
    display_ctx.guard_px = 0;
    const BoundPoly region = bound_adaptive(tri, display_ctx);
    BoundPoly b;
    const Polygon visible = clip_to_box(region.vertices, ctx.display_extent);
    if (visible.empty()) return b;
    b.vertices = expand(bound_foveated_polygon(visible, map, true, ctx.viewport), ctx.guard_half());
    b.t_min = region.t_min;
    b.t_max = region.t_max;
    b.guard_px = ctx.guard_px;
    b.fell_back = true;
    return b;
}

// ---------------------------------------------------------------------------
// Dispatch.

inline BoundPoly bound_trivial(const BoundContext& ctx) {
    const Polygon screen{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
    return detail::finish(screen, ctx);
}

namespace detail {

inline BoundPoly compute_bound_uncapped(const SpaceTimeTriangle& tri, RenderMode mode, BoundMethod method,
                               const BoundContext& ctx, const Camera* cull_camera = nullptr) {
    if (!bound_allowed(mode, method))
        throw ConfigMismatch("bound '" + std::string(to_string(method)) + "' is not valid in mode '" +
                             std::string(to_string(mode)) + "'");
    const NearPlaneResult np = near_plane_split(tri, ctx.near, cull_camera, ctx.display_extent);
    if (np.kind == NearPlaneResult::Kind::Culled) return {};
    if (method == BoundMethod::Trivial) return bound_trivial(ctx);

    const bool foveated = mode == RenderMode::Foveated || mode == RenderMode::Joint;
    if (np.kind == NearPlaneResult::Kind::Split) {
        std::vector<Vec2> proj;
        for (const Vec3& p : np.points)
            for (const Mat4* m : {&ctx.clip.start, &ctx.clip.end}) proj.push_back(project(p, *m));
        Polygon region = convex_hull_2d(proj);
        if (foveated) {
            region = clip_to_box(region, ctx.display_extent);
            if (region.empty()) return {};
            region = bound_foveated_polygon(region, *ctx.foveation, method != BoundMethod::FovSimple, ctx.viewport);
        }
        if (method == BoundMethod::Quad) region = detail::bbox_polygon(region);
        BoundPoly b = detail::finish(region, ctx);
        b.fell_back = true;
        return b;
    }

    switch (method) {
        case BoundMethod::Quad:
            if (foveated) {
                BoundPoly tight = mode == RenderMode::Joint ? bound_joint(tri, ctx) : bound_foveated_triangle(tri, ctx, true);
                tight.vertices = expand(detail::bbox_polygon(tight.vertices), {0, 0});
                return tight;
            }
            return bound_quad(tri, ctx);
        case BoundMethod::Hull: return bound_hull(tri, ctx);
        case BoundMethod::Adaptive: return bound_adaptive(tri, ctx);
        case BoundMethod::Zenon: return bound_zenon(tri, ctx);
        case BoundMethod::FovSimple: return bound_foveated_triangle(tri, ctx, false);
        case BoundMethod::FovRecursive: return bound_foveated_triangle(tri, ctx, true);
        case BoundMethod::Joint: return bound_joint(tri, ctx);
        case BoundMethod::Trivial: break;
    }
    return bound_trivial(ctx);
}

}  // namespace detail

inline constexpr std::size_t kMaxBoundVertices = 15;

// Bound of one primitive for the given mode and method. `tri` must already be
// frozen for modes without rolling. Culled primitives get an empty polygon.
inline BoundPoly compute_bound(const SpaceTimeTriangle& tri, RenderMode mode, BoundMethod method,
                               const BoundContext& ctx, const Camera* cull_camera = nullptr) {
    BoundPoly b = detail::compute_bound_uncapped(tri, mode, method, ctx, cull_camera);
    b.vertices = limit_vertices(std::move(b.vertices), kMaxBoundVertices);
    return b;
}

}  // namespace prast
