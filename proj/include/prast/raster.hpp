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

#include <prast/bounds.hpp>
#include <prast/errors.hpp>
#include <prast/foveation.hpp>
#include <prast/geometry.hpp>
#include <prast/hull.hpp>
#include <prast/image.hpp>
#include <prast/parallel.hpp>
#include <prast/resample.hpp>
#include <prast/scene.hpp>
#include <prast/viewport.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace prast {

enum class Unfoveate { None, Mip, Gather };

struct RenderConfig {
    RenderMode mode = RenderMode::Common;
    std::optional<BoundMethod> bound;  // unset: the mode's default
    int width = 256;
    int height = 256;
    double guard_px = 1.0;
    std::optional<FoveationMap> foveation;
    std::optional<ScanAxis> scan;
    bool rolling_shading = true;
    Unfoveate unfoveate = Unfoveate::None;
    int threads = 0;  // 0: default_thread_count()

    bool foveated() const { return mode == RenderMode::Foveated || mode == RenderMode::Joint; }
    bool rolling() const { return mode == RenderMode::Rolling || mode == RenderMode::Joint; }
    BoundMethod bound_method() const { return bound.value_or(default_bound(mode)); }
    Viewport viewport() const { return {width, height}; }

    void validate() const {
        if (width <= 0 || height <= 0) throw ConfigError("resolution must be positive");
        if (!(guard_px >= 0)) throw ConfigError("guard must be non-negative");
        if (rolling() && !scan) throw ConfigMismatch("mode '" + std::string(to_string(mode)) + "' needs a scan axis");
        if (rolling() && !(scan->speed() > 0)) throw ConfigMismatch("scan direction must be non-zero");
        if (foveated() && !foveation)
            throw ConfigMismatch("mode '" + std::string(to_string(mode)) + "' needs a foveation map");
        if (!bound_allowed(mode, bound_method()))
            throw ConfigMismatch("bound '" + std::string(to_string(bound_method())) + "' is not valid in mode '" +
                                 std::string(to_string(mode)) + "'");
    }
};

// Config with the scene's scan axis and foveation filled in where the mode needs
// them and the caller left them unset.
inline RenderConfig resolve_config(RenderConfig config, const Scene& scene) {
    if (config.rolling() && !config.scan) config.scan = scene.scan;
    if (config.foveated() && !config.foveation && scene.foveation) config.foveation = scene.foveation->build();
    return config;
}

struct Fragment {
    double depth = std::numeric_limits<double>::infinity();
    std::int32_t primitive = -1;
    std::array<double, 3> barycentrics{};
    Vec3 position;  // camera space at `time`
    Vec3 normal;
    std::int32_t material = -1;
    double time = 0;

    bool empty() const { return primitive < 0; }
    bool operator==(const Fragment&) const = default;
};

struct GBuffer {
    int width = 0;
    int height = 0;
    std::vector<Fragment> fragments;

    GBuffer() = default;
    GBuffer(int w, int h) : width(w), height(h), fragments(static_cast<std::size_t>(w) * h) {}
    Fragment& at(int x, int y) { return fragments[static_cast<std::size_t>(y) * width + x]; }
    const Fragment& at(int x, int y) const { return fragments[static_cast<std::size_t>(y) * width + x]; }
    bool operator==(const GBuffer&) const = default;

    std::vector<float> depth_values() const {
        std::vector<float> out(fragments.size());
        for (std::size_t i = 0; i < fragments.size(); ++i)
            out[i] = fragments[i].empty() ? std::numeric_limits<float>::infinity() : static_cast<float>(fragments[i].depth);
        return out;
    }
};

// Display time of a buffer pixel.
inline double pixel_time(const Vec2& ndc, const RenderConfig& config) {
    switch (config.mode) {
        case RenderMode::Rolling: return config.scan->time(ndc);
        case RenderMode::Joint: return config.scan->time(config.foveation->foveate_to_display(ndc));
        default: return 0.0;
    }
}

// Ray and time of every buffer pixel. Rasterizer and oracle sample through this.
class PixelSampler {
public:
    PixelSampler(const RenderConfig& config, const Camera& camera) : viewport_(config.viewport()) {
        rays_.resize(viewport_.pixel_count());
        for (int y = 0; y < viewport_.height; ++y)
            for (int x = 0; x < viewport_.width; ++x) {
                const Vec2 ndc = viewport_.pixel_center(x, y);
                const Vec2 look = config.foveated() ? config.foveation->foveate_to_display(ndc) : ndc;
                rays_[index(x, y)] = pixel_ray(look, camera, pixel_time(ndc, config));
            }
    }

    const Ray& ray(int x, int y) const { return rays_[index(x, y)]; }
    const Viewport& viewport() const { return viewport_; }

private:
    std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * viewport_.width + x; }
    Viewport viewport_;
    std::vector<Ray> rays_;
};

inline Fragment make_fragment(const Ray& ray, const SpaceTimeTriangle& tri, const Hit& hit) {
    Fragment f;
    f.depth = hit.depth;
    f.primitive = tri.id;
    f.barycentrics = hit.barycentrics;
    f.position = ray.direction * (hit.depth / -ray.direction.z);
    Vec3 n;
    for (int j = 0; j < 3; ++j) n += lerp(tri.normal[0][j], tri.normal[1][j], ray.time) * hit.barycentrics[j];
    f.normal = normalize(n);
    f.material = tri.material;
    f.time = ray.time;
    return f;
}

// Intersection of a pixel ray with a space-time triangle at the ray's time.
inline std::optional<Fragment> sample_fragment(const Ray& ray, const SpaceTimeTriangle& tri, double near) {
    const auto hit = intersect(ray, triangle_at(tri, ray.time), near);
    if (!hit) return std::nullopt;
    return make_fragment(ray, tri, *hit);
}

// Nearer depth wins; equal depth goes to the lower primitive id.
inline bool closer(const Fragment& candidate, const Fragment& stored) {
    return candidate.depth < stored.depth || (candidate.depth == stored.depth && candidate.primitive < stored.primitive);
}

struct PrimitiveSTE {
    std::int32_t id = 0;
    std::uint64_t tested = 0;
    std::uint64_t passed = 0;
    bool operator==(const PrimitiveSTE&) const = default;
};

struct STEStats {
    std::vector<PrimitiveSTE> primitives;

    std::uint64_t tested() const {
        std::uint64_t n = 0;
        for (const auto& p : primitives) n += p.tested;
        return n;
    }
    std::uint64_t passed() const {
        std::uint64_t n = 0;
        for (const auto& p : primitives) n += p.passed;
        return n;
    }
    // Zero when nothing was tested.
    double aggregate() const {
        const std::uint64_t t = tested();
        return t == 0 ? 0.0 : static_cast<double>(passed()) / static_cast<double>(t);
    }
    bool operator==(const STEStats&) const = default;
};

// Bounding setup for a frame: projection, guard, scan, foveation, and the extent
// of display space the buffer looks through.
inline BoundContext make_bound_context(const RenderConfig& config, const Camera& camera) {
    BoundContext ctx;
    ctx.viewport = config.viewport();
    ctx.clip = TimeVaryingTransform::constant(camera.projection());
    ctx.near = camera.near;
    ctx.guard_px = config.guard_px;
    if (config.rolling()) ctx.scan = config.scan;
    if (config.foveated()) {
        ctx.foveation = &*config.foveation;
        Vec2 ext{1, 1};
        constexpr int kSteps = 256;
        for (int k = 0; k <= kSteps; ++k) {
            const double s = -1.0 + 2.0 * k / kSteps;
            for (const Vec2 p : {Vec2{s, -1}, Vec2{s, 1}, Vec2{-1, s}, Vec2{1, s}}) {
                const Vec2 d = config.foveation->foveate_to_display(p);
                ext.x = std::max(ext.x, std::abs(d.x));
                ext.y = std::max(ext.y, std::abs(d.y));
            }
        }
        ctx.display_extent = ext;
    }
    if (ctx.scan) {
        ctx.linear_scan = true;
        for (const Vec2 c : {Vec2{-1, -1}, Vec2{1, -1}, Vec2{-1, 1}, Vec2{1, 1}}) {
            const double t = ctx.scan->time_unclamped(Vec2{c.x * ctx.display_extent.x, c.y * ctx.display_extent.y});
            if (t < 0 || t > 1) ctx.linear_scan = false;
        }
    }
    // Side culling tolerates a little slack beyond the sampled extent.
    if (config.foveated()) ctx.display_extent = ctx.display_extent * 1.01;
    return ctx;
}

// Pixel columns [first, last] of row y that the rasterizer tests for `poly`.
inline std::pair<int, int> bound_row_pixels(std::span<const Vec2> poly, const Viewport& vp, int y) {
    double x_lo, x_hi;
    if (!row_span(poly, vp.pixel_center(0, y).y, x_lo, x_hi)) return {1, 0};
    return {std::max(0, static_cast<int>(std::ceil(vp.to_pixels({x_lo, 0}).x - 0.5))),
            std::min(vp.width - 1, static_cast<int>(std::floor(vp.to_pixels({x_hi, 0}).x - 0.5)))};
}

inline bool bound_covers_pixel(std::span<const Vec2> poly, const Viewport& vp, int x, int y) {
    const auto [a, b] = bound_row_pixels(poly, vp, y);
    return x >= a && x <= b;
}

struct RasterResult {
    GBuffer gbuffer;
    STEStats ste;
    std::vector<BoundPoly> bounds;
};

// Bounds every primitive, then resolves visibility in row bands. Each band owns
// its rows of the G-buffer, so the result does not depend on the thread count.
inline RasterResult rasterize(const std::vector<SpaceTimeTriangle>& triangles, const Camera& camera,
                              const RenderConfig& config) {
    config.validate();
    const Viewport vp = config.viewport();
    const BoundContext ctx = make_bound_context(config, camera);
    const BoundMethod method = config.bound_method();
    const bool freeze = !config.rolling();
    const int threads = config.threads > 0 ? config.threads : default_thread_count();

    RasterResult out;
    out.gbuffer = GBuffer(vp.width, vp.height);
    out.bounds.resize(triangles.size());
    parallel_for(triangles.size(), threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const SpaceTimeTriangle tri = freeze ? triangles[i].frozen() : triangles[i];
            out.bounds[i] = compute_bound(tri, config.mode, method, ctx, &camera);
        }
    });

    // Pixel-row range of each bound.
    std::vector<std::pair<int, int>> rows(triangles.size(), {1, 0});
    for (std::size_t i = 0; i < triangles.size(); ++i) {
        const Polygon& poly = out.bounds[i].vertices;
        if (poly.empty()) continue;
        double lo = INFINITY, hi = -INFINITY;
        for (const Vec2& p : poly) {
            const double py = vp.to_pixels(p).y;
            lo = std::min(lo, py);
            hi = std::max(hi, py);
        }
        rows[i] = {std::max(0, static_cast<int>(std::ceil(lo - 0.5))),
                   std::min(vp.height - 1, static_cast<int>(std::floor(hi - 0.5)))};
    }

    const PixelSampler sampler(config, camera);
    out.ste.primitives.resize(triangles.size());
    for (std::size_t i = 0; i < triangles.size(); ++i) out.ste.primitives[i].id = triangles[i].id;
    std::mutex merge;
    parallel_for(static_cast<std::size_t>(vp.height), threads, [&](std::size_t row_b, std::size_t row_e) {
        std::vector<PrimitiveSTE> local(triangles.size());
        for (std::size_t i = 0; i < triangles.size(); ++i) {
            const Polygon& poly = out.bounds[i].vertices;
            const int y0 = std::max(rows[i].first, static_cast<int>(row_b));
            const int y1 = std::min(rows[i].second, static_cast<int>(row_e) - 1);
            for (int y = y0; y <= y1; ++y) {
                const auto [xa, xb] = bound_row_pixels(poly, vp, y);
                for (int x = xa; x <= xb; ++x) {
                    ++local[i].tested;
                    const auto frag = sample_fragment(sampler.ray(x, y), triangles[i], camera.near);
                    if (!frag) continue;
                    ++local[i].passed;
                    Fragment& stored = out.gbuffer.at(x, y);
                    if (closer(*frag, stored)) stored = *frag;
                }
            }
        }
        std::lock_guard lock(merge);
        for (std::size_t i = 0; i < triangles.size(); ++i) {
            out.ste.primitives[i].tested += local[i].tested;
            out.ste.primitives[i].passed += local[i].passed;
        }
    });
    return out;
}

// Empty pixels still carry their sample time.
inline void fill_times(GBuffer& g, const RenderConfig& config) {
    const Viewport vp = config.viewport();
    for (int y = 0; y < g.height; ++y)
        for (int x = 0; x < g.width; ++x)
            if (g.at(x, y).empty()) g.at(x, y).time = pixel_time(vp.pixel_center(x, y), config);
}

// Blinn-Phong in camera space. The eye is the camera origin; the light moves
// with the frame and is evaluated at the pixel's time, or at frame start when
// rolling shading is off.
inline Image shade(const GBuffer& g, const Scene& scene, const RenderConfig& config) {
    Image img(g.width, g.height, scene.clear_color);
    const Vec3 light_s = scene.view_start.transform_point(scene.light.start);
    const Vec3 light_e = scene.view_end.transform_point(scene.light.end);
    for (int y = 0; y < g.height; ++y)
        for (int x = 0; x < g.width; ++x) {
            const Fragment& f = g.at(x, y);
            if (f.empty()) continue;
            const Material& m = scene.materials[static_cast<std::size_t>(f.material)];
            Vec3 c = m.albedo * scene.light.ambient;
            if (scene.light.enabled) {
                const double t = config.rolling_shading ? f.time : 0.0;
                const Vec3 light = lerp(light_s, light_e, t);
                const Vec3 v = normalize(-f.position);
                Vec3 n = f.normal;
                if (dot(n, v) < 0) n = -n;
                const Vec3 l = normalize(light - f.position);
                const Vec3 h = normalize(l + v);
                const double diffuse = std::max(0.0, dot(n, l));
                const double specular = diffuse > 0 ? std::pow(std::max(0.0, dot(n, h)), m.shininess) : 0.0;
                c += hadamard(scene.light.color, m.albedo * (m.kd * diffuse) + Vec3{1, 1, 1} * (m.ks * specular));
            }
            img.at(x, y) = c;
        }
    return img;
}

struct RenderResult {
    GBuffer gbuffer;
    Image buffer;   // what the rasterizer wrote
    Image display;  // unfoveated when requested, else the buffer
    STEStats ste;
};

inline Image display_image(const Image& buffer, const RenderConfig& config) {
    if (!config.foveated() || config.unfoveate == Unfoveate::None) return buffer;
    if (config.unfoveate == Unfoveate::Mip)
        return unfoveate_mip(buffer, *config.foveation, config.width, config.height, config.threads);
    return unfoveate_gather(buffer, *config.foveation, config.width, config.height, gaussian_kernel(), config.threads);
}

inline RenderResult render(const Scene& scene, const RenderConfig& raw_config) {
    const RenderConfig config = resolve_config(raw_config, scene);
    config.validate();
    const Camera camera = scene.camera(config.viewport());
    const auto triangles = build_triangles(scene);
    RasterResult r = rasterize(triangles, camera, config);
    fill_times(r.gbuffer, config);
    RenderResult out;
    out.buffer = shade(r.gbuffer, scene, config);
    out.display = display_image(out.buffer, config);
    out.gbuffer = std::move(r.gbuffer);
    out.ste = std::move(r.ste);
    return out;
}

}  // namespace prast
