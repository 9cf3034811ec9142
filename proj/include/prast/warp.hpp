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
#include <prast/image.hpp>
#include <prast/raster.hpp>
#include <prast/scene.hpp>
#include <prast/viewport.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace prast {

struct WarpResult {
    Image image;
    Mask mask;  // true where no source landed
};

namespace detail {

struct WarpVertex {
    Vec2 px;       // destination, continuous pixel coordinates
    double depth;  // infinity for background
    bool valid;
};

}  // namespace detail

// Forward-warps a frame rendered at t=0 into a rolling image. The source is a
// grid mesh through pixel centers; each vertex moves with the camera to the time
// its destination is scanned out (one fixed-point step). Grid triangles whose
// edges stretch beyond `threshold` times their source length are dropped.
inline WarpResult warp_rolling(const GBuffer& src, const Image& color, const Camera& camera,
                               const TimeVaryingTransform& view, const ScanAxis& scan, double threshold = 3.0) {
    if (src.width != color.width || src.height != color.height) throw DimensionMismatch("G-buffer and image differ in size");
    const int w = src.width, h = src.height;
    const Viewport vp{w, h};
    const Mat4 proj = camera.projection();
    const auto view_inv = inverse(view.start);
    if (!view_inv) throw ConfigError("singular start view");
    // Camera-space motion relative to the start frame: lerp(I, V_e V_s^-1, t).
    const Mat4 rel_end = view.end == view.start ? Mat4::identity() : view.end * *view_inv;
    auto motion = [&](double t) {
        Mat4 m;
        const Mat4 id = Mat4::identity();
        for (std::size_t i = 0; i < 16; ++i) m.m[i] = lerp(id.m[i], rel_end.m[i], t);
        return m;
    };
    auto place = [&](const Vec4& p, double t) -> std::optional<Vec4> {
        const Vec4 c = proj * (motion(t) * p);
        if (!(c.w > 0)) return std::nullopt;
        return c;
    };

    std::vector<detail::WarpVertex> verts(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const Fragment& f = src.at(x, y);
            const Vec2 ndc = vp.pixel_center(x, y);
            const Vec4 p = f.empty() ? Vec4{ndc.x * camera.tan_half_x, ndc.y * camera.tan_half_y, -1, 0}
                                     : Vec4{f.position.x, f.position.y, f.position.z, 1};
            detail::WarpVertex v{{}, std::numeric_limits<double>::infinity(), false};
            auto c = place(p, scan.time(ndc));
            if (c) c = place(p, scan.time({c->x / c->w, c->y / c->w}));
            if (c) {
                v.px = vp.to_pixels({c->x / c->w, c->y / c->w});
                if (!f.empty()) v.depth = c->w;
                v.valid = true;
            }
            verts[static_cast<std::size_t>(y) * w + x] = v;
        }

    WarpResult out{Image(w, h), Mask(w, h, true)};
    std::vector<double> zbuf(static_cast<std::size_t>(w) * h, std::numeric_limits<double>::infinity());
    std::vector<std::uint8_t> filled(zbuf.size(), 0);
    auto vertex = [&](int x, int y) -> const detail::WarpVertex& { return verts[static_cast<std::size_t>(y) * w + x]; };

    auto draw = [&](std::array<std::pair<int, int>, 3> ids) {
        std::array<const detail::WarpVertex*, 3> v;
        for (int k = 0; k < 3; ++k) {
            v[k] = &vertex(ids[k].first, ids[k].second);
            if (!v[k]->valid) return;
        }
        for (int k = 0; k < 3; ++k) {
            const int l = (k + 1) % 3;
            const double src_len = std::hypot(ids[k].first - ids[l].first, ids[k].second - ids[l].second);
            if (length(v[k]->px - v[l]->px) > threshold * src_len) return;
        }
        const Vec2 a = v[0]->px, b = v[1]->px, c = v[2]->px;
        const double area = cross(b - a, c - a);
        if (area == 0) return;
        const int x0 = std::max(0, static_cast<int>(std::ceil(std::min({a.x, b.x, c.x}) - 0.5)));
        const int x1 = std::min(w - 1, static_cast<int>(std::floor(std::max({a.x, b.x, c.x}) - 0.5)));
        const int y0 = std::max(0, static_cast<int>(std::ceil(std::min({a.y, b.y, c.y}) - 0.5)));
        const int y1 = std::min(h - 1, static_cast<int>(std::floor(std::max({a.y, b.y, c.y}) - 0.5)));
        constexpr double eps = 1e-9;
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x) {
                const Vec2 p{x + 0.5, y + 0.5};
                const double l0 = cross(b - p, c - p) / area, l1 = cross(c - p, a - p) / area;
                const double l2 = 1.0 - l0 - l1;
                if (l0 < -eps || l1 < -eps || l2 < -eps) continue;
                double depth = 0;
                bool background = false;
                for (int k = 0; k < 3; ++k) background |= std::isinf(v[k]->depth);
                depth = background ? std::numeric_limits<double>::infinity()
                                   : l0 * v[0]->depth + l1 * v[1]->depth + l2 * v[2]->depth;
                const std::size_t i = static_cast<std::size_t>(y) * w + x;
                if (filled[i] && !(depth < zbuf[i])) continue;
                zbuf[i] = depth;
                filled[i] = 1;
                out.image.at(x, y) = color.at(ids[0].first, ids[0].second) * l0 + color.at(ids[1].first, ids[1].second) * l1 +
                                     color.at(ids[2].first, ids[2].second) * l2;
            }
    };

    for (int y = 0; y + 1 < h; ++y)
        for (int x = 0; x + 1 < w; ++x) {
            draw({{{x, y}, {x + 1, y}, {x, y + 1}}});
            draw({{{x + 1, y}, {x + 1, y + 1}, {x, y + 1}}});
        }

    const double gray = srgb_decode(0.5);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const bool hole = !filled[static_cast<std::size_t>(y) * w + x];
            out.mask.set(x, y, hole);
            if (hole) out.image.at(x, y) = {gray, gray, gray};
        }
    return out;
}

// Renders the scene at frame start and warps it into a rolling image.
inline WarpResult warp_scene(const Scene& scene, RenderConfig config, double threshold = 3.0) {
    config.mode = RenderMode::Rolling;
    config = resolve_config(config, scene);
    if (!config.scan) throw ConfigMismatch("warping needs a scan axis");
    RenderConfig source = config;
    source.mode = RenderMode::Common;
    source.bound.reset();
    source.scan.reset();
    const RenderResult r = render(scene, source);
    return warp_rolling(r.gbuffer, r.buffer, scene.camera(config.viewport()), scene.view(), *config.scan, threshold);
}

}  // namespace prast
