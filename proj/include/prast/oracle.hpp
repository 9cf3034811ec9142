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

#include <prast/raster.hpp>

#include <utility>
#include <vector>

namespace prast {

// Brute-force reference: every pixel against every primitive, no bounds.
inline GBuffer trace(const std::vector<SpaceTimeTriangle>& triangles, const Camera& camera, const RenderConfig& config) {
    config.validate();
    const Viewport vp = config.viewport();
    const PixelSampler sampler(config, camera);
    GBuffer g(vp.width, vp.height);
    parallel_for(static_cast<std::size_t>(vp.height), config.threads, [&](std::size_t b, std::size_t e) {
        for (int y = static_cast<int>(b); y < static_cast<int>(e); ++y)
            for (int x = 0; x < vp.width; ++x) {
                const Ray& ray = sampler.ray(x, y);
                Fragment& best = g.at(x, y);
                for (const SpaceTimeTriangle& tri : triangles) {
                    const auto hit = intersect(ray, triangle_at(tri, ray.time), camera.near);
                    if (hit && (hit->depth < best.depth || (hit->depth == best.depth && tri.id < best.primitive)))
                        best = make_fragment(ray, tri, *hit);
                }
            }
    });
    fill_times(g, config);
    return g;
}

struct OracleResult {
    GBuffer gbuffer;
    Image buffer;
    Image display;
};

inline OracleResult trace_scene(const Scene& scene, const RenderConfig& raw_config) {
    const RenderConfig config = resolve_config(raw_config, scene);
    config.validate();
    OracleResult out;
    out.gbuffer = trace(build_triangles(scene), scene.camera(config.viewport()), config);
    out.buffer = shade(out.gbuffer, scene, config);
    out.display = display_image(out.buffer, config);
    return out;
}

// Pixels whose ray hits `tri`, ignoring occlusion.
inline std::vector<std::pair<int, int>> coverage_set(const SpaceTimeTriangle& tri, const Camera& camera,
                                                     const PixelSampler& sampler) {
    std::vector<std::pair<int, int>> out;
    const Viewport& vp = sampler.viewport();
    for (int y = 0; y < vp.height; ++y)
        for (int x = 0; x < vp.width; ++x)
            if (sample_fragment(sampler.ray(x, y), tri, camera.near)) out.emplace_back(x, y);
    return out;
}

inline std::vector<std::pair<int, int>> coverage_set(const SpaceTimeTriangle& tri, const Camera& camera,
                                                     const RenderConfig& config) {
    return coverage_set(tri, camera, PixelSampler(config, camera));
}

}  // namespace prast
