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

#include <prast/foveation.hpp>
#include <prast/image.hpp>
#include <prast/parallel.hpp>
#include <prast/viewport.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

namespace prast {

// Box-filtered pyramid; level sizes round down, stopping at 1x1.
inline std::vector<Image> build_mip_chain(const Image& base) {
    std::vector<Image> levels{base};
    while (levels.back().width > 1 || levels.back().height > 1) {
        const Image& src = levels.back();
        const int w = std::max(1, src.width / 2), h = std::max(1, src.height / 2);
        Image dst(w, h);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                Vec3 s;
                int n = 0;
                for (int dy = 0; dy < 2; ++dy)
                    for (int dx = 0; dx < 2; ++dx) {
                        const int sx = std::min(2 * x + dx, src.width - 1), sy = std::min(2 * y + dy, src.height - 1);
                        s += src.at(sx, sy);
                        ++n;
                    }
                dst.at(x, y) = s * (1.0 / n);
            }
        levels.push_back(std::move(dst));
    }
    return levels;
}

namespace detail {

inline void catmull_rom_weights(double f, double w[4]) {
    const double f2 = f * f, f3 = f2 * f;
    w[0] = 0.5 * (-f3 + 2 * f2 - f);
    w[1] = 0.5 * (3 * f3 - 5 * f2 + 2);
    w[2] = 0.5 * (-3 * f3 + 4 * f2 + f);
    w[3] = 0.5 * (f3 - f2);
}

// Bicubic Catmull-Rom lookup at continuous pixel coordinates (centers at
// half-integers), clamp-to-edge addressing.
inline Vec3 sample_cubic(const Image& img, double px, double py) {
    const double x = px - 0.5, y = py - 0.5;
    const int x0 = static_cast<int>(std::floor(x)), y0 = static_cast<int>(std::floor(y));
    double wx[4], wy[4];
    catmull_rom_weights(x - x0, wx);
    catmull_rom_weights(y - y0, wy);
    Vec3 acc;
    for (int j = 0; j < 4; ++j) {
        const int sy = std::clamp(y0 - 1 + j, 0, img.height - 1);
        Vec3 row;
        for (int i = 0; i < 4; ++i) {
            const int sx = std::clamp(x0 - 1 + i, 0, img.width - 1);
            row += img.at(sx, sy) * wx[i];
        }
        acc += row * wy[j];
    }
    return acc;
}

inline Vec3 clamp01(const Vec3& c) {
    return {std::clamp(c.x, 0.0, 1.0), std::clamp(c.y, 0.0, 1.0), std::clamp(c.z, 0.0, 1.0)};
}

// Larger singular value of a 2x2 matrix [a b; c d].
inline double max_singular_value(double a, double b, double c, double d) {
    const double s1 = a * a + b * b + c * c + d * d;
    const double det = a * d - b * c;
    const double disc = std::sqrt(std::max(0.0, s1 * s1 - 4 * det * det));
    return std::sqrt(0.5 * (s1 + disc));
}

}  // namespace detail

// The cubic kernel spans about two texels, so a level whose texels match the
// footprint blurs twice as wide as a box over the display pixel.
inline constexpr double kMipLodBias = -1.0;

// Footprint-driven level: log2 of the larger singular value of the Jacobian of
// display_to_buffer, in buffer pixels per display pixel, plus the bias.
inline double mip_level(const FoveationMap& map, const Viewport& display, const Viewport& buffer, const Vec2& ndc,
                        double bias = kMipLodBias) {
    const Vec2 h = display.pixel_size() * 0.5;
    const Vec2 dx = buffer.to_pixels(map.display_to_buffer(ndc + Vec2{h.x, 0})) -
                    buffer.to_pixels(map.display_to_buffer(ndc - Vec2{h.x, 0}));
    const Vec2 dy = buffer.to_pixels(map.display_to_buffer(ndc + Vec2{0, h.y})) -
                    buffer.to_pixels(map.display_to_buffer(ndc - Vec2{0, h.y}));
    const double sigma = detail::max_singular_value(dx.x, dy.x, dx.y, dy.y);
    return sigma > 1 ? std::max(0.0, std::log2(sigma) + bias) : 0.0;
}

// Display image from a foveated buffer: trilinear MIP lookup with cubic
// filtering inside each level.
inline Image unfoveate_mip(const Image& buffer_img, const FoveationMap& fov, int out_width, int out_height,
                           int threads = 0) {
    const FoveationMap& map = fov.unfoveation_map();
    const auto levels = build_mip_chain(buffer_img);
    const Viewport display{out_width, out_height};
    const Viewport buffer{buffer_img.width, buffer_img.height};
    const double max_level = static_cast<double>(levels.size() - 1);
    Image out(out_width, out_height);
    parallel_for(static_cast<std::size_t>(out_height), threads, [&](std::size_t y0, std::size_t y1) {
        for (int y = static_cast<int>(y0); y < static_cast<int>(y1); ++y)
            for (int x = 0; x < out_width; ++x) {
                const Vec2 ndc = display.pixel_center(x, y);
                const Vec2 src = buffer.to_pixels(map.display_to_buffer(ndc));
                const double level = std::clamp(mip_level(map, display, buffer, ndc), 0.0, max_level);
                const int l0 = static_cast<int>(std::floor(level));
                const int l1 = std::min(l0 + 1, static_cast<int>(max_level));
                const double f = level - l0;
                auto lookup = [&](int l) {
                    const Image& img = levels[static_cast<std::size_t>(l)];
                    const double sx = static_cast<double>(img.width) / buffer.width;
                    const double sy = static_cast<double>(img.height) / buffer.height;
                    return detail::sample_cubic(img, src.x * sx, src.y * sy);
                };
                Vec3 c = lookup(l0);
                if (f > 0 && l1 != l0) c = lerp(c, lookup(l1), f);
                out.at(x, y) = detail::clamp01(c);
            }
    });
    return out;
}

using RadialKernel = std::function<double(double)>;

inline RadialKernel gaussian_kernel(double sigma_px = 1.0) {
    return [sigma_px](double d) { return std::exp(-0.5 * d * d / (sigma_px * sigma_px)); };
}

struct GatherTap {
    int x = 0, y = 0;  // buffer pixel
    double weight = 0;
};

// The 5x5 buffer neighbourhood around a display pixel's buffer position, each
// tap weighted by the kernel of its display-domain distance in display pixels.
// Weights are normalized; when every weight underflows the nearest tap gets 1.
inline std::array<GatherTap, 25> gather_taps(const FoveationMap& map, const Viewport& display, const Viewport& buffer,
                                             int x, int y, const RadialKernel& kernel) {
    const Vec2 ndc = display.pixel_center(x, y);
    const Vec2 here = display.to_pixels(ndc);
    const Vec2 src = buffer.to_pixels(map.display_to_buffer(ndc));
    const int cx = static_cast<int>(std::floor(src.x)), cy = static_cast<int>(std::floor(src.y));
    std::array<GatherTap, 25> taps;
    double wsum = 0;
    double nearest_d = INFINITY;
    std::size_t nearest = 0;
    std::size_t k = 0;
    for (int dy = -2; dy <= 2; ++dy)
        for (int dx = -2; dx <= 2; ++dx, ++k) {
            const int sx = std::clamp(cx + dx, 0, buffer.width - 1);
            const int sy = std::clamp(cy + dy, 0, buffer.height - 1);
            const Vec2 back = display.to_pixels(map.foveate_to_display(buffer.pixel_center(sx, sy)));
            const double d = length(back - here);
            taps[k] = {sx, sy, kernel(d)};
            wsum += taps[k].weight;
            if (d < nearest_d) nearest_d = d, nearest = k;
        }
    if (wsum > 0) {
        for (auto& t : taps) t.weight /= wsum;
    } else {
        for (auto& t : taps) t.weight = 0;
        taps[nearest].weight = 1;
    }
    return taps;
}

inline Image unfoveate_gather(const Image& buffer_img, const FoveationMap& fov, int out_width, int out_height,
                              const RadialKernel& kernel = gaussian_kernel(), int threads = 0) {
    const FoveationMap& map = fov.unfoveation_map();
    const Viewport display{out_width, out_height};
    const Viewport buffer{buffer_img.width, buffer_img.height};
    Image out(out_width, out_height);
    parallel_for(static_cast<std::size_t>(out_height), threads, [&](std::size_t y0, std::size_t y1) {
        for (int y = static_cast<int>(y0); y < static_cast<int>(y1); ++y)
            for (int x = 0; x < out_width; ++x) {
                Vec3 acc;
                for (const GatherTap& t : gather_taps(map, display, buffer, x, y, kernel))
                    acc += buffer_img.at(t.x, t.y) * t.weight;
                out.at(x, y) = acc;
            }
    });
    return out;
}

}  // namespace prast
