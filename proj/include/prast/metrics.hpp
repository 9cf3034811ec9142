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
#include <prast/image.hpp>
#include <prast/raster.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace prast {

struct SSIMParams {
    int window = 11;
    double sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
};

namespace detail {

// BT.601 luma of 8-bit sRGB values, in [0,255].
inline std::vector<double> luma(const Image8& img) {
    std::vector<double> out(static_cast<std::size_t>(img.width) * img.height);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = 0.299 * img.data[3 * i] + 0.587 * img.data[3 * i + 1] + 0.114 * img.data[3 * i + 2];
    return out;
}

inline std::vector<double> gaussian_window(int size, double sigma) {
    std::vector<double> w(static_cast<std::size_t>(size));
    double sum = 0;
    for (int i = 0; i < size; ++i) {
        const double x = i - (size - 1) / 2.0;
        w[static_cast<std::size_t>(i)] = std::exp(-0.5 * x * x / (sigma * sigma));
        sum += w[static_cast<std::size_t>(i)];
    }
    for (double& v : w) v /= sum;
    return w;
}

// Weighted mean of f over each fully contained window (valid region only).
inline std::vector<double> window_means(const std::vector<double>& f, int w, int h, const std::vector<double>& k) {
    const int n = static_cast<int>(k.size());
    const int ow = w - n + 1, oh = h - n + 1;
    std::vector<double> rows(static_cast<std::size_t>(ow) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < ow; ++x) {
            double s = 0;
            for (int i = 0; i < n; ++i) s += k[static_cast<std::size_t>(i)] * f[static_cast<std::size_t>(y) * w + x + i];
            rows[static_cast<std::size_t>(y) * ow + x] = s;
        }
    std::vector<double> out(static_cast<std::size_t>(ow) * oh);
    for (int y = 0; y < oh; ++y)
        for (int x = 0; x < ow; ++x) {
            double s = 0;
            for (int i = 0; i < n; ++i) s += k[static_cast<std::size_t>(i)] * rows[static_cast<std::size_t>(y + i) * ow + x];
            out[static_cast<std::size_t>(y) * ow + x] = s;
        }
    return out;
}

}  // namespace detail

// Mean SSIM over luma windows. Windows that touch a masked pixel are left out.
inline double masked_ssim(const Image8& a, const Image8& b, const Mask* mask = nullptr, const SSIMParams& prm = {}) {
    if (a.width != b.width || a.height != b.height)
        throw DimensionMismatch("image sizes differ: " + std::to_string(a.width) + "x" + std::to_string(a.height) +
                                " vs " + std::to_string(b.width) + "x" + std::to_string(b.height));
    if (mask && (mask->width != a.width || mask->height != a.height)) throw DimensionMismatch("mask size differs from image");
    const int w = a.width, h = a.height, n = prm.window;
    if (w < n || h < n) throw DimensionMismatch("image smaller than the SSIM window");
    const auto la = detail::luma(a), lb = detail::luma(b);
    std::vector<double> aa(la.size()), bb(la.size()), ab(la.size());
    for (std::size_t i = 0; i < la.size(); ++i) {
        aa[i] = la[i] * la[i];
        bb[i] = lb[i] * lb[i];
        ab[i] = la[i] * lb[i];
    }
    const auto k = detail::gaussian_window(n, prm.sigma);
    const auto mu_a = detail::window_means(la, w, h, k), mu_b = detail::window_means(lb, w, h, k);
    const auto e_aa = detail::window_means(aa, w, h, k), e_bb = detail::window_means(bb, w, h, k);
    const auto e_ab = detail::window_means(ab, w, h, k);

    // Summed-area table of the mask for O(1) window checks.
    const int ow = w - n + 1, oh = h - n + 1;
    std::vector<int> sat;
    if (mask) {
        sat.assign(static_cast<std::size_t>(w + 1) * (h + 1), 0);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                sat[static_cast<std::size_t>(y + 1) * (w + 1) + x + 1] = mask->at(x, y) +
                                                                         sat[static_cast<std::size_t>(y) * (w + 1) + x + 1] +
                                                                         sat[static_cast<std::size_t>(y + 1) * (w + 1) + x] -
                                                                         sat[static_cast<std::size_t>(y) * (w + 1) + x];
    }
    auto masked_window = [&](int x, int y) {
        if (!mask) return false;
        auto s = [&](int xx, int yy) { return sat[static_cast<std::size_t>(yy) * (w + 1) + xx]; };
        return s(x + n, y + n) - s(x, y + n) - s(x + n, y) + s(x, y) > 0;
    };

    const double c1 = (prm.k1 * 255.0) * (prm.k1 * 255.0), c2 = (prm.k2 * 255.0) * (prm.k2 * 255.0);
    double sum = 0;
    std::size_t count = 0;
    for (int y = 0; y < oh; ++y)
        for (int x = 0; x < ow; ++x) {
            if (masked_window(x, y)) continue;
            const std::size_t i = static_cast<std::size_t>(y) * ow + x;
            const double ma = mu_a[i], mb = mu_b[i];
            const double va = e_aa[i] - ma * ma, vb = e_bb[i] - mb * mb, cov = e_ab[i] - ma * mb;
            sum += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
            ++count;
        }
    if (count == 0) throw EmptyMask();
    return sum / static_cast<double>(count);
}

inline double masked_ssim(const Image& a, const Image& b, const Mask* mask = nullptr) {
    return masked_ssim(to_srgb8(a), to_srgb8(b), mask);
}

struct Crop {
    int x0 = 0, y0 = 0, width = 0, height = 0;
};

// size x size window centered on a pixel position, clipped to the image.
inline Crop centered_crop(int width, int height, const Vec2& center_px, int size = 64) {
    const int x0 = std::max(0, static_cast<int>(std::lround(center_px.x - size / 2.0)));
    const int y0 = std::max(0, static_cast<int>(std::lround(center_px.y - size / 2.0)));
    const int x1 = std::min(width, static_cast<int>(std::lround(center_px.x + size / 2.0)));
    const int y1 = std::min(height, static_cast<int>(std::lround(center_px.y + size / 2.0)));
    return {x0, y0, std::max(0, x1 - x0), std::max(0, y1 - y0)};
}

inline Image8 crop(const Image8& img, const Crop& c) {
    Image8 out(c.width, c.height);
    for (int y = 0; y < c.height; ++y) std::copy_n(img.at(c.x0, c.y0 + y), 3 * c.width, out.at(0, y));
    return out;
}

inline Mask crop(const Mask& m, const Crop& c) {
    Mask out(c.width, c.height);
    for (int y = 0; y < c.height; ++y)
        for (int x = 0; x < c.width; ++x) out.set(x, y, m.at(c.x0 + x, c.y0 + y));
    return out;
}

// SSIM over the 64x64 window around the fovea (pixel coordinates).
inline double foveal_ssim(const Image8& a, const Image8& b, const Vec2& fovea_px, const Mask* mask = nullptr,
                          int size = 64) {
    if (a.width != b.width || a.height != b.height) throw DimensionMismatch("image sizes differ");
    const Crop c = centered_crop(a.width, a.height, fovea_px, size);
    if (mask) {
        const Mask mc = crop(*mask, c);
        return masked_ssim(crop(a, c), crop(b, c), &mc);
    }
    return masked_ssim(crop(a, c), crop(b, c));
}

inline double foveal_ssim(const Image& a, const Image& b, const Vec2& fovea_px, int size = 64) {
    return foveal_ssim(to_srgb8(a), to_srgb8(b), fovea_px, nullptr, size);
}

// Renders at factor x the resolution without foveation and box-filters down.
inline Image supersample_reference(const Scene& scene, RenderConfig config, int factor = 4) {
    if (factor < 1) throw ConfigError("supersampling factor must be at least 1");
    if (config.mode == RenderMode::Foveated) config.mode = RenderMode::Common;
    if (config.mode == RenderMode::Joint) config.mode = RenderMode::Rolling;
    config = resolve_config(config, scene);
    config.foveation.reset();
    config.bound.reset();
    config.unfoveate = Unfoveate::None;
    config.width *= factor;
    config.height *= factor;
    return downsample(render(scene, config).buffer, factor);
}

inline std::string ste_csv(const STEStats& stats) {
    std::ostringstream out;
    out.precision(10);
    out << "id,tested,passed,ste\n";
    for (const auto& p : stats.primitives)
        out << p.id << ',' << p.tested << ',' << p.passed << ','
            << (p.tested ? static_cast<double>(p.passed) / static_cast<double>(p.tested) : 0.0) << '\n';
    out << "aggregate," << stats.tested() << ',' << stats.passed() << ',' << stats.aggregate() << '\n';
    return out.str();
}

inline void ste_report(const STEStats& stats, const std::string& path) { detail::write_atomically(path, ste_csv(stats)); }

}  // namespace prast
