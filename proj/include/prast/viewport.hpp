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
#include <cmath>

namespace prast {

// Pixel grid over NDC (-1,1)^2. Row 0 is the top row; pixel (i, j) has its
// center at NDC ((i+0.5)/W*2-1, 1-(j+0.5)/H*2).
struct Viewport {
    int width = 0;
    int height = 0;

    Vec2 pixel_center(int i, int j) const {
        return {(i + 0.5) / width * 2.0 - 1.0, 1.0 - (j + 0.5) / height * 2.0};
    }

    // Continuous pixel coordinates (pixel centers at half-integers).
    Vec2 to_pixels(const Vec2& ndc) const { return {(ndc.x + 1.0) * 0.5 * width, (1.0 - ndc.y) * 0.5 * height}; }
    Vec2 to_ndc(const Vec2& px) const { return {px.x / width * 2.0 - 1.0, 1.0 - px.y / height * 2.0}; }

    // NDC extent of one pixel.
    Vec2 pixel_size() const { return {2.0 / width, 2.0 / height}; }

    // Length in pixels of an NDC displacement.
    double pixel_length(const Vec2& ndc_delta) const {
        return std::hypot(ndc_delta.x * 0.5 * width, ndc_delta.y * 0.5 * height);
    }

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }
    bool operator==(const Viewport&) const = default;
};

// Rolling scan direction over unit screen coordinates (x right, y down, both in
// [0,1]); the display shows unit point u at time u . d.
struct ScanAxis {
    Vec2 d{1, 0};

    static Vec2 unit_coords(const Vec2& ndc) { return {(ndc.x + 1.0) * 0.5, (1.0 - ndc.y) * 0.5}; }

    double time_unclamped(const Vec2& ndc) const { return dot(unit_coords(ndc), d); }
    double time(const Vec2& ndc) const { return std::clamp(time_unclamped(ndc), 0.0, 1.0); }
    double speed() const { return length(d); }
};

}  // namespace prast
