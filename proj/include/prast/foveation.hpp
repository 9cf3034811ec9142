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
#include <prast/geometry.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

namespace prast {

inline constexpr double kMaxRadius = std::numbers::sqrt2;
inline constexpr std::size_t kDefaultTableSize = 4096;

using RadialFunction = std::function<double(double)>;

// Uniform samples (d_k, p(d_k)) over [0, sqrt 2]. Lookup inverts by binary search
// over the p values and linear interpolation inside the bracket.
struct InverseTable {
    std::vector<double> d;
    std::vector<double> y;

    double lookup(double value) const {
        if (value <= y.front()) return d.front();
        if (value >= y.back()) return d.back();
        const auto it = std::upper_bound(y.begin(), y.end(), value);
        const std::size_t k = static_cast<std::size_t>(it - y.begin()) - 1;
        const double f = (value - y[k]) / (y[k + 1] - y[k]);
        return d[k] + f * (d[k + 1] - d[k]);
    }

    // Bracket [d_k, d_k+1] containing the preimage of value.
    std::pair<double, double> bracket(double value) const {
        const auto it = std::upper_bound(y.begin(), y.end(), value);
        std::size_t k = it == y.begin() ? 0 : static_cast<std::size_t>(it - y.begin()) - 1;
        k = std::min(k, y.size() - 2);
        return {d[k], d[k + 1]};
    }
};

inline InverseTable invert_p(const RadialFunction& p, std::size_t table_size = kDefaultTableSize) {
    if (table_size < 2) throw ConfigError("inverse table needs at least two samples");
    InverseTable t;
    t.d.resize(table_size);
    t.y.resize(table_size);
    for (std::size_t k = 0; k < table_size; ++k) {
        t.d[k] = kMaxRadius * static_cast<double>(k) / static_cast<double>(table_size - 1);
        t.y[k] = p(t.d[k]);
        if (!std::isfinite(t.y[k])) throw NotMonotone("foveation function is not finite at d=" + std::to_string(t.d[k]));
        if (k > 0 && !(t.y[k] > t.y[k - 1]))
            throw NotMonotone("foveation function is not strictly increasing near d=" + std::to_string(t.d[k]));
    }
    return t;
}

// Power falloff normalized so that p(sqrt 2) = sqrt 2.
inline RadialFunction power_falloff(double alpha) {
    return [alpha](double d) { return kMaxRadius * std::pow(d / kMaxRadius, alpha); };
}

// Piecewise-linear curve through uniform samples over [0, sqrt 2].
inline RadialFunction tabulated_function(std::vector<double> values) {
    if (values.size() < 2) throw ConfigError("p_table needs at least two entries");
    auto table = std::make_shared<const std::vector<double>>(std::move(values));
    return [table](double d) {
        const auto& v = *table;
        const double x = std::clamp(d / kMaxRadius, 0.0, 1.0) * static_cast<double>(v.size() - 1);
        const std::size_t k = std::min(static_cast<std::size_t>(x), v.size() - 2);
        const double f = x - static_cast<double>(k);
        return v[k] + f * (v[k + 1] - v[k]);
    };
}

// Radial lens distortion d * (1 + k1 d^2 + k2 d^4 + k3 d^6).
struct LensModel {
    std::array<double, 3> coeffs{};

    double operator()(double d) const {
        const double d2 = d * d;
        return d * (1.0 + d2 * (coeffs[0] + d2 * (coeffs[1] + d2 * coeffs[2])));
    }
    bool is_identity() const { return coeffs == std::array<double, 3>{}; }
};

// Radial remapping around the fovea. Beyond sqrt 2, p continues linearly with
// its end slope so the map stays invertible on the whole plane.
class FoveationMap {
public:
    FoveationMap() : FoveationMap({0, 0}, [](double d) { return d; }, true) {}

    FoveationMap(Vec2 fovea, RadialFunction p, bool identity = false, std::size_t table_size = kDefaultTableSize)
        : fovea_(fovea), p_(std::move(p)), identity_(identity) {
        if (std::abs(p_(0.0)) > 1e-12) throw NotMonotone("foveation function must satisfy p(0) = 0");
        table_ = invert_p(p_, table_size);
        end_value_ = p_(kMaxRadius);
        const double h = kMaxRadius / static_cast<double>(table_size - 1);
        end_slope_ = (end_value_ - p_(kMaxRadius - h)) / h;
    }

    static FoveationMap identity(Vec2 fovea = {0, 0}) {
        return FoveationMap(fovea, [](double d) { return d; }, true);
    }

    static FoveationMap power(Vec2 fovea, double alpha) {
        if (!(alpha > 0)) throw ConfigError("foveation alpha must be positive");
        return FoveationMap(fovea, power_falloff(alpha), alpha == 1.0);
    }

    // Table values are rescaled so that the last entry equals sqrt 2.
    static FoveationMap table(Vec2 fovea, std::vector<double> values) {
        if (values.size() < 2) throw ConfigError("p_table needs at least two entries");
        if (!(values.back() > 0)) throw NotMonotone("p_table must end positive");
        const double s = kMaxRadius / values.back();
        for (double& v : values) v *= s;
        return FoveationMap(fovea, tabulated_function(std::move(values)));
    }

    const Vec2& fovea() const { return fovea_; }
    bool is_identity() const { return identity_; }
    const InverseTable& inverse_table() const { return table_; }

    double p(double d) const {
        if (identity_) return d;
        if (d <= kMaxRadius) return p_(d);
        return end_value_ + (d - kMaxRadius) * end_slope_;
    }

    double p_inv(double y) const {
        if (identity_) return y;
        if (y <= 0) return 0;
        if (y >= end_value_) return kMaxRadius + (y - end_value_) / end_slope_;
        // Table lookup, then safeguarded secant/bisection on the forward function
        // inside the bracket; exact for piecewise-linear p.
        auto [lo, hi] = table_.bracket(y);
        double flo = p_(lo) - y, fhi = p_(hi) - y;
        if (flo >= 0) return lo;
        if (fhi <= 0) return hi;
        double x = table_.lookup(y);
        for (int it = 0; it < 60; ++it) {
            const double fx = p_(x) - y;
            if (fx == 0) return x;
            if (fx < 0) lo = x, flo = fx;
            else hi = x, fhi = fx;
            if (hi - lo < 1e-15) break;
            double next = lo - flo * (hi - lo) / (fhi - flo);
            if (!(next > lo && next < hi) || it % 3 == 2) next = 0.5 * (lo + hi);
            x = next;
        }
        return 0.5 * (lo + hi);
    }

    // Buffer coordinate -> display coordinate its ray looks through.
    Vec2 foveate_to_display(const Vec2& x_buf) const { return radial(x_buf, false); }

    // Display coordinate -> buffer coordinate.
    Vec2 display_to_buffer(const Vec2& x_disp) const { return radial(x_disp, true); }

    // The map used when resampling for display; differs from *this only after
    // lens composition.
    const FoveationMap& unfoveation_map() const { return display_ ? *display_ : *this; }

    friend FoveationMap compose_lens(const FoveationMap& map, const LensModel& lens);

private:
    Vec2 radial(const Vec2& x, bool inverse) const {
        if (identity_) return x;
        const Vec2 v = x - fovea_;
        const double d = length(v);
        if (d == 0) return fovea_;
        const double r = inverse ? p_inv(d) : p(d);
        return fovea_ + v * (r / d);
    }

    Vec2 fovea_;
    RadialFunction p_;
    bool identity_ = false;
    InverseTable table_;
    double end_value_ = kMaxRadius;
    double end_slope_ = 1.0;
    std::shared_ptr<const FoveationMap> display_;
};

inline FoveationMap compose_lens(const FoveationMap& map, const LensModel& lens) {
    if (lens.is_identity()) return map;
    const FoveationMap cortical = map.unfoveation_map();
    auto composed = [cortical, lens](double d) { return cortical.p(lens(d)); };
    FoveationMap r(map.fovea(), composed, false);
    r.display_ = std::make_shared<const FoveationMap>(cortical);
    return r;
}

}  // namespace prast
