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
#include <prast/metrics.hpp>
#include <prast/oracle.hpp>
#include <prast/raster.hpp>
#include <prast/scene.hpp>

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace prast {

enum class Reference { Oracle, Supersample };

struct RunManifest {
    std::string scene_path;
    RenderConfig config;
    std::vector<BoundMethod> bounds;  // empty: the mode's default only
    std::vector<double> alphas;       // empty: the scene's foveation
    std::vector<double> angles;       // yaw in degrees; empty: the scene's camera path
    Reference reference = Reference::Oracle;
    int reference_factor = 4;

    std::size_t run_count() const {
        return std::max<std::size_t>(1, bounds.size()) * std::max<std::size_t>(1, alphas.size()) *
               std::max<std::size_t>(1, angles.size());
    }
};

inline Unfoveate parse_unfoveate(std::string_view s) {
    if (s == "none") return Unfoveate::None;
    if (s == "mip") return Unfoveate::Mip;
    if (s == "gather") return Unfoveate::Gather;
    throw ConfigError("unknown unfoveation filter '" + std::string(s) + "'");
}

inline RunManifest load_manifest(const std::string& path) {
    using nlohmann::json;
    std::ifstream f(path);
    if (!f) throw MissingFile(path);
    RunManifest m;
    try {
        const json j = json::parse(f);
        if (!j.contains("scene")) throw ParseError("missing field 'scene'");
        const std::filesystem::path scene = j["scene"].get<std::string>();
        m.scene_path = scene.is_absolute() ? scene.string() : (std::filesystem::path(path).parent_path() / scene).string();
        if (!std::filesystem::exists(m.scene_path)) throw MissingFile(m.scene_path);
        m.config.mode = parse_mode(j.value("mode", "common"));
        m.config.width = j.value("width", m.config.width);
        m.config.height = j.value("height", m.config.height);
        m.config.guard_px = j.value("guard_px", m.config.guard_px);
        m.config.unfoveate = parse_unfoveate(j.value("unfoveate", "none"));
        for (const auto& b : j.value("bounds", json::array())) m.bounds.push_back(parse_bound(b.get<std::string>()));
        for (const auto& a : j.value("alphas", json::array())) m.alphas.push_back(a.get<double>());
        for (const auto& a : j.value("angles", json::array())) m.angles.push_back(a.get<double>());
        const std::string ref = j.value("reference", "oracle");
        if (ref == "oracle") m.reference = Reference::Oracle;
        else if (ref == "supersample") m.reference = Reference::Supersample;
        else throw ParseError("field 'reference' must be 'oracle' or 'supersample'");
        m.reference_factor = j.value("reference_factor", m.reference_factor);
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return m;
}

struct SweepRow {
    RenderMode mode = RenderMode::Common;
    BoundMethod bound = BoundMethod::Trivial;
    std::optional<double> alpha;
    std::optional<double> angle;
    double ste = 0;
    std::uint64_t tested = 0;
    std::uint64_t passed = 0;
    double ssim = 0;
    double foveal_ssim = 0;
    double wall_ms = 0;
    std::string error;
};

inline SweepRow run_one(const Scene& base, const RunManifest& m, std::optional<BoundMethod> bound,
                        std::optional<double> alpha, std::optional<double> angle) {
    SweepRow row;
    row.mode = m.config.mode;
    row.alpha = alpha;
    row.angle = angle;
    RenderConfig config = m.config;
    config.bound = bound;
    row.bound = config.bound_method();
    try {
        Scene scene = base;
        if (angle) set_view_rotation(scene, *angle);
        if (alpha) {
            FoveationConfig fc = scene.foveation.value_or(FoveationConfig{});
            fc.alpha = *alpha;
            fc.p_table.clear();
            scene.foveation = fc;
            config.foveation.reset();
        }
        const auto t0 = std::chrono::steady_clock::now();
        const RenderResult r = render(scene, config);
        row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        row.ste = r.ste.aggregate();
        row.tested = r.ste.tested();
        row.passed = r.ste.passed();
        const Image ref = m.reference == Reference::Oracle ? trace_scene(scene, config).display
                                                           : supersample_reference(scene, config, m.reference_factor);
        const RenderConfig resolved = resolve_config(config, scene);
        const Vec2 fovea = resolved.foveation ? resolved.foveation->fovea() : Vec2{0, 0};
        row.ssim = masked_ssim(r.display, ref);
        row.foveal_ssim = foveal_ssim(r.display, ref, resolved.viewport().to_pixels(fovea));
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

// Cross product of the manifest's axes; failed runs become rows with an error.
inline std::vector<SweepRow> run_sweep(const RunManifest& m) {
    const Scene scene = load_scene(m.scene_path);
    auto axis = [](const auto& v) {
        std::vector<std::optional<typename std::decay_t<decltype(v)>::value_type>> out(v.begin(), v.end());
        if (out.empty()) out.emplace_back();
        return out;
    };
    std::vector<SweepRow> rows;
    for (const auto& b : axis(m.bounds))
        for (const auto& a : axis(m.alphas))
            for (const auto& g : axis(m.angles)) rows.push_back(run_one(scene, m, b, a, g));
    return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out.precision(10);
    out << "mode,bound,alpha,angle,ste,tested,passed,ssim,foveal_ssim,wall_ms,error\n";
    for (const auto& r : rows) {
        std::string err = r.error;
        for (char& c : err)
            if (c == ',' || c == '\n') c = ';';
        out << to_string(r.mode) << ',' << to_string(r.bound) << ',' << (r.alpha ? std::to_string(*r.alpha) : "") << ','
            << (r.angle ? std::to_string(*r.angle) : "") << ',' << r.ste << ',' << r.tested << ',' << r.passed << ','
            << r.ssim << ',' << r.foveal_ssim << ',' << r.wall_ms << ',' << err << '\n';
    }
    return out.str();
}

}  // namespace prast
