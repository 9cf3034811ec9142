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

// prast: command line front end for the perceptual rasterizer.

#include <prast/metrics.hpp>
#include <prast/oracle.hpp>
#include <prast/raster.hpp>
#include <prast/scene.hpp>
#include <prast/sweep.hpp>
#include <prast/warp.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace prast;

struct RenderArgs {
    std::string scene;
    std::string mode = "common";
    std::string bound;
    int width = 256;
    int height = 256;
    std::string output;
    std::string unfoveate = "none";
    std::string ste;
    std::string depth;
    double guard_px = 1.0;
    std::optional<double> alpha;
    std::vector<double> fovea;
    std::vector<double> scan;
    int threads = 0;
    bool static_shading = false;
};

void add_render_options(CLI::App* cmd, RenderArgs& a) {
    cmd->add_option("--scene", a.scene, "Scene manifest (JSON)")->required();
    cmd->add_option("--mode", a.mode, "common | foveated | rolling | joint");
    cmd->add_option("--bound", a.bound, "trivial | quad | hull | adaptive | zenon | fov-simple | fov-recursive | joint");
    cmd->add_option("--width", a.width, "Image width")->check(CLI::PositiveNumber);
    cmd->add_option("--height", a.height, "Image height")->check(CLI::PositiveNumber);
    cmd->add_option("-o,--output", a.output, "Output image (PPM)")->required();
    cmd->add_option("--unfoveate", a.unfoveate, "none | mip | gather");
    cmd->add_option("--ste", a.ste, "Per-primitive STE CSV");
    cmd->add_option("--depth", a.depth, "Depth dump (PFM)");
    cmd->add_option("--guard-px", a.guard_px, "Bound guard band in pixels")->check(CLI::NonNegativeNumber);
    cmd->add_option("--alpha", a.alpha, "Power foveation exponent (overrides the scene)");
    cmd->add_option("--fovea", a.fovea, "Fovea in NDC, X,Y")->delimiter(',')->expected(2);
    cmd->add_option("--scan", a.scan, "Scan direction, DX,DY")->delimiter(',')->expected(2);
    cmd->add_option("--threads", a.threads, "Worker threads (default: PRAST_THREADS or all cores)");
    cmd->add_flag("--static-shading", a.static_shading, "Evaluate light at frame start instead of per pixel");
}

RenderConfig make_config(const RenderArgs& a, Scene& scene) {
    RenderConfig c;
    c.mode = parse_mode(a.mode);
    if (!a.bound.empty()) c.bound = parse_bound(a.bound);
    c.width = a.width;
    c.height = a.height;
    c.guard_px = a.guard_px;
    c.unfoveate = parse_unfoveate(a.unfoveate);
    c.threads = a.threads;
    c.rolling_shading = !a.static_shading;
    if (!a.scan.empty()) scene.scan = ScanAxis{{a.scan[0], a.scan[1]}};
    if (a.alpha || !a.fovea.empty()) {
        FoveationConfig f = scene.foveation.value_or(FoveationConfig{});
        if (a.alpha) {
            f.alpha = *a.alpha;
            f.p_table.clear();
        }
        if (!a.fovea.empty()) f.fovea = {a.fovea[0], a.fovea[1]};
        if (!f.alpha && f.p_table.empty()) f.alpha = 2.0;
        scene.foveation = f;
    }
    c = resolve_config(c, scene);
    c.validate();
    return c;
}

int run_render(const RenderArgs& a, bool oracle) {
    Scene scene = load_scene(a.scene);
    const RenderConfig config = make_config(a, scene);
    if (oracle) {
        const OracleResult r = trace_scene(scene, config);
        write_image(r.display, a.output);
        if (!a.depth.empty()) write_pfm(r.gbuffer.depth_values(), config.width, config.height, a.depth);
        return 0;
    }
    const RenderResult r = render(scene, config);
    write_image(r.display, a.output);
    if (!a.ste.empty()) ste_report(r.ste, a.ste);
    if (!a.depth.empty()) write_pfm(r.gbuffer.depth_values(), config.width, config.height, a.depth);
    std::printf("ste %.6f tested %llu passed %llu\n", r.ste.aggregate(), static_cast<unsigned long long>(r.ste.tested()),
                static_cast<unsigned long long>(r.ste.passed()));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Perceptual software rasterizer"};
    app.require_subcommand(1);

    RenderArgs render_args, oracle_args;
    add_render_options(app.add_subcommand("render", "Rasterize a scene"), render_args);
    add_render_options(app.add_subcommand("oracle", "Brute-force ray trace a scene"), oracle_args);

    auto* warp = app.add_subcommand("warp", "Warp a frame-start render into a rolling image");
    std::string warp_scene_path, warp_out, warp_mask;
    double threshold = 3.0;
    int warp_w = 256, warp_h = 256;
    warp->add_option("--scene", warp_scene_path)->required();
    warp->add_option("-o,--output", warp_out)->required();
    warp->add_option("--mask", warp_mask, "Disocclusion mask (PGM)");
    warp->add_option("--threshold", threshold, "Stretch threshold in source pixels")->check(CLI::PositiveNumber);
    warp->add_option("--width", warp_w)->check(CLI::PositiveNumber);
    warp->add_option("--height", warp_h)->check(CLI::PositiveNumber);

    auto* compare = app.add_subcommand("compare", "Compare two images");
    bool ssim_flag = false;
    std::string cmp_a, cmp_b, cmp_mask;
    std::vector<double> cmp_fovea;
    compare->add_flag("--ssim", ssim_flag, "Masked SSIM (default metric)");
    compare->add_option("a", cmp_a)->required();
    compare->add_option("b", cmp_b)->required();
    compare->add_option("--mask", cmp_mask, "Mask (PGM, 255 = excluded)");
    compare->add_option("--fovea", cmp_fovea, "64x64 window center in pixels, X,Y")->delimiter(',')->expected(2);

    auto* reference = app.add_subcommand("reference", "Supersampled reference image");
    RenderArgs ref_args;
    int factor = 4;
    reference->add_option("--scene", ref_args.scene)->required();
    reference->add_option("--factor", factor)->check(CLI::PositiveNumber);
    reference->add_option("-o,--output", ref_args.output)->required();
    reference->add_option("--mode", ref_args.mode, "common | rolling");
    reference->add_option("--width", ref_args.width)->check(CLI::PositiveNumber);
    reference->add_option("--height", ref_args.height)->check(CLI::PositiveNumber);

    auto* sweep = app.add_subcommand("sweep", "Run a sweep manifest");
    std::string manifest_path, sweep_out;
    sweep->add_option("--manifest", manifest_path)->required();
    sweep->add_option("-o,--output", sweep_out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ExitCode::ConfigError);
    }

    try {
        if (app.got_subcommand("render")) return run_render(render_args, false);
        if (app.got_subcommand("oracle")) return run_render(oracle_args, true);
        if (app.got_subcommand("warp")) {
            const Scene scene = load_scene(warp_scene_path);
            RenderConfig c;
            c.width = warp_w;
            c.height = warp_h;
            const WarpResult r = warp_scene(scene, c, threshold);
            write_image(r.image, warp_out);
            if (!warp_mask.empty()) write_mask(r.mask, warp_mask);
            std::printf("disoccluded %zu\n", r.mask.count());
            return 0;
        }
        if (app.got_subcommand("compare")) {
            const Image8 a = read_image(cmp_a), b = read_image(cmp_b);
            std::optional<Mask> mask;
            if (!cmp_mask.empty()) mask = read_mask(cmp_mask);
            const double v = cmp_fovea.empty()
                                 ? masked_ssim(a, b, mask ? &*mask : nullptr)
                                 : foveal_ssim(a, b, {cmp_fovea[0], cmp_fovea[1]}, mask ? &*mask : nullptr);
            std::printf("%.9f\n", v);
            return 0;
        }
        if (app.got_subcommand("reference")) {
            Scene scene = load_scene(ref_args.scene);
            RenderConfig c;
            c.mode = parse_mode(ref_args.mode);
            c.width = ref_args.width;
            c.height = ref_args.height;
            write_image(supersample_reference(scene, c, factor), ref_args.output);
            return 0;
        }
        if (app.got_subcommand("sweep")) {
            const RunManifest m = load_manifest(manifest_path);
            const auto rows = run_sweep(m);
            detail::write_atomically(sweep_out, sweep_csv(rows));
            std::size_t failed = 0;
            for (const auto& r : rows) failed += !r.error.empty();
            std::printf("runs %zu failed %zu\n", rows.size(), failed);
            return 0;
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "prast: %s\n", e.what());
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "prast: %s\n", e.what());
        return 1;
    }
    return 0;
}
