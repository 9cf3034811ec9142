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

#include <prast/image.hpp>

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code;
    std::string out;
};

// Runs the CLI with `args`, capturing stdout; stderr is discarded.
CliRun cli(const std::string& args) {
    const std::string cmd = std::string("\"") + PRAST_CLI + "\" " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, ""};
    std::string out;
    char buf[256];
    while (std::fgets(buf, sizeof buf, pipe)) out += buf;
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string scene(const char* name) { return std::string(PRAST_SCENE_DIR) + "/" + name; }

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("prast_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    fs::path dir_;
};

}  // namespace

TEST_F(CliTest, RenderWritesImageAndReport) {
    const CliRun r = cli("render --scene " + scene("triangle.json") + " --width 32 --height 24 -o " + path("a.ppm") +
                      " --ste " + path("ste.csv") + " --depth " + path("d.pfm"));
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("ste ", 0), 0u) << r.out;
    const prast::Image8 img = prast::read_image(path("a.ppm"));
    EXPECT_EQ(img.width, 32);
    EXPECT_EQ(img.height, 24);
    std::ifstream csv(path("ste.csv"));
    std::string header;
    std::getline(csv, header);
    EXPECT_EQ(header, "id,tested,passed,ste");
    EXPECT_EQ(fs::file_size(path("d.pfm")), std::string("Pf\n32 24\n-1.0\n").size() + 32 * 24 * 4);
}

TEST_F(CliTest, RenderMatchesOracleAndCompareReportsOne) {
    const std::string common = " --scene " + scene("bar.json") + " --mode joint --width 48 --height 48 --threads 2";
    ASSERT_EQ(cli("render" + common + " -o " + path("r.ppm")).code, 0);
    ASSERT_EQ(cli("oracle" + common + " -o " + path("o.ppm")).code, 0);
    const CliRun cmp = cli("compare --ssim " + path("r.ppm") + " " + path("o.ppm"));
    ASSERT_EQ(cmp.code, 0);
    EXPECT_EQ(cmp.out, "1.000000000\n");
    EXPECT_EQ(cli("compare " + path("r.ppm") + " " + path("o.ppm") + " --fovea 24,24").out, "1.000000000\n");
}

TEST_F(CliTest, WarpAndReference) {
    const CliRun w = cli("warp --scene " + scene("bar.json") + " --width 48 --height 48 -o " + path("w.ppm") + " --mask " +
                      path("m.pgm"));
    ASSERT_EQ(w.code, 0);
    EXPECT_EQ(w.out.rfind("disoccluded ", 0), 0u);
    EXPECT_EQ(prast::read_mask(path("m.pgm")).width, 48);
    ASSERT_EQ(cli("reference --scene " + scene("triangle.json") + " --factor 2 --width 16 --height 16 -o " +
                  path("ref.ppm"))
                  .code,
              0);
    EXPECT_EQ(prast::read_image(path("ref.ppm")).width, 16);
}

TEST_F(CliTest, Sweep) {
    std::ofstream(path("m.json")) << R"({"scene": ")" << scene("triangle.json")
                                  << R"(", "width": 16, "height": 16, "bounds": ["trivial", "hull"]})";
    const CliRun r = cli("sweep --manifest " + path("m.json") + " -o " + path("out.csv"));
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "runs 2 failed 0\n");
    std::ifstream csv(path("out.csv"));
    int lines = 0;
    for (std::string l; std::getline(csv, l);) ++lines;
    EXPECT_EQ(lines, 3);
}

TEST_F(CliTest, ExitCodes) {
    const std::string base = "render --scene " + scene("triangle.json") + " -o " + path("x.ppm");
    EXPECT_EQ(cli("").code, 2);
    EXPECT_EQ(cli("render --bogus").code, 2);
    EXPECT_EQ(cli(base + " --mode sideways").code, 2);
    EXPECT_EQ(cli(base + " --mode common --bound zenon --width 0").code, 2);
    EXPECT_EQ(cli(base + " --mode foveated --bound zenon").code, 2);
    EXPECT_EQ(cli(base + " --mode rolling").code, 2);  // no scan axis in the scene
    EXPECT_EQ(cli("render --scene " + path("absent.json") + " -o " + path("x.ppm")).code, 3);
    EXPECT_FALSE(fs::exists(path("x.ppm")));

    std::ofstream(path("s.json")) << R"({"camera": {"start": {}}, "objects": [{"mesh": "gone.obj"}]})";
    EXPECT_EQ(cli("render --scene " + path("s.json") + " -o " + path("x.ppm")).code, 3);
    ASSERT_EQ(cli(base + " --width 16 --height 16").code, 0);
    EXPECT_EQ(cli("compare " + path("x.ppm") + " " + path("absent.ppm")).code, 3);
    EXPECT_EQ(cli("compare " + path("x.ppm") + " " + path("x.ppm") + " --mask " + path("x.ppm")).code, 3);
    EXPECT_EQ(cli("sweep --manifest " + path("absent.json") + " -o " + path("out.csv")).code, 3);
    EXPECT_EQ(cli("--help").code, 0);
}
