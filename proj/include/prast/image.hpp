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
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace prast {

// Linear float RGB image, row 0 at the top.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<Vec3> pixels;

    Image() = default;
    Image(int w, int h, Vec3 fill = {}) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

    Vec3& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    const Vec3& at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    bool operator==(const Image&) const = default;
};

// 8-bit sRGB-encoded RGB image.
struct Image8 {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // RGBRGB...

    Image8() = default;
    Image8(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0) {}

    std::uint8_t* at(int x, int y) { return &data[(static_cast<std::size_t>(y) * width + x) * 3]; }
    const std::uint8_t* at(int x, int y) const { return &data[(static_cast<std::size_t>(y) * width + x) * 3]; }
    bool operator==(const Image8&) const = default;
};

// Boolean mask, true = disoccluded / excluded.
struct Mask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    Mask() = default;
    Mask(int w, int h, bool fill = false) : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}
    bool at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { data[static_cast<std::size_t>(y) * width + x] = v; }
    std::size_t count() const { return static_cast<std::size_t>(std::count(data.begin(), data.end(), 1)); }
    bool operator==(const Mask&) const = default;
};

inline double srgb_encode(double linear) {
    linear = std::clamp(linear, 0.0, 1.0);
    return linear <= 0.0031308 ? 12.92 * linear : 1.055 * std::pow(linear, 1.0 / 2.4) - 0.055;
}

inline double srgb_decode(double encoded) {
    return encoded <= 0.04045 ? encoded / 12.92 : std::pow((encoded + 0.055) / 1.055, 2.4);
}

// Round half away from zero after scaling to [0,255].
inline std::uint8_t quantize(double encoded) {
    return static_cast<std::uint8_t>(std::clamp(std::round(encoded * 255.0), 0.0, 255.0));
}

inline Image8 to_srgb8(const Image& img) {
    Image8 out(img.width, img.height);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        const Vec3& c = img.pixels[i];
        out.data[3 * i + 0] = quantize(srgb_encode(c.x));
        out.data[3 * i + 1] = quantize(srgb_encode(c.y));
        out.data[3 * i + 2] = quantize(srgb_encode(c.z));
    }
    return out;
}

inline Image from_srgb8(const Image8& img) {
    Image out(img.width, img.height);
    for (std::size_t i = 0; i < out.pixels.size(); ++i)
        out.pixels[i] = {srgb_decode(img.data[3 * i] / 255.0), srgb_decode(img.data[3 * i + 1] / 255.0),
                         srgb_decode(img.data[3 * i + 2] / 255.0)};
    return out;
}

namespace detail {

// Writes to a temporary sibling and renames it into place.
inline void write_atomically(const std::string& path, const std::string& bytes) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw IoError("cannot open for writing: " + path);
        f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!f) throw IoError("write failed: " + path);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("rename failed for " + path + ": " + ec.message());
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw MissingFile(path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Parses "P?\n<w> <h>\n<maxval>\n" with comments; returns payload offset.
inline std::size_t parse_pnm_header(const std::string& bytes, const char* magic, int& w, int& h, int& maxval,
                                    const std::string& path) {
    if (bytes.size() < 2 || bytes.compare(0, 2, magic) != 0) throw IoError(path + ": not a " + magic + " file");
    std::size_t pos = 2;
    auto next_int = [&]() {
        for (;;) {
            while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
            if (pos < bytes.size() && bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
                continue;
            }
            break;
        }
        std::size_t start = pos;
        while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) ++pos;
        if (start == pos) throw IoError(path + ": malformed header");
        return std::stoi(bytes.substr(start, pos - start));
    };
    w = next_int();
    h = next_int();
    maxval = next_int();
    if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) throw IoError(path + ": malformed header");
    return pos + 1;
}

}  // namespace detail

inline std::string encode_ppm(const Image8& img) {
    std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    out.append(reinterpret_cast<const char*>(img.data.data()), img.data.size());
    return out;
}

inline void write_image(const Image8& img, const std::string& path) { detail::write_atomically(path, encode_ppm(img)); }
inline void write_image(const Image& img, const std::string& path) { write_image(to_srgb8(img), path); }

inline Image8 read_image(const std::string& path) {
    const std::string bytes = detail::read_file(path);
    int w, h, maxval;
    const std::size_t off = detail::parse_pnm_header(bytes, "P6", w, h, maxval, path);
    if (maxval != 255) throw IoError(path + ": only maxval 255 supported");
    Image8 img(w, h);
    if (bytes.size() - off < img.data.size()) throw IoError(path + ": truncated payload");
    std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(off), img.data.size(), img.data.begin());
    return img;
}

// P5, 255 = masked.
inline void write_mask(const Mask& m, const std::string& path) {
    std::string out = "P5\n" + std::to_string(m.width) + " " + std::to_string(m.height) + "\n255\n";
    for (std::uint8_t v : m.data) out.push_back(static_cast<char>(v ? 255 : 0));
    detail::write_atomically(path, out);
}

inline Mask read_mask(const std::string& path) {
    const std::string bytes = detail::read_file(path);
    int w, h, maxval;
    const std::size_t off = detail::parse_pnm_header(bytes, "P5", w, h, maxval, path);
    Mask m(w, h);
    if (bytes.size() - off < m.data.size()) throw IoError(path + ": truncated payload");
    for (std::size_t i = 0; i < m.data.size(); ++i) m.data[i] = static_cast<unsigned char>(bytes[off + i]) >= 128;
    return m;
}

// Single-channel PFM, little endian, rows bottom-to-top per the format.
inline void write_pfm(const std::vector<float>& values, int width, int height, const std::string& path) {
    std::string out = "Pf\n" + std::to_string(width) + " " + std::to_string(height) + "\n-1.0\n";
    for (int y = height - 1; y >= 0; --y)
        out.append(reinterpret_cast<const char*>(&values[static_cast<std::size_t>(y) * width]),
                   static_cast<std::size_t>(width) * sizeof(float));
    detail::write_atomically(path, out);
}

// Box-filter downsample by an integer factor (linear space).
inline Image downsample(const Image& img, int factor) {
    if (factor <= 1) return img;
    Image out(img.width / factor, img.height / factor);
    const double inv = 1.0 / (factor * factor);
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x) {
            Vec3 s;
            for (int dy = 0; dy < factor; ++dy)
                for (int dx = 0; dx < factor; ++dx) s += img.at(x * factor + dx, y * factor + dy);
            out.at(x, y) = s * inv;
        }
    return out;
}

}  // namespace prast
