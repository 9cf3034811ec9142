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

#include <prast/bounds.hpp>
#include <prast/errors.hpp>
#include <prast/foveation.hpp>
#include <prast/geometry.hpp>
#include <prast/viewport.hpp>

#include <json.hpp>

#include <array>
#include <cmath>
#include <filesystem>
#include <functional>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace prast {

struct Material {
    std::string name;
    Vec3 albedo{0.8, 0.8, 0.8};
    double kd = 1.0;
    double ks = 0.0;
    double shininess = 32.0;
};

struct Mesh {
    std::vector<Vec3> positions;
    std::vector<Vec3> normals;
    // Per triangle: position indices, normal indices (-1 = face normal), material.
    std::vector<std::array<int, 3>> faces;
    std::vector<std::array<int, 3>> face_normals;
    std::vector<int> face_material;  // -1 = object default

    std::size_t triangle_count() const { return faces.size(); }
};

struct SceneObject {
    std::string mesh_path;
    Mesh mesh;
    Mat4 model_start = Mat4::identity();
    Mat4 model_end = Mat4::identity();
    int material = 0;
};

struct Light {
    Vec3 start{0, 5, 0};
    Vec3 end{0, 5, 0};
    Vec3 color{1, 1, 1};
    double ambient = 0.15;
    bool enabled = true;
};

struct FoveationConfig {
    Vec2 fovea{0, 0};
    std::optional<double> alpha;
    std::vector<double> p_table;
    LensModel lens;

    FoveationMap build() const {
        FoveationMap m = alpha ? FoveationMap::power(fovea, *alpha)
                               : (p_table.empty() ? FoveationMap::identity(fovea) : FoveationMap::table(fovea, p_table));
        return compose_lens(m, lens);
    }
};

struct Scene {
    std::vector<Material> materials;
    std::vector<SceneObject> objects;
    Mat4 view_start = Mat4::identity();
    Mat4 view_end = Mat4::identity();
    double fov_y_deg = 60.0;
    double near = 0.05;
    Light light;
    Vec3 clear_color{0.05, 0.05, 0.08};
    std::optional<ScanAxis> scan;
    std::optional<FoveationConfig> foveation;

    std::size_t triangle_count() const {
        std::size_t n = 0;
        for (const auto& o : objects) n += o.mesh.triangle_count();
        return n;
    }

    TimeVaryingTransform view() const { return {view_start, view_end}; }
    Camera camera(const Viewport& vp) const {
        return Camera::from_fov_y(fov_y_deg, static_cast<double>(vp.width) / vp.height, near);
    }

    int material_id(const std::string& name) const {
        for (std::size_t i = 0; i < materials.size(); ++i)
            if (materials[i].name == name) return static_cast<int>(i);
        return -1;
    }
};

// Wavefront OBJ subset: v, vn, f (v, v/vt, v//vn, v/vt/vn, negative indices,
// polygons fan-triangulated), usemtl. Other statements are ignored.
inline Mesh parse_obj(std::istream& in, const std::string& source,
                      const std::function<int(const std::string&)>& material_lookup) {
    Mesh mesh;
    std::string line;
    int line_no = 0;
    int current_material = -1;
    auto fail = [&](const std::string& msg) { throw ParseError(source + ":" + std::to_string(line_no) + ": " + msg); };
    auto finite3 = [&](const Vec3& v) {
        if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z))
            throw NonFiniteVertex(source + ":" + std::to_string(line_no) + ": non-finite value");
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') continue;
        if (tag == "v" || tag == "vn") {
            std::string xs, ys, zs;
            if (!(ls >> xs >> ys >> zs)) fail("expected three coordinates");
            Vec3 v;
            try {
                v = {std::stod(xs), std::stod(ys), std::stod(zs)};
            } catch (const std::exception&) {
                fail("bad number");
            }
            finite3(v);
            (tag == "v" ? mesh.positions : mesh.normals).push_back(v);
        } else if (tag == "f") {
            std::vector<std::pair<int, int>> corners;
            std::string tok;
            while (ls >> tok) {
                int vi = 0, ni = 0;
                const auto s1 = tok.find('/');
                try {
                    vi = std::stoi(tok.substr(0, s1));
                    if (s1 != std::string::npos) {
                        const auto s2 = tok.find('/', s1 + 1);
                        if (s2 != std::string::npos && s2 + 1 < tok.size()) ni = std::stoi(tok.substr(s2 + 1));
                    }
                } catch (const std::exception&) {
                    fail("bad face index '" + tok + "'");
                }
                auto resolve = [&](int idx, std::size_t count, const char* what) {
                    const long r = idx < 0 ? static_cast<long>(count) + idx : idx - 1;
                    if (idx == 0 || r < 0 || r >= static_cast<long>(count))
                        fail(std::string(what) + " index " + std::to_string(idx) + " out of range");
                    return static_cast<int>(r);
                };
                const int v = resolve(vi, mesh.positions.size(), "vertex");
                const int n = ni != 0 ? resolve(ni, mesh.normals.size(), "normal") : -1;
                corners.emplace_back(v, n);
            }
            if (corners.size() < 3) fail("face needs at least three vertices");
            for (std::size_t k = 1; k + 1 < corners.size(); ++k) {
                mesh.faces.push_back({corners[0].first, corners[k].first, corners[k + 1].first});
                mesh.face_normals.push_back({corners[0].second, corners[k].second, corners[k + 1].second});
                mesh.face_material.push_back(current_material);
            }
        } else if (tag == "usemtl") {
            std::string name;
            ls >> name;
            current_material = material_lookup(name);
            if (current_material < 0) fail("unknown material '" + name + "'");
        }
    }
    return mesh;
}

inline Mesh load_obj(const std::string& path, const std::function<int(const std::string&)>& material_lookup) {
    std::ifstream f(path);
    if (!f) throw MissingFile(path);
    return parse_obj(f, path, material_lookup);
}

namespace detail {

using nlohmann::json;

inline Vec3 json_vec3(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 3) throw ParseError("field '" + field + "' must be an array of 3 numbers");
    Vec3 v;
    try {
        v = {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
    } catch (const json::exception&) {
        throw ParseError("field '" + field + "' must be an array of 3 numbers");
    }
    if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z))
        throw NonFiniteVertex("field '" + field + "' is not finite");
    return v;
}

inline Vec2 json_vec2(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError("field '" + field + "' must be an array of 2 numbers");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline double json_number(const json& j, const std::string& key, double fallback, const std::string& ctx) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw ParseError("field '" + ctx + "." + key + "' must be a number");
    return j[key].get<double>();
}

// {"translation": [...], "rotation": [w,x,y,z], "scale": s or [...]}
inline Mat4 json_pose(const json& j, const std::string& ctx) {
    if (!j.is_object()) throw ParseError("field '" + ctx + "' must be an object");
    Mat4 t = Mat4::identity(), r = Mat4::identity(), s = Mat4::identity();
    if (j.contains("translation")) t = Mat4::translation(json_vec3(j["translation"], ctx + ".translation"));
    if (j.contains("rotation")) {
        const auto& q = j["rotation"];
        if (!q.is_array() || q.size() != 4) throw ParseError("field '" + ctx + ".rotation' must be a quaternion [w,x,y,z]");
        r = Mat4::rotation(q[0].get<double>(), q[1].get<double>(), q[2].get<double>(), q[3].get<double>());
    }
    if (j.contains("rotation_y_deg")) r = Mat4::rotation_y(json_number(j, "rotation_y_deg", 0, ctx) * M_PI / 180.0);
    if (j.contains("scale")) {
        const auto& sc = j["scale"];
        s = sc.is_number() ? Mat4::scale({sc.get<double>(), sc.get<double>(), sc.get<double>()})
                           : Mat4::scale(json_vec3(sc, ctx + ".scale"));
    }
    return t * r * s;
}

// Camera pose -> view matrix. Accepts a pose or {"eye", "target", "up"}.
inline Mat4 json_view(const json& j, const std::string& ctx) {
    Mat4 camera_to_world;
    if (j.contains("eye")) {
        const Vec3 eye = json_vec3(j["eye"], ctx + ".eye");
        const Vec3 target = json_vec3(j.value("target", json::array({0, 0, 0})), ctx + ".target");
        const Vec3 up = json_vec3(j.value("up", json::array({0, 1, 0})), ctx + ".up");
        const Vec3 back = normalize(eye - target);
        const Vec3 right = normalize(cross(up, back));
        const Vec3 up2 = cross(back, right);
        camera_to_world = Mat4::identity();
        for (int i = 0; i < 3; ++i) {
            camera_to_world(i, 0) = i == 0 ? right.x : i == 1 ? right.y : right.z;
            camera_to_world(i, 1) = i == 0 ? up2.x : i == 1 ? up2.y : up2.z;
            camera_to_world(i, 2) = i == 0 ? back.x : i == 1 ? back.y : back.z;
            camera_to_world(i, 3) = i == 0 ? eye.x : i == 1 ? eye.y : eye.z;
        }
    } else {
        camera_to_world = json_pose(j, ctx);
    }
    auto inv = inverse(camera_to_world);
    if (!inv) throw ParseError("field '" + ctx + "' gives a singular camera pose");
    return *inv;
}

inline FoveationConfig json_foveation(const json& j) {
    FoveationConfig f;
    if (j.contains("fovea")) f.fovea = json_vec2(j["fovea"], "foveation.fovea");
    if (j.contains("alpha")) f.alpha = json_number(j, "alpha", 1.0, "foveation");
    if (j.contains("p_table")) {
        if (!j["p_table"].is_array()) throw ParseError("field 'foveation.p_table' must be an array");
        for (const auto& v : j["p_table"]) f.p_table.push_back(v.get<double>());
    }
    if (j.contains("lens")) {
        const auto& c = j["lens"].value("coeffs", json::array());
        for (std::size_t i = 0; i < std::min<std::size_t>(3, c.size()); ++i) f.lens.coeffs[i] = c[i].get<double>();
    }
    return f;
}

}  // namespace detail

// Scene manifest (JSON) plus OBJ meshes resolved relative to the manifest.
inline Scene load_scene(const std::string& path) {
    using nlohmann::json;
    std::ifstream f(path);
    if (!f) throw MissingFile(path);
    json j;
    try {
        j = json::parse(f);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    const std::filesystem::path base = std::filesystem::path(path).parent_path();
    Scene scene;
    try {
        if (!j.is_object()) throw ParseError("scene root must be an object");
        for (const auto& m : j.value("materials", json::array())) {
            Material mat;
            mat.name = m.value("name", "material" + std::to_string(scene.materials.size()));
            if (m.contains("albedo")) mat.albedo = detail::json_vec3(m["albedo"], "materials." + mat.name + ".albedo");
            mat.kd = detail::json_number(m, "kd", mat.kd, "materials." + mat.name);
            mat.ks = detail::json_number(m, "ks", mat.ks, "materials." + mat.name);
            mat.shininess = detail::json_number(m, "shininess", mat.shininess, "materials." + mat.name);
            scene.materials.push_back(mat);
        }
        if (scene.materials.empty()) scene.materials.push_back(Material{"default"});

        if (!j.contains("camera")) throw ParseError("missing field 'camera'");
        const json& cam = j["camera"];
        scene.fov_y_deg = detail::json_number(cam, "fov_y_deg", scene.fov_y_deg, "camera");
        scene.near = detail::json_number(cam, "near", scene.near, "camera");
        if (!(scene.near > 0)) throw ParseError("field 'camera.near' must be positive");
        if (!cam.contains("start")) throw ParseError("missing field 'camera.start'");
        scene.view_start = detail::json_view(cam["start"], "camera.start");
        scene.view_end = cam.contains("end") ? detail::json_view(cam["end"], "camera.end") : scene.view_start;

        if (j.contains("light")) {
            const json& l = j["light"];
            scene.light.enabled = l.value("enabled", true);
            if (l.contains("start")) scene.light.start = detail::json_vec3(l["start"], "light.start");
            scene.light.end = l.contains("end") ? detail::json_vec3(l["end"], "light.end") : scene.light.start;
            if (l.contains("color")) scene.light.color = detail::json_vec3(l["color"], "light.color");
            scene.light.ambient = detail::json_number(l, "ambient", scene.light.ambient, "light");
        }
        if (j.contains("clear_color")) scene.clear_color = detail::json_vec3(j["clear_color"], "clear_color");
        if (j.contains("scan")) scene.scan = ScanAxis{detail::json_vec2(j["scan"], "scan")};
        if (j.contains("foveation")) scene.foveation = detail::json_foveation(j["foveation"]);

        if (!j.contains("objects") || !j["objects"].is_array()) throw ParseError("missing array 'objects'");
        std::size_t idx = 0;
        for (const auto& o : j["objects"]) {
            const std::string ctx = "objects[" + std::to_string(idx++) + "]";
            if (!o.contains("mesh") || !o["mesh"].is_string()) throw ParseError("field '" + ctx + ".mesh' must be a path");
            SceneObject obj;
            obj.mesh_path = (base / o["mesh"].get<std::string>()).string();
            if (o.contains("material")) {
                obj.material = scene.material_id(o["material"].get<std::string>());
                if (obj.material < 0) throw ParseError("field '" + ctx + ".material' names an unknown material");
            }
            obj.model_start = o.contains("start") ? detail::json_pose(o["start"], ctx + ".start") : Mat4::identity();
            obj.model_end = o.contains("end") ? detail::json_pose(o["end"], ctx + ".end") : obj.model_start;
            obj.mesh = load_obj(obj.mesh_path, [&](const std::string& n) { return scene.material_id(n); });
            scene.objects.push_back(std::move(obj));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
    return scene;
}

namespace detail {

inline Mat4 transpose(const Mat4& a) {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r(i, j) = a(j, i);
    return r;
}

inline Mat4 normal_matrix(const Mat4& model_view) {
    Mat4 linear = model_view;
    linear(0, 3) = linear(1, 3) = linear(2, 3) = 0;
    const auto inv = inverse(linear);
    if (!inv) throw ConfigError("singular model-view transform");
    return transpose(*inv);
}

}  // namespace detail

// Camera-space space-time triangles in stream order: the start positions use the
// start model and view matrices, the end positions the end ones.
inline std::vector<SpaceTimeTriangle> build_triangles(const Scene& scene) {
    std::vector<SpaceTimeTriangle> out;
    out.reserve(scene.triangle_count());
    for (const SceneObject& obj : scene.objects) {
        const std::array<Mat4, 2> mv{scene.view_start * obj.model_start, scene.view_end * obj.model_end};
        const std::array<Mat4, 2> nm{detail::normal_matrix(mv[0]), detail::normal_matrix(mv[1])};
        const Mesh& mesh = obj.mesh;
        for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
            SpaceTimeTriangle tri;
            tri.id = static_cast<std::int32_t>(out.size());
            tri.material = mesh.face_material[f] >= 0 ? mesh.face_material[f] : obj.material;
            for (int s = 0; s < 2; ++s) {
                for (int j = 0; j < 3; ++j) {
                    tri.position[s][j] = mv[s].transform_point(mesh.positions[mesh.faces[f][j]]);
                    if (!std::isfinite(tri.position[s][j].x) || !std::isfinite(tri.position[s][j].y) ||
                        !std::isfinite(tri.position[s][j].z))
                        throw NonFiniteVertex(obj.mesh_path + ": transformed vertex is not finite");
                }
                const Vec3 face = normalize(cross(tri.position[s][1] - tri.position[s][0],
                                                  tri.position[s][2] - tri.position[s][0]));
                for (int j = 0; j < 3; ++j) {
                    const int n = mesh.face_normals[f][j];
                    tri.normal[s][j] = n >= 0 ? normalize(nm[s].transform_vector(mesh.normals[n])) : face;
                }
            }
            out.push_back(tri);
        }
    }
    return out;
}

// Camera yawed by `degrees` around its vertical axis between start and end.
inline void set_view_rotation(Scene& scene, double degrees) {
    scene.view_end = Mat4::rotation_y(-degrees * M_PI / 180.0) * scene.view_start;
}

}  // namespace prast
