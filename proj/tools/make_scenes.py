#!/usr/bin/env python3
"""Writes the bundled desk scenes (JSON manifests + OBJ meshes) into scenes/."""

import argparse
import json
import math
from pathlib import Path


class Mesh:
    def __init__(self):
        self.v = []
        self.vn = []
        self.faces = []  # (material or None, [(vi, ni), ...])

    def quad(self, a, b, c, d, normal, material=None):
        base = len(self.v)
        self.v += [a, b, c, d]
        self.vn.append(normal)
        n = len(self.vn)
        idx = [(base + k + 1, n) for k in range(4)]
        self.faces.append((material, idx))

    def write(self, path):
        lines = []
        for p in self.v:
            lines.append("v %.9g %.9g %.9g" % tuple(p))
        for n in self.vn:
            lines.append("vn %.9g %.9g %.9g" % tuple(n))
        current = None
        for material, idx in self.faces:
            if material is not None and material != current:
                lines.append("usemtl " + material)
                current = material
            lines.append("f " + " ".join("%d//%d" % f for f in idx))
        path.write_text("\n".join(lines) + "\n")

    def triangle_count(self):
        return sum(len(idx) - 2 for _, idx in self.faces)


def grid(mesh, origin, du, dv, nu, nv, normal, materials=None):
    """nu x nv quads spanning origin + [0,nu]*du + [0,nv]*dv."""
    for j in range(nv):
        for i in range(nu):
            p = [origin[k] + i * du[k] + j * dv[k] for k in range(3)]
            q = [p[k] + du[k] for k in range(3)]
            r = [q[k] + dv[k] for k in range(3)]
            s = [p[k] + dv[k] for k in range(3)]
            mat = materials[(i + j) % len(materials)] if materials else None
            mesh.quad(p, q, r, s, normal, mat)


def box(mesh, center, size, segments=1):
    """Axis-aligned box, the x extent split into `segments` slabs."""
    cx, cy, cz = center
    sx, sy, sz = (s / 2 for s in size)
    for k in range(segments):
        x0 = cx - sx + 2 * sx * k / segments
        x1 = cx - sx + 2 * sx * (k + 1) / segments
        mesh.quad([x0, cy - sy, cz + sz], [x1, cy - sy, cz + sz], [x1, cy + sy, cz + sz], [x0, cy + sy, cz + sz], [0, 0, 1])
        mesh.quad([x1, cy - sy, cz - sz], [x0, cy - sy, cz - sz], [x0, cy + sy, cz - sz], [x1, cy + sy, cz - sz], [0, 0, -1])
        mesh.quad([x0, cy + sy, cz + sz], [x1, cy + sy, cz + sz], [x1, cy + sy, cz - sz], [x0, cy + sy, cz - sz], [0, 1, 0])
        mesh.quad([x0, cy - sy, cz - sz], [x1, cy - sy, cz - sz], [x1, cy - sy, cz + sz], [x0, cy - sy, cz + sz], [0, -1, 0])
    mesh.quad([cx - sx, cy - sy, cz - sz], [cx - sx, cy - sy, cz + sz], [cx - sx, cy + sy, cz + sz], [cx - sx, cy + sy, cz - sz], [-1, 0, 0])
    mesh.quad([cx + sx, cy - sy, cz + sz], [cx + sx, cy - sy, cz - sz], [cx + sx, cy + sy, cz - sz], [cx + sx, cy + sy, cz + sz], [1, 0, 0])


def yaw(deg):
    h = math.radians(deg) / 2
    return [math.cos(h), 0.0, math.sin(h), 0.0]


def save(out, name, manifest, meshes):
    for mesh_name, mesh in meshes.items():
        mesh.write(out / mesh_name)
    manifest["triangle_count"] = sum(m.triangle_count() for m in meshes.values())
    (out / (name + ".json")).write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest["triangle_count"]


def bar_scene(out):
    ground, backdrop, bar, props = Mesh(), Mesh(), Mesh(), Mesh()
    grid(ground, [-8, -1, 0], [1, 0, 0], [0, 0, -1], 16, 16, [0, 1, 0], ["tile_a", "tile_b"])
    grid(backdrop, [-8, -1, -16], [1, 0, 0], [0, 1, 0], 16, 8, [0, 0, 1], ["wall_a", "wall_b"])
    box(bar, [0, 0, 0], [3.0, 0.3, 0.3], segments=8)
    for k, x in enumerate([-5, -2.5, 2.5, 5]):
        box(props, [x, -0.5, -9 - (k % 2) * 2], [1.0, 1.0, 1.0], segments=2)
    manifest = {
        "camera": {
            "fov_y_deg": 60,
            "near": 0.05,
            "start": {"translation": [0, 0.5, 2], "rotation": yaw(6)},
            "end": {"translation": [0, 0.5, 2], "rotation": yaw(-6)},
        },
        "light": {"start": [2, 6, 2], "end": [2, 6, 2], "ambient": 0.2},
        "clear_color": [0.35, 0.45, 0.6],
        "scan": [1, 0],
        "foveation": {"fovea": [0, 0], "alpha": 2},
        "materials": [
            {"name": "tile_a", "albedo": [0.75, 0.75, 0.7]},
            {"name": "tile_b", "albedo": [0.3, 0.3, 0.32]},
            {"name": "wall_a", "albedo": [0.6, 0.4, 0.3]},
            {"name": "wall_b", "albedo": [0.5, 0.3, 0.25]},
            {"name": "bar", "albedo": [0.8, 0.1, 0.1], "ks": 0.4, "shininess": 40},
            {"name": "prop", "albedo": [0.2, 0.5, 0.8]},
        ],
        "objects": [
            {"mesh": "bar_ground.obj"},
            {"mesh": "bar_backdrop.obj"},
            {"mesh": "bar_props.obj", "material": "prop"},
            {
                "mesh": "bar_bar.obj",
                "material": "bar",
                "start": {"translation": [-1.5, 0.2, -5]},
                "end": {"translation": [1.5, 1.2, -5], "rotation": [0.9961947, 0, 0, 0.0871557]},
            },
        ],
    }
    return save(out, "bar", manifest, {"bar_ground.obj": ground, "bar_backdrop.obj": backdrop,
                                       "bar_bar.obj": bar, "bar_props.obj": props})


def fence_scene(out):
    ground, fence = Mesh(), Mesh()
    grid(ground, [-10, -1, 2], [2, 0, 0], [0, 0, -2], 10, 10, [0, 1, 0], ["grass_a", "grass_b"])
    for k in range(24):
        x = -9 + 0.75 * k
        fence.quad([x, -1, -4], [x + 0.25, -1, -4], [x + 0.25, 1.6, -4], [x, 1.6, -4], [0, 0, 1], "picket")
    for y in (-0.4, 1.1):
        fence.quad([-9.5, y, -3.9], [9.5, y, -3.9], [9.5, y + 0.12, -3.9], [-9.5, y + 0.12, -3.9], [0, 0, 1], "rail")
    manifest = {
        "camera": {
            "fov_y_deg": 60,
            "near": 0.05,
            "start": {"translation": [-0.8, 0.3, 0], "rotation": yaw(4)},
            "end": {"translation": [0.8, 0.3, 0], "rotation": yaw(-4)},
        },
        "light": {"start": [-3, 5, 3], "end": [-3, 5, 3], "ambient": 0.25},
        "clear_color": [0.55, 0.7, 0.9],
        "scan": [1, 0],
        "foveation": {"fovea": [0.1, 0.05], "alpha": 2},
        "materials": [
            {"name": "grass_a", "albedo": [0.2, 0.5, 0.15]},
            {"name": "grass_b", "albedo": [0.25, 0.55, 0.2]},
            {"name": "picket", "albedo": [0.9, 0.88, 0.8]},
            {"name": "rail", "albedo": [0.5, 0.35, 0.2]},
        ],
        "objects": [{"mesh": "fence_ground.obj"}, {"mesh": "fence_fence.obj"}],
    }
    return save(out, "fence", manifest, {"fence_ground.obj": ground, "fence_fence.obj": fence})


def checker_scene(out):
    plane = Mesh()
    n = 48
    size = 0.25
    grid(plane, [-n * size / 2, -1, 1], [size, 0, 0], [0, 0, -size], n, n, [0, 1, 0], ["black", "white"])
    manifest = {
        "camera": {
            "fov_y_deg": 50,
            "near": 0.05,
            "start": {"eye": [0, 1.2, 2.0], "target": [0, -1, -4.5]},
            "end": {"eye": [0.15, 1.2, 2.0], "target": [0.15, -1, -4.5]},
        },
        "light": {"start": [0, 5, 0], "end": [0, 5, 0], "ambient": 0.3},
        "clear_color": [0.5, 0.5, 0.5],
        "scan": [1, 0],
        "foveation": {"fovea": [0, 0], "alpha": 2},
        "materials": [
            {"name": "black", "albedo": [0.05, 0.05, 0.05]},
            {"name": "white", "albedo": [0.95, 0.95, 0.95]},
        ],
        "objects": [{"mesh": "checker_plane.obj"}],
    }
    return save(out, "checker", manifest, {"checker_plane.obj": plane})


def glossy_scene(out):
    wall = Mesh()
    grid(wall, [-3, -3, -3], [0.5, 0, 0], [0, 0.5, 0], 12, 12, [0, 0, 1])
    manifest = {
        "camera": {
            "fov_y_deg": 60,
            "near": 0.05,
            "start": {"translation": [0, -0.3, 0]},
            "end": {"translation": [0, 0.3, 0]},
        },
        "light": {"start": [0.4, 0, 0.5], "end": [0.4, 0, 0.5], "ambient": 0.05},
        "clear_color": [0, 0, 0],
        "scan": [1, 0],
        "materials": [{"name": "gloss", "albedo": [0.6, 0.6, 0.65], "kd": 0.0, "ks": 1.0, "shininess": 30}],
        "objects": [{"mesh": "glossy_wall.obj", "material": "gloss"}],
    }
    return save(out, "glossy", manifest, {"glossy_wall.obj": wall})


def minimal_scene(out):
    tri = Mesh()
    tri.v = [[-0.5, -0.5, -2], [0.5, -0.5, -2], [0, 0.5, -2]]
    tri.faces = [(None, [(1, 0), (2, 0), (3, 0)])]
    lines = ["v %g %g %g" % tuple(p) for p in tri.v] + ["f 1 2 3"]
    (out / "triangle.obj").write_text("\n".join(lines) + "\n")
    manifest = {
        "camera": {"fov_y_deg": 60, "near": 0.05, "start": {"translation": [0, 0, 0]}},
        "materials": [{"name": "white", "albedo": [1, 1, 1]}],
        "objects": [{"mesh": "triangle.obj", "material": "white"}],
        "triangle_count": 1,
    }
    (out / "triangle.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return 1


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "scenes")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name, fn in [("bar", bar_scene), ("fence", fence_scene), ("checker", checker_scene),
                     ("glossy", glossy_scene), ("triangle", minimal_scene)]:
        print("%-8s %5d triangles" % (name, fn(args.out)))


if __name__ == "__main__":
    main()
