"""Wavefront OBJ export of crooked-plane meshes."""

from __future__ import annotations

import io

from .oracle import TriangleMesh

PIECE_GROUPS = ("stem", "wing_plus", "wing_minus")


def obj_text(mesh: TriangleMesh, name: str) -> str:
    """One object, vertices at 17 significant digits, one group per piece."""
    out = io.StringIO()
    out.write(f"o {name}\n")
    for x, y, z in mesh.vertices:
        out.write(f"v {x:.17g} {y:.17g} {z:.17g}\n")
    for group in PIECE_GROUPS:
        idx = [i for i, tag in enumerate(mesh.tags) if tag == group]
        if not idx:
            continue
        out.write(f"g {group}\n")
        for i in idx:
            a, b, c = mesh.triangles[i] + 1
            out.write(f"f {a} {b} {c}\n")
    return out.getvalue()


def read_obj_vertices(text: str):
    """Vertex coordinates of an OBJ file, as a list of float triples."""
    return [tuple(float(x) for x in line.split()[1:4]) for line in text.splitlines() if line.startswith("v ")]
