"""Brute-force reference computations used to cross-check the formulas.

These are deliberately independent of the classification code paths: hole
counts come from background flood fill, Euler characteristics from explicit
cell counting on the cubical complex, and the curvature audit from the
integer curvature totals. Everything here is exact integer arithmetic.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import InvalidSurfaceError
from .grid import Adjacency, Image2D, Volume3D, label_background_2d

__all__ = [
    "CellComplexSummary",
    "holes_by_floodfill",
    "euler_2d",
    "euler_surface_3d",
    "curvature_audit",
]


@dataclass(frozen=True)
class CellComplexSummary:
    """Cell counts of a complex: vertices, edges, faces."""

    v: int
    e: int
    f: int

    @property
    def chi(self) -> int:
        return self.v - self.e + self.f


def holes_by_floodfill(component: Image2D) -> int:
    """Hole count of a connected image: bounded background components.

    Counts 4-connected background components and subtracts the outer
    region, which is always present.
    """
    return label_background_2d(component, Adjacency.DIRECT_2D).count - 1


def euler_2d(component: Image2D) -> CellComplexSummary:
    """Cell counts of the cubical complex covered by the pixels.

    Faces are the pixels themselves; edges and vertices are the distinct
    unit edges and corners they cover. For a connected image the hole count
    equals ``1 - chi``.
    """
    c = component.cells
    p = np.pad(c, 1, constant_values=False)
    f = int(c.sum())
    # Horizontal unit edges sit between vertically adjacent pixel rows.
    ex = int((p[:-1, 1:-1] | p[1:, 1:-1]).sum())
    # Vertical unit edges sit between horizontally adjacent pixel columns.
    ey = int((p[1:-1, :-1] | p[1:-1, 1:]).sum())
    v = int((p[:-1, :-1] | p[:-1, 1:] | p[1:, :-1] | p[1:, 1:]).sum())
    return CellComplexSummary(v, ex + ey, f)


def _boundary_faces(vol: Volume3D):
    """Unit squares separating an object voxel from a background voxel.

    Returns three boolean arrays, one per face normal. ``fz[k, y, x]`` is
    the face between voxels (x, y, k-1) and (x, y, k); analogously for fy
    and fx.
    """
    p = np.pad(vol.cells, 1, constant_values=False)
    fz = p[:-1, 1:-1, 1:-1] ^ p[1:, 1:-1, 1:-1]
    fy = p[1:-1, :-1, 1:-1] ^ p[1:-1, 1:, 1:-1]
    fx = p[1:-1, 1:-1, :-1] ^ p[1:-1, 1:-1, 1:]
    return fx, fy, fz


def _face_edges(face):
    """The four edge keys of a boundary face.

    Edge keys are (axis, vx, vy, vz): the unit edge from vertex (vx, vy, vz)
    toward +axis. Face keys are (normal, x, y, z) where (x, y, z) is the
    face's minimum vertex.
    """
    normal, x, y, z = face
    if normal == 2:  # spans x and y
        return (
            (0, x, y, z),
            (0, x, y + 1, z),
            (1, x, y, z),
            (1, x + 1, y, z),
        )
    if normal == 1:  # spans x and z
        return (
            (0, x, y, z),
            (0, x, y, z + 1),
            (2, x, y, z),
            (2, x + 1, y, z),
        )
    # normal == 0: spans y and z
    return (
        (1, x, y, z),
        (1, x, y, z + 1),
        (2, x, y, z),
        (2, x, y + 1, z),
    )


def _face_vertices(face):
    normal, x, y, z = face
    if normal == 2:
        span = ((0, 0), (1, 0), (0, 1), (1, 1))
        return tuple((x + dx, y + dy, z) for dx, dy in span)
    if normal == 1:
        span = ((0, 0), (1, 0), (0, 1), (1, 1))
        return tuple((x + dx, y, z + dz) for dx, dz in span)
    span = ((0, 0), (1, 0), (0, 1), (1, 1))
    return tuple((x, y + dy, z + dz) for dy, dz in span)


def _surface_components(vol: Volume3D):
    """Group boundary faces into surfaces by shared-edge connectivity.

    Returns a list of (CellComplexSummary, vertex set) ordered by each
    component's minimal vertex in scan order.
    """
    fx, fy, fz = _boundary_faces(vol)
    faces = []
    for normal, arr in ((0, fx), (1, fy), (2, fz)):
        idx = np.nonzero(arr)
        # nonzero order is (dim0, dim1, dim2); the plane index sits in the
        # dimension matching the normal: fx -> dim2, fy -> dim1, fz -> dim0.
        for d0, d1, d2 in zip(*(i.tolist() for i in idx)):
            faces.append((normal, d2, d1, d0))
    edge_to_faces: dict[tuple, list[int]] = {}
    for i, face in enumerate(faces):
        for e in _face_edges(face):
            edge_to_faces.setdefault(e, []).append(i)
    seen = [False] * len(faces)
    components = []
    for start in range(len(faces)):
        if seen[start]:
            continue
        seen[start] = True
        queue = deque([start])
        members = []
        while queue:
            i = queue.popleft()
            members.append(i)
            for e in _face_edges(faces[i]):
                for j in edge_to_faces[e]:
                    if not seen[j]:
                        seen[j] = True
                        queue.append(j)
        edges = set()
        verts = set()
        for i in members:
            edges.update(_face_edges(faces[i]))
            verts.update(_face_vertices(faces[i]))
        summary = CellComplexSummary(len(verts), len(edges), len(members))
        components.append((summary, verts))
    nx1, ny1 = vol.nx + 1, vol.ny + 1
    components.sort(key=lambda c: min((v[2] * ny1 + v[1]) * nx1 + v[0] for v in c[1]))
    return components


def euler_surface_3d(vol: Volume3D) -> list[CellComplexSummary]:
    """Cell counts of each boundary surface of a volume.

    Boundary faces are the unit squares between an object voxel and a
    background voxel; faces are grouped into surfaces by shared-edge
    connectivity. For a closed orientable surface the genus is
    ``(2 - chi) / 2``; an odd chi is rejected.
    """
    out = []
    for summary, _ in _surface_components(vol):
        if summary.chi % 2 != 0:
            raise InvalidSurfaceError("non-orientable or non-manifold boundary")
        out.append(summary)
    return out


def curvature_audit(hist, genus: int) -> bool:
    """Check the integer curvature total against the genus.

    Corner-type surface points carry curvature in quarter-turn units:
    +2 for 3-neighbor points, 0 for 4, -2 for 5, -4 for 6. The total over a
    closed surface must equal 8 * (2 - 2g). Accepts any histogram object
    with m3/m5/m6 counts; exact integer arithmetic throughout.
    """
    return 2 * hist.m3 - 2 * hist.m5 - 4 * hist.m6 == 8 * (2 - 2 * genus)
