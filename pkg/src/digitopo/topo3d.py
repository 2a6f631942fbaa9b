"""Genus and homology of voxel objects via surface point classification.

The boundary of a voxel set is examined on the dual vertex grid: a grid
vertex is a surface point when the up-to-eight voxels incident to it
include both object and background. Two surface points are surface
neighbors when the grid edge between them is a surface edge, i.e. the
up-to-four voxels incident to that edge again include both object and
background.

On a well-composed object every surface point has 3 to 6 surface
neighbors, and counting the points of each kind determines the genus of
each closed boundary surface:

    g = 1 + (m5 + 2*m6 - m3) / 8

Well-composedness can fail in exactly three local patterns: two object
voxels sharing only a grid vertex, two sharing only a grid edge, and the
complement form of the vertex case (six object voxels around a vertex with
the two remaining antipodal voxels empty). ``repair_3d`` removes all three
by local edits before any surface is classified.

Homology of a connected voxel object follows from its boundary surfaces:
b0 = 1, b1 is the total genus over all boundary surfaces, b2 is the number
of boundary surfaces minus one (cavities), and b3 = 0.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import ndimage, sparse
from scipy.sparse import csgraph

from .errors import InvalidSurfaceError, RepairDidNotConverge
from .grid import Adjacency, Volume3D, label_components_3d, _component_canvas
from .oracle import _surface_components
from .topo2d import RepairAction, RepairOp, RepairReason

__all__ = [
    "Pathology3DKind",
    "Pathology3D",
    "SurfacePointSet",
    "SurfaceHistogram",
    "SurfaceReport",
    "TopoReport3D",
    "find_pathologies_3d",
    "repair_3d",
    "boundary_voxels",
    "to_point_space",
    "surface_neighbors",
    "split_surface_components",
    "classify_surface",
    "genus",
    "homology",
    "analyze_volume",
]


class Pathology3DKind(Enum):
    """The three local patterns that break well-composedness."""

    VERTEX_PAIR = "vertex-pair"
    EDGE_PAIR = "edge-pair"
    COMPLEMENT_VERTEX_PAIR = "complement-vertex-pair"


@dataclass(frozen=True)
class Pathology3D:
    """A pathological window anchored at its minimum (x, y, z) voxel.

    ``pair`` holds the two decisive voxels: the object pair for the vertex
    and edge kinds, the empty antipodal pair for the complement kind.
    ``axis`` is the direction of the shared edge for EDGE_PAIR windows.
    """

    x: int
    y: int
    z: int
    kind: Pathology3DKind
    pair: tuple[tuple[int, int, int], tuple[int, int, int]]
    axis: int | None = None


@dataclass(frozen=True)
class SurfaceHistogram:
    """Surface point counts by number of surface neighbors.

    ``irregular`` counts points with fewer than 3 neighbors, which occur
    only on objects that are not well-composed. More than 6 is impossible:
    a vertex has only six incident grid edges.
    """

    m3: int
    m4: int
    m5: int
    m6: int
    irregular: int = 0

    @property
    def total(self) -> int:
        return self.m3 + self.m4 + self.m5 + self.m6 + self.irregular


class SurfacePointSet:
    """Surface points of a volume on the dual vertex grid.

    ``mask`` is a boolean array over the (nx+1, ny+1, nz+1) vertex grid,
    indexed ``mask[vz, vy, vx]``. ``points`` materializes the vertex set as
    (x, y, z) tuples.
    """

    __slots__ = ("mask", "owner", "_edges", "_counts")

    def __init__(self, mask: np.ndarray, owner: Volume3D, edges=None):
        self.mask = mask
        self.owner = owner
        self._edges = edges
        self._counts = None

    @property
    def points(self) -> set[tuple[int, int, int]]:
        zs, ys, xs = np.nonzero(self.mask)
        return {
            (int(x), int(y), int(z))
            for x, y, z in zip(xs.tolist(), ys.tolist(), zs.tolist())
        }

    def __contains__(self, p) -> bool:
        x, y, z = p
        nz1, ny1, nx1 = self.mask.shape
        if 0 <= x < nx1 and 0 <= y < ny1 and 0 <= z < nz1:
            return bool(self.mask[z, y, x])
        return False

    def __len__(self) -> int:
        return int(self.mask.sum())

    def __repr__(self) -> str:
        return f"SurfacePointSet({len(self)} points)"


@dataclass(frozen=True)
class SurfaceReport:
    """Classification result for one closed boundary surface."""

    points: int
    histogram: SurfaceHistogram
    genus: int
    euler_characteristic: int
    method: str  # "formula" or "euler-oracle"


@dataclass(frozen=True)
class TopoReport3D:
    """Topological summary of one connected voxel component."""

    component_id: int
    voxel_count: int
    boundary_surfaces: tuple[SurfaceReport, ...]
    betti: tuple[int, int, int, int]
    repair_actions: tuple[RepairAction, ...] = ()


# ---------------------------------------------------------------------------
# pathology detection


_ANTIPODAL = (
    ((0, 0, 0), (1, 1, 1)),
    ((1, 0, 0), (0, 1, 1)),
    ((0, 1, 0), (1, 0, 1)),
    ((0, 0, 1), (1, 1, 0)),
)


def _octant_slices(c: np.ndarray):
    """The eight shifted views of all 2x2x2 windows, keyed by (dx, dy, dz)."""
    nz, ny, nx = c.shape
    out = {}
    for dz in (0, 1):
        for dy in (0, 1):
            for dx in (0, 1):
                out[(dx, dy, dz)] = c[
                    dz : nz - 1 + dz, dy : ny - 1 + dy, dx : nx - 1 + dx
                ]
    return out


def find_pathologies_3d(vol: Volume3D) -> list[Pathology3D]:
    """All pathological windows, ordered by anchor in scan order.

    Windows overhanging the border cannot match any of the three patterns
    (each needs object voxels, or six object voxels, inside the window), so
    only interior windows are scanned.
    """
    c = vol.cells
    nz, ny, nx = c.shape
    found: list[tuple] = []

    if nx >= 2 and ny >= 2 and nz >= 2:
        s = _octant_slices(c)
        total = np.zeros(next(iter(s.values())).shape, dtype=np.int8)
        for part in s.values():
            total += part
        for a, b in _ANTIPODAL:
            vp = s[a] & s[b] & (total == 2)
            cp = ~s[a] & ~s[b] & (total == 6)
            for mask, kind in ((vp, Pathology3DKind.VERTEX_PAIR),
                               (cp, Pathology3DKind.COMPLEMENT_VERTEX_PAIR)):
                zs, ys, xs = np.nonzero(mask)
                for z, y, x in zip(zs.tolist(), ys.tolist(), xs.tolist()):
                    pair = (
                        (x + a[0], y + a[1], z + a[2]),
                        (x + b[0], y + b[1], z + b[2]),
                    )
                    found.append((z, y, x, kind, pair, None))

    # Edge windows: a 2x2 block of voxels in the plane perpendicular to the
    # edge axis, with exactly the two diagonal voxels object.
    def edge_windows(a, b, d, e, axis, mk_pair):
        main = a & e & ~b & ~d
        anti = b & d & ~a & ~e
        for mask, which in ((main, 0), (anti, 1)):
            zs, ys, xs = np.nonzero(mask)
            for z, y, x in zip(zs.tolist(), ys.tolist(), xs.tolist()):
                pair = mk_pair(x, y, z, which)
                found.append((z, y, x, Pathology3DKind.EDGE_PAIR, pair, axis))

    if ny >= 2 and nz >= 2:  # edges along x
        edge_windows(
            c[:-1, :-1, :], c[:-1, 1:, :], c[1:, :-1, :], c[1:, 1:, :], 0,
            lambda x, y, z, w: ((x, y, z), (x, y + 1, z + 1)) if w == 0
            else ((x, y + 1, z), (x, y, z + 1)),
        )
    if nx >= 2 and nz >= 2:  # edges along y
        edge_windows(
            c[:-1, :, :-1], c[:-1, :, 1:], c[1:, :, :-1], c[1:, :, 1:], 1,
            lambda x, y, z, w: ((x, y, z), (x + 1, y, z + 1)) if w == 0
            else ((x + 1, y, z), (x, y, z + 1)),
        )
    if nx >= 2 and ny >= 2:  # edges along z
        edge_windows(
            c[:, :-1, :-1], c[:, :-1, 1:], c[:, 1:, :-1], c[:, 1:, 1:], 2,
            lambda x, y, z, w: ((x, y, z), (x + 1, y + 1, z)) if w == 0
            else ((x + 1, y, z), (x, y + 1, z)),
        )

    rank = {
        Pathology3DKind.VERTEX_PAIR: 0,
        Pathology3DKind.EDGE_PAIR: 1,
        Pathology3DKind.COMPLEMENT_VERTEX_PAIR: 2,
    }
    found.sort(key=lambda t: (t[0], t[1], t[2], rank[t[3]], t[5] if t[5] is not None else -1))
    return [Pathology3D(x, y, z, kind, pair, axis) for z, y, x, kind, pair, axis in found]


# ---------------------------------------------------------------------------
# repair


def _vget(cells: np.ndarray, x: int, y: int, z: int) -> bool:
    nz, ny, nx = cells.shape
    if 0 <= x < nx and 0 <= y < ny and 0 <= z < nz:
        return bool(cells[z, y, x])
    return False


def _object_degree(cells: np.ndarray, p: tuple[int, int, int]) -> int:
    x, y, z = p
    return sum(
        _vget(cells, x + dx, y + dy, z + dz)
        for dx, dy, dz in (
            (1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1),
        )
    )


def _flat(cells: np.ndarray, p: tuple[int, int, int]) -> int:
    nz, ny, nx = cells.shape
    x, y, z = p
    return (z * ny + y) * nx + x


def _matches_3d(cells: np.ndarray, p: Pathology3D) -> bool:
    if p.kind is Pathology3DKind.EDGE_PAIR:
        lo = (p.x, p.y, p.z)
        offs = {0: ((0, 1, 0), (0, 0, 1), (0, 1, 1)),
                1: ((1, 0, 0), (0, 0, 1), (1, 0, 1)),
                2: ((1, 0, 0), (0, 1, 0), (1, 1, 0))}[p.axis]
        window = [lo] + [(lo[0] + o[0], lo[1] + o[1], lo[2] + o[2]) for o in offs]
        pair = set(p.pair)
        return all(
            _vget(cells, *cell) == (cell in pair) for cell in window
        )
    count = 0
    for dz in (0, 1):
        for dy in (0, 1):
            for dx in (0, 1):
                count += _vget(cells, p.x + dx, p.y + dy, p.z + dz)
    a, b = p.pair
    if p.kind is Pathology3DKind.VERTEX_PAIR:
        return count == 2 and _vget(cells, *a) and _vget(cells, *b)
    return count == 6 and not _vget(cells, *a) and not _vget(cells, *b)


def _fix_3d(cells: np.ndarray, p: Pathology3D) -> RepairAction:
    a, b = p.pair
    da, db = _object_degree(cells, a), _object_degree(cells, b)
    if p.kind is Pathology3DKind.COMPLEMENT_VERTEX_PAIR:
        # Fill the empty position that shares the most faces with the set;
        # ties go to the scan-first position.
        if (db, -_flat(cells, b)) > (da, -_flat(cells, a)):
            target = b
        else:
            target = a
        cells[target[2], target[1], target[0]] = True
        return RepairAction(
            target[0], target[1], RepairOp.ADD, RepairReason.PATHOLOGY, z=target[2]
        )
    # Delete the less connected voxel of the pair; ties delete the
    # scan-later one.
    if (da, -_flat(cells, a)) < (db, -_flat(cells, b)):
        target = a
    else:
        target = b
    cells[target[2], target[1], target[0]] = False
    return RepairAction(
        target[0], target[1], RepairOp.DELETE, RepairReason.PATHOLOGY, z=target[2]
    )


def repair_3d(vol: Volume3D) -> tuple[Volume3D, list[RepairAction]]:
    """Edit the volume until no pathological window remains.

    Each scan applies fills for complement windows first, then deletions
    for vertex and edge pairs, re-verifying each window before acting since
    earlier edits may have resolved it. Scans repeat until clean, with a
    hard cap of 4 * nx * ny * nz total actions.

    The greedy rules can oscillate: a fill may complete a pair whose
    deletion restores the filled voxel. The loop is deterministic, so a
    repeated grid state proves the cap will be exceeded; it is reported
    immediately instead of grinding out the remaining actions.
    """
    cells = vol.cells.copy()
    actions: list[RepairAction] = []
    cap = 4 * vol.nx * vol.ny * vol.nz
    seen_states: set[bytes] = set()
    while True:
        found = find_pathologies_3d(Volume3D(vol.nx, vol.ny, vol.nz, cells))
        if not found:
            break
        digest = hashlib.blake2b(cells.tobytes(), digest_size=16).digest()
        if digest in seen_states:
            raise RepairDidNotConverge("repair did not converge")
        seen_states.add(digest)
        ordered = [p for p in found if p.kind is Pathology3DKind.COMPLEMENT_VERTEX_PAIR]
        ordered += [p for p in found if p.kind is not Pathology3DKind.COMPLEMENT_VERTEX_PAIR]
        for p in ordered:
            if not _matches_3d(cells, p):
                continue
            if len(actions) >= cap:
                raise RepairDidNotConverge("repair did not converge")
            actions.append(_fix_3d(cells, p))
    return Volume3D(vol.nx, vol.ny, vol.nz, cells), actions


# ---------------------------------------------------------------------------
# surface extraction and classification


def boundary_voxels(vol: Volume3D) -> set[tuple[int, int, int]]:
    """Object voxels with a background voxel among their 26 neighbors."""
    mask = _boundary_mask_3d(vol.cells)
    zs, ys, xs = np.nonzero(mask)
    return {
        (int(x), int(y), int(z))
        for x, y, z in zip(xs.tolist(), ys.tolist(), zs.tolist())
    }


def _boundary_mask_3d(cells: np.ndarray) -> np.ndarray:
    p = np.pad(cells, 1, constant_values=False)
    interior = ndimage.binary_erosion(p, structure=np.ones((3, 3, 3), dtype=bool))
    return cells & ~interior[1:-1, 1:-1, 1:-1]


def _surface_edge_arrays(cells: np.ndarray):
    """Surface edge masks for the three edge directions.

    ``ex[vz, vy, vx]`` marks the edge from vertex (vx, vy, vz) toward +x as
    a surface edge: the up-to-four voxels incident to it include both
    object and background. Analogous for ey and ez.
    """
    p = np.pad(cells, 1, constant_values=False)
    qx = p[:, :, 1:-1]
    ex_any = qx[:-1, :-1] | qx[:-1, 1:] | qx[1:, :-1] | qx[1:, 1:]
    ex_all = qx[:-1, :-1] & qx[:-1, 1:] & qx[1:, :-1] & qx[1:, 1:]
    qy = p[:, 1:-1, :]
    ey_any = qy[:-1, :, :-1] | qy[:-1, :, 1:] | qy[1:, :, :-1] | qy[1:, :, 1:]
    ey_all = qy[:-1, :, :-1] & qy[:-1, :, 1:] & qy[1:, :, :-1] & qy[1:, :, 1:]
    qz = p[1:-1, :, :]
    ez_any = qz[:, :-1, :-1] | qz[:, :-1, 1:] | qz[:, 1:, :-1] | qz[:, 1:, 1:]
    ez_all = qz[:, :-1, :-1] & qz[:, :-1, 1:] & qz[:, 1:, :-1] & qz[:, 1:, 1:]
    return ex_any & ~ex_all, ey_any & ~ey_all, ez_any & ~ez_all


def _surface_point_mask(cells: np.ndarray) -> np.ndarray:
    p = np.pad(cells, 1, constant_values=False)
    nz, ny, nx = cells.shape
    any8 = None
    all8 = None
    for dz in (0, 1):
        for dy in (0, 1):
            for dx in (0, 1):
                part = p[dz : dz + nz + 1, dy : dy + ny + 1, dx : dx + nx + 1]
                any8 = part if any8 is None else any8 | part
                all8 = part if all8 is None else all8 & part
    return any8 & ~all8


def _neighbor_counts(edges, vshape) -> np.ndarray:
    ex, ey, ez = edges
    n = np.zeros(vshape, dtype=np.int8)
    n[:, :, :-1] += ex
    n[:, :, 1:] += ex
    n[:, :-1, :] += ey
    n[:, 1:, :] += ey
    n[:-1, :, :] += ez
    n[1:, :, :] += ez
    return n


def to_point_space(vol: Volume3D) -> SurfacePointSet:
    """All surface points of a volume on the dual vertex grid."""
    mask = _surface_point_mask(vol.cells)
    return SurfacePointSet(mask, vol, edges=_surface_edge_arrays(vol.cells))


def _edges_of(s: SurfacePointSet):
    if s._edges is None:
        s._edges = _surface_edge_arrays(s.owner.cells)
    return s._edges


def _counts_of(s: SurfacePointSet) -> np.ndarray:
    if s._counts is None:
        s._counts = _neighbor_counts(_edges_of(s), s.mask.shape)
    return s._counts


def surface_neighbors(p: tuple[int, int, int], s: SurfacePointSet) -> int:
    """Number of surface neighbors of one surface point.

    Recomputed directly from voxel occupancy, independently of the
    vectorized classification path.
    """
    if p not in s:
        raise ValueError(f"not a surface point: {p}")
    vol = s.owner
    x, y, z = p
    count = 0
    # Incident voxels of the edge from min-vertex v along each axis.
    for axis, sign in ((0, 1), (0, -1), (1, 1), (1, -1), (2, 1), (2, -1)):
        v = [x, y, z]
        if sign < 0:
            v[axis] -= 1
        vx, vy, vz = v
        if axis == 0:
            voxels = [(vx, vy - 1, vz - 1), (vx, vy, vz - 1), (vx, vy - 1, vz), (vx, vy, vz)]
        elif axis == 1:
            voxels = [(vx - 1, vy, vz - 1), (vx, vy, vz - 1), (vx - 1, vy, vz), (vx, vy, vz)]
        else:
            voxels = [(vx - 1, vy - 1, vz), (vx, vy - 1, vz), (vx - 1, vy, vz), (vx, vy, vz)]
        vals = [vol.get(*q) for q in voxels]
        if any(vals) and not all(vals):
            count += 1
    return count


def split_surface_components(s: SurfacePointSet) -> list[SurfacePointSet]:
    """Partition surface points by surface-edge connectivity.

    Components are ordered by their minimal vertex in scan order. Both
    endpoints of a surface edge are always surface points, so the edge
    relation never leaves the point set.
    """
    mask = s.mask
    vshape = mask.shape
    node_ids = np.flatnonzero(mask)
    if node_ids.size == 0:
        return []
    ex, ey, ez = _edges_of(s)
    rows = []
    cols = []
    for arr, axis in ((ex, 2), (ey, 1), (ez, 0)):
        idx = np.nonzero(arr)
        if idx[0].size == 0:
            continue
        a = np.ravel_multi_index(idx, vshape)
        step = [0, 0, 0]
        step[axis] = 1
        b = np.ravel_multi_index(
            (idx[0] + step[0], idx[1] + step[1], idx[2] + step[2]), vshape
        )
        rows.append(a)
        cols.append(b)
    n = node_ids.size
    if rows:
        a = np.searchsorted(node_ids, np.concatenate(rows))
        b = np.searchsorted(node_ids, np.concatenate(cols))
        graph = sparse.coo_matrix(
            (np.ones(a.size, dtype=np.int8), (a, b)), shape=(n, n)
        ).tocsr()
    else:
        graph = sparse.csr_matrix((n, n), dtype=np.int8)
    count, labels = csgraph.connected_components(graph, directed=False)
    out = []
    counts = _counts_of(s)
    for comp in range(count):
        members = node_ids[labels == comp]
        m = np.zeros(vshape, dtype=bool)
        m.ravel()[members] = True
        # node_ids is ascending, so members.min() is the minimal vertex in
        # scan order.
        out.append((int(members.min()), m))
    out.sort(key=lambda t: t[0])
    result = []
    for _, m in out:
        part = SurfacePointSet(m, s.owner, edges=s._edges)
        part._counts = counts
        result.append(part)
    return result


def classify_surface(s: SurfacePointSet) -> SurfaceHistogram:
    """Histogram of surface neighbor counts over one point set."""
    counts = _counts_of(s)
    hist = np.bincount(counts[s.mask], minlength=7)
    return SurfaceHistogram(
        m3=int(hist[3]),
        m4=int(hist[4]),
        m5=int(hist[5]),
        m6=int(hist[6]),
        irregular=int(hist[0] + hist[1] + hist[2]),
    )


def genus(hist: SurfaceHistogram) -> int:
    """Genus of a closed digital surface from its point histogram.

    Valid surfaces have no irregular points and a numerator divisible
    by 8; anything else is rejected.
    """
    if hist.irregular:
        raise InvalidSurfaceError("not a valid digital surface")
    num = hist.m5 + 2 * hist.m6 - hist.m3
    if num % 8 != 0:
        raise InvalidSurfaceError("not a valid digital surface")
    g = 1 + num // 8
    if g < 0:
        raise InvalidSurfaceError("not a valid digital surface")
    return g


def homology(
    vol: Volume3D,
    fallback_oracle: bool = True,
    component_id: int = 1,
    repair_actions: tuple[RepairAction, ...] = (),
) -> TopoReport3D:
    """Betti numbers of one connected, repaired voxel component.

    When any boundary surface fails to classify (irregular points or a
    non-divisible histogram, both signs of a non-well-composed input) and
    the oracle fallback is enabled, all surfaces are recomputed from the
    boundary-face Euler characteristic instead.
    """
    if not vol.cells.any():
        raise ValueError("empty volume")
    pts = to_point_space(vol)
    comps = split_surface_components(pts)
    surfaces: list[SurfaceReport] = []
    failed = False
    for comp in comps:
        hist = classify_surface(comp)
        try:
            g = genus(hist)
        except InvalidSurfaceError:
            failed = True
            break
        surfaces.append(
            SurfaceReport(len(comp), hist, g, 2 - 2 * g, "formula")
        )
    if failed:
        if not fallback_oracle:
            raise InvalidSurfaceError("not a valid digital surface")
        surfaces = []
        counts = _counts_of(pts)
        for summary, verts in _surface_components(vol):
            if summary.chi % 2 != 0:
                raise InvalidSurfaceError("non-orientable or non-manifold boundary")
            g = (2 - summary.chi) // 2
            m = np.zeros(pts.mask.shape, dtype=bool)
            for vx, vy, vz in verts:
                m[vz, vy, vx] = True
            hist = np.bincount(counts[m], minlength=7)
            surfaces.append(
                SurfaceReport(
                    summary.v,
                    SurfaceHistogram(
                        m3=int(hist[3]),
                        m4=int(hist[4]),
                        m5=int(hist[5]),
                        m6=int(hist[6]),
                        irregular=int(hist[0] + hist[1] + hist[2]),
                    ),
                    g,
                    summary.chi,
                    "euler-oracle",
                )
            )
    b1 = sum(s.genus for s in surfaces)
    betti = (1, b1, len(surfaces) - 1, 0)
    return TopoReport3D(
        component_id,
        vol.voxel_count,
        tuple(surfaces),
        betti,
        tuple(repair_actions),
    )


def _shift_actions_3d(actions, origin) -> list[RepairAction]:
    ox, oy, oz = origin
    return [
        RepairAction(a.x + ox, a.y + oy, a.op, a.reason, a.z + oz) for a in actions
    ]


def analyze_volume(
    vol: Volume3D,
    repair: bool = True,
    fallback_oracle: bool = True,
) -> tuple[list[TopoReport3D], list[RepairAction]]:
    """Full pipeline: capture components, repair, then report homology.

    Components are captured with indirect (26-) adjacency, repaired on
    their own canvases, then relabeled with direct (6-) adjacency; each
    resulting component gets one report. Edit coordinates are mapped back
    to the source volume.
    """
    lab26 = label_components_3d(vol, Adjacency.INDIRECT_3D)
    reports: list[TopoReport3D] = []
    all_actions: list[RepairAction] = []
    next_id = 1
    for cid in range(1, lab26.count + 1):
        canvas, origin = _component_canvas(lab26, cid)
        shifted: list[RepairAction] = []
        if repair:
            canvas, acts = repair_3d(canvas)
            shifted = _shift_actions_3d(acts, origin)
            all_actions.extend(shifted)
        if not canvas.cells.any():
            continue
        lab6 = label_components_3d(canvas, Adjacency.DIRECT_3D)
        for sid in range(1, lab6.count + 1):
            piece, _ = _component_canvas(lab6, sid)
            reports.append(
                homology(
                    piece,
                    fallback_oracle=fallback_oracle,
                    component_id=next_id,
                    repair_actions=tuple(shifted),
                )
            )
            next_id += 1
    return reports, all_actions
