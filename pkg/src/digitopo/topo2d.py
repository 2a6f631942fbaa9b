"""Hole counting for binary images via boundary corner classification.

A boundary pixel is a foreground pixel with at least one background pixel
among its 8 indirect neighbors. Each boundary pixel is classified by how
many direct (4-) foreground neighbors it has: 2 marks an outward corner,
3 a straight run, 4 an inward corner. For a component whose boundary is a
set of simple closed curves the hole count follows from the corner counts
alone:

    holes = 1 + (cp4 - cp2) / 4

The formula is only trusted when machine-checkable preconditions hold:
no pathological diagonal windows, no stray pixels with fewer than two
direct neighbors, no width-1 (thin) runs, and corner counts whose
difference is divisible by 4. Anything else falls back to the flood-fill
oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import PreconditionFailure, RepairDidNotConverge
from .grid import Adjacency, Image2D, Labeling, label_components_2d, _component_canvas
from .oracle import holes_by_floodfill

__all__ = [
    "Diag2D",
    "Pathology2D",
    "RepairOp",
    "RepairReason",
    "RepairAction",
    "CornerHistogram",
    "PreconditionReport",
    "HoleMethod",
    "HoleReport",
    "remove_speckles",
    "find_pathologies_2d",
    "repair_2d",
    "classify_boundary_2d",
    "check_preconditions_2d",
    "hole_count",
    "holes_pipeline",
]


class Diag2D(Enum):
    """The two pathological 2x2 window patterns.

    MAIN is foreground on the main diagonal ((x,y) and (x+1,y+1)); ANTI is
    foreground on the other diagonal. In both, the remaining two cells are
    background, so the two foreground pixels meet only at a corner point.
    """

    MAIN = "diag-main"
    ANTI = "diag-anti"


@dataclass(frozen=True)
class Pathology2D:
    """A pathological 2x2 window anchored at its minimum (x, y) cell."""

    x: int
    y: int
    kind: Diag2D


class RepairOp(Enum):
    DELETE = "delete"
    ADD = "add"


class RepairReason(Enum):
    SPECKLE = "speckle"
    PATHOLOGY = "pathology-fix"


@dataclass(frozen=True)
class RepairAction:
    """One grid edit. ``z`` is None for image edits."""

    x: int
    y: int
    op: RepairOp
    reason: RepairReason
    z: int | None = None


@dataclass(frozen=True)
class CornerHistogram:
    """Counts of boundary pixels by direct foreground neighbor count.

    ``thin`` counts the cp2 pixels whose two neighbors are collinear
    (left+right or up+down), i.e. pixels on a width-1 run. ``cp0`` counts
    boundary pixels with no direct neighbor at all; it is nonzero only for
    degenerate single-pixel fragments. cp0 + cp1 + cp2 + cp3 + cp4 equals
    the number of boundary pixels.
    """

    cp1: int
    cp2: int
    cp3: int
    cp4: int
    thin: int
    cp0: int = 0

    @property
    def boundary_total(self) -> int:
        return self.cp0 + self.cp1 + self.cp2 + self.cp3 + self.cp4


@dataclass(frozen=True)
class PreconditionReport:
    """Outcome of the formula precondition check with diagnostics.

    ``stray`` lists boundary pixels with fewer than two direct neighbors,
    ``thin`` lists collinear cp2 pixels, and ``divisible`` records whether
    cp4 - cp2 is a multiple of 4.
    """

    ok: bool
    pathologies: tuple[Pathology2D, ...]
    stray: tuple[tuple[int, int], ...]
    thin: tuple[tuple[int, int], ...]
    divisible: bool


class HoleMethod(Enum):
    FORMULA = "formula"
    ORACLE_FALLBACK = "oracle-fallback"


@dataclass(frozen=True)
class HoleReport:
    """Hole count for one component, with the evidence used to produce it."""

    component_id: int
    area: int
    histogram: CornerHistogram
    holes: int
    method: HoleMethod
    precondition_ok: bool


# ---------------------------------------------------------------------------
# kernels


def _pad(cells: np.ndarray) -> np.ndarray:
    return np.pad(cells, 1, constant_values=False)


def _direct_shifts(cells: np.ndarray):
    p = _pad(cells)
    n = p[:-2, 1:-1]
    s = p[2:, 1:-1]
    w = p[1:-1, :-2]
    e = p[1:-1, 2:]
    return n, s, w, e


def _indirect_fold(cells: np.ndarray, op) -> np.ndarray:
    p = _pad(cells)
    acc = None
    for dy in (0, 1, 2):
        for dx in (0, 1, 2):
            if dx == 1 and dy == 1:
                continue
            part = p[dy : dy + cells.shape[0], dx : dx + cells.shape[1]]
            acc = part if acc is None else op(acc, part)
    return acc


def _boundary_mask(cells: np.ndarray) -> np.ndarray:
    return cells & ~_indirect_fold(cells, np.logical_and)


def classify_boundary_2d(component: Image2D) -> CornerHistogram:
    """Corner histogram of a single component's boundary pixels."""
    cells = component.cells
    if not cells.any():
        raise ValueError("empty component")
    n, s, w, e = _direct_shifts(cells)
    counts = (
        n.astype(np.int8) + s.astype(np.int8) + w.astype(np.int8) + e.astype(np.int8)
    )
    boundary = _boundary_mask(cells)
    hist = np.bincount(counts[boundary], minlength=5)
    thin = boundary & (((n & s) & ~(w | e)) | ((w & e) & ~(n | s)))
    return CornerHistogram(
        cp1=int(hist[1]),
        cp2=int(hist[2]),
        cp3=int(hist[3]),
        cp4=int(hist[4]),
        thin=int(thin.sum()),
        cp0=int(hist[0]),
    )


def remove_speckles(img: Image2D) -> tuple[Image2D, list[RepairAction]]:
    """Fill single-pixel holes and delete single-pixel islands.

    A background pixel whose 8 indirect neighbors are all foreground is
    filled; a foreground pixel whose 8 indirect neighbors are all
    background is deleted. Passes repeat until stable. Within one pass the
    two rules can never touch adjacent cells, so batch application equals
    a sequential row-major sweep.
    """
    cells = img.cells.copy()
    actions: list[RepairAction] = []
    while True:
        fills = ~cells & _indirect_fold(cells, np.logical_and)
        deletes = cells & ~_indirect_fold(cells, np.logical_or)
        if not fills.any() and not deletes.any():
            break
        changed = fills | deletes
        ys, xs = np.nonzero(changed)
        for y, x in zip(ys.tolist(), xs.tolist()):
            op = RepairOp.ADD if fills[y, x] else RepairOp.DELETE
            actions.append(RepairAction(x, y, op, RepairReason.SPECKLE))
        cells[fills] = True
        cells[deletes] = False
    return Image2D(img.width, img.height, cells), actions


def _pathology_masks(cells: np.ndarray):
    a = cells[:-1, :-1]
    b = cells[:-1, 1:]
    c = cells[1:, :-1]
    d = cells[1:, 1:]
    main = a & d & ~b & ~c
    anti = b & c & ~a & ~d
    return main, anti


def find_pathologies_2d(img: Image2D) -> list[Pathology2D]:
    """All pathological 2x2 windows, in row-major anchor order.

    Windows overhanging the border are scanned implicitly: an overhanging
    window reads background outside the image, and both patterns need two
    in-range foreground cells on a diagonal, so no overhanging window can
    ever match.
    """
    if img.width < 2 or img.height < 2:
        return []
    main, anti = _pathology_masks(img.cells)
    out = []
    kind = np.zeros(main.shape, dtype=np.int8)
    kind[main] = 1
    kind[anti] = 2
    ys, xs = np.nonzero(kind)
    for y, x in zip(ys.tolist(), xs.tolist()):
        out.append(Pathology2D(x, y, Diag2D.MAIN if kind[y, x] == 1 else Diag2D.ANTI))
    return out


def _window_cells(x: int, y: int) -> tuple[tuple[int, int], ...]:
    return ((x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1))


def _get(cells: np.ndarray, x: int, y: int) -> bool:
    if 0 <= y < cells.shape[0] and 0 <= x < cells.shape[1]:
        return bool(cells[y, x])
    return False


def _window_pathological(cells: np.ndarray, x: int, y: int) -> Diag2D | None:
    a = _get(cells, x, y)
    b = _get(cells, x + 1, y)
    c = _get(cells, x, y + 1)
    d = _get(cells, x + 1, y + 1)
    if a and d and not b and not c:
        return Diag2D.MAIN
    if b and c and not a and not d:
        return Diag2D.ANTI
    return None


def _region_clean(cells: np.ndarray, x: int, y: int) -> bool:
    """No pathological window within the 4x4 region around window (x, y)."""
    for ay in range(y - 1, y + 2):
        for ax in range(x - 1, x + 2):
            if _window_pathological(cells, ax, ay) is not None:
                return False
    return True


def repair_2d(img: Image2D) -> tuple[Image2D, list[RepairAction]]:
    """Remove pathological windows by local add/delete edits.

    For each pathology, candidates are tried in a fixed order: add the
    row-major-first background cell of the window, add the other one,
    delete the row-major-first foreground cell, delete the other. The first
    candidate that leaves the surrounding 4x4 region clean is kept. If all
    four create a new pathology nearby, the row-major-first foreground cell
    is deleted regardless; deletions always terminate. A hard cap of
    4 * width * height total actions guards against non-convergence.
    """
    cells = img.cells.copy()
    actions: list[RepairAction] = []
    cap = 4 * img.width * img.height
    while True:
        found = find_pathologies_2d(Image2D(img.width, img.height, cells))
        if not found:
            break
        for p in found:
            if _window_pathological(cells, p.x, p.y) != p.kind:
                continue
            if len(actions) >= cap:
                raise RepairDidNotConverge("repair did not converge")
            actions.append(_fix_window(cells, p))
    return Image2D(img.width, img.height, cells), actions


def _fix_window(cells: np.ndarray, p: Pathology2D) -> RepairAction:
    order = _window_cells(p.x, p.y)
    bg = [c for c in order if not cells[c[1], c[0]]]
    fg = [c for c in order if cells[c[1], c[0]]]
    candidates = [
        (RepairOp.ADD, bg[0]),
        (RepairOp.ADD, bg[1]),
        (RepairOp.DELETE, fg[0]),
        (RepairOp.DELETE, fg[1]),
    ]
    for op, (cx, cy) in candidates:
        cells[cy, cx] = op is RepairOp.ADD
        if _region_clean(cells, p.x, p.y):
            return RepairAction(cx, cy, op, RepairReason.PATHOLOGY)
        cells[cy, cx] = op is not RepairOp.ADD
    # Every candidate spawns a new pathology; fall back to deleting the
    # row-major-first foreground cell, which at least shrinks the object.
    cx, cy = fg[0]
    cells[cy, cx] = False
    return RepairAction(cx, cy, RepairOp.DELETE, RepairReason.PATHOLOGY)


def check_preconditions_2d(
    component: Image2D, hist: CornerHistogram | None = None
) -> PreconditionReport:
    """Decide whether the corner formula may be trusted for this component.

    Requires, in order: no pathological windows, no boundary pixel with
    fewer than two direct neighbors, no thin (collinear cp2) pixels, and
    cp4 - cp2 divisible by 4. Offending coordinates are reported.
    """
    if hist is None:
        hist = classify_boundary_2d(component)
    cells = component.cells
    pathologies = tuple(find_pathologies_2d(component))
    n, s, w, e = _direct_shifts(cells)
    counts = (
        n.astype(np.int8) + s.astype(np.int8) + w.astype(np.int8) + e.astype(np.int8)
    )
    boundary = _boundary_mask(cells)
    stray_mask = boundary & (counts < 2)
    thin_mask = boundary & (((n & s) & ~(w | e)) | ((w & e) & ~(n | s)))
    stray = tuple((int(x), int(y)) for y, x in zip(*np.nonzero(stray_mask)))
    thin = tuple((int(x), int(y)) for y, x in zip(*np.nonzero(thin_mask)))
    divisible = (hist.cp4 - hist.cp2) % 4 == 0
    ok = not pathologies and not stray and not thin and divisible
    return PreconditionReport(ok, pathologies, stray, thin, divisible)


def hole_count(
    component: Image2D,
    component_id: int = 1,
    check_single: bool = True,
) -> HoleReport:
    """Hole count of a single connected component.

    Uses the corner formula when the preconditions pass and the result is
    sane (a negative count means the corner proxy missed a defect); falls
    back to the flood-fill oracle otherwise.
    """
    if check_single and label_components_2d(component).count != 1:
        raise ValueError("expected a single connected component")
    hist = classify_boundary_2d(component)
    pre = check_preconditions_2d(component, hist)
    area = component.area
    if pre.ok:
        holes = 1 + (hist.cp4 - hist.cp2) // 4
        if holes >= 0:
            return HoleReport(component_id, area, hist, holes, HoleMethod.FORMULA, True)
    holes = holes_by_floodfill(component)
    return HoleReport(component_id, area, hist, holes, HoleMethod.ORACLE_FALLBACK, False)


def _shift_actions(actions, origin) -> list[RepairAction]:
    ox, oy = origin
    return [
        RepairAction(a.x + ox, a.y + oy, a.op, a.reason) for a in actions
    ]


def _analyze_components(
    img: Image2D,
    repair: bool = True,
    fallback_oracle: bool = True,
):
    """Full per-component pipeline; yields (report, canvas) pairs.

    Steps per component: extract onto a padded canvas, remove speckles,
    repair pathologies, relabel (a deletion can split a component), then
    classify and count each surviving piece.
    """
    labeling = label_components_2d(img, Adjacency.DIRECT_2D)
    actions: list[RepairAction] = []
    results = []
    next_id = 1
    for cid in range(1, labeling.count + 1):
        canvas, origin = _component_canvas(labeling, cid)
        canvas, speckle_actions = remove_speckles(canvas)
        actions.extend(_shift_actions(speckle_actions, origin))
        if not canvas.cells.any():
            continue
        if repair:
            canvas, repair_actions = repair_2d(canvas)
            actions.extend(_shift_actions(repair_actions, origin))
        sub = label_components_2d(canvas, Adjacency.DIRECT_2D)
        for sid in range(1, sub.count + 1):
            piece, _ = _component_canvas(sub, sid)
            report = hole_count(piece, component_id=next_id, check_single=False)
            if not report.precondition_ok and not fallback_oracle:
                raise PreconditionFailure(
                    f"component {next_id} fails formula preconditions"
                )
            results.append((report, piece))
            next_id += 1
    return results, actions


def holes_pipeline(
    img: Image2D,
    repair: bool = True,
    fallback_oracle: bool = True,
) -> tuple[list[HoleReport], list[RepairAction]]:
    """Label, clean, repair, and count holes for every component.

    Returns one report per surviving component (single-pixel speckles are
    deleted and produce none) plus the combined edit log in source
    coordinates.
    """
    results, actions = _analyze_components(img, repair, fallback_oracle)
    return [r for r, _ in results], actions
