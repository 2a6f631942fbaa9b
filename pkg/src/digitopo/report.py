"""JSON report records for the command-line pipeline.

Reports are plain dicts serialized with sorted keys and fixed
separators, so identical inputs and flags produce byte-identical output.
Every numeric field is an integer (times are integer microseconds, sizes
integer bytes) and every per-component record carries a method field.
No timestamps are embedded; the human-readable printer may add one as a
plain text line outside the JSON.
"""

from __future__ import annotations

import hashlib
import json

from .topo2d import HoleReport, RepairAction
from .topo3d import SurfaceHistogram, SurfaceReport, TopoReport3D

SCHEMA_VERSION = 1

__all__ = [
    "SCHEMA_VERSION",
    "input_digest",
    "action_record",
    "hole_record",
    "surface_record",
    "component_record_3d",
    "base_report",
    "dumps",
]


def input_digest(path) -> str:
    """sha256 of the raw input file bytes, prefixed with the algorithm."""
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return "sha256:" + h.hexdigest()


def action_record(a: RepairAction) -> dict:
    rec = {"op": a.op.value, "reason": a.reason.value, "x": a.x, "y": a.y}
    if a.z is not None:
        rec["z"] = a.z
    return rec


def _corner_histogram_record(h) -> dict:
    return {
        "cp0": h.cp0,
        "cp1": h.cp1,
        "cp2": h.cp2,
        "cp3": h.cp3,
        "cp4": h.cp4,
        "thin": h.thin,
        "boundary_total": h.boundary_total,
    }


def hole_record(r: HoleReport) -> dict:
    return {
        "component": r.component_id,
        "area": r.area,
        "histogram": _corner_histogram_record(r.histogram),
        "holes": r.holes,
        "method": r.method.value,
        "precondition_ok": r.precondition_ok,
    }


def _surface_histogram_record(h: SurfaceHistogram) -> dict:
    return {
        "m3": h.m3,
        "m4": h.m4,
        "m5": h.m5,
        "m6": h.m6,
        "irregular": h.irregular,
        "total": h.total,
    }


def surface_record(s: SurfaceReport) -> dict:
    return {
        "points": s.points,
        "histogram": _surface_histogram_record(s.histogram),
        "genus": s.genus,
        "euler_characteristic": s.euler_characteristic,
        "method": s.method,
    }


def component_record_3d(r: TopoReport3D) -> dict:
    return {
        "component": r.component_id,
        "voxels": r.voxel_count,
        "surfaces": [surface_record(s) for s in r.boundary_surfaces],
        "betti": list(r.betti),
    }


def base_report(command: str, digest: str | None = None) -> dict:
    rep = {"schema_version": SCHEMA_VERSION, "command": command}
    if digest is not None:
        rep["input"] = digest
    return rep


def dumps(report: dict) -> str:
    """Canonical serialization: sorted keys, fixed separators, newline."""
    return json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n"
