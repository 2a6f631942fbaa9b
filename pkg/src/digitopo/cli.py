"""Command-line interface for the analysis pipeline.

Subcommands: components, holes, genus, homology, repair, validate, gen,
bench. Input format is sniffed from the file: PBM (P1/P4) is 2D, vox3 is
3D. Flags go after the subcommand.

Exit codes:
    0   success
    1   runtime failure: parse errors, invalid surfaces with the fallback
        enabled, validate disagreement
    2   formula preconditions failed with the oracle fallback disabled
    3   repair did not converge
    64  usage error: unknown flag or subcommand, bad flag combination

`--streaming` applies to genus and bench only, and genus additionally
needs `--no-repair` there (repair edits need the whole grid in memory).
Streaming and default mode produce byte-identical reports. JSON output
(`--json`) is canonical and carries no timestamp; the human printer
starts with one comment line giving the time and command.
"""

from __future__ import annotations

import argparse
import sys
import time
import tracemalloc
from datetime import datetime

import numpy as np

from . import oracle, pbm, report, shapes, streaming, topo2d, topo3d, vox3
from .errors import (
    DigitopoError,
    InvalidSurfaceError,
    ParseError,
    PreconditionFailure,
    RepairDidNotConverge,
)
from .grid import (
    Adjacency,
    Image2D,
    Volume3D,
    _component_canvas,
    label_components_2d,
    label_components_3d,
)

__all__ = ["cli_dispatch", "main"]


class _Parser(argparse.ArgumentParser):
    """argparse, with usage errors mapped to exit 64."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(64, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--json", action="store_true", help="emit a JSON report")
    shared.add_argument(
        "--no-repair", action="store_true", help="analyze the input as-is"
    )
    shared.add_argument(
        "--fallback-oracle",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="fall back to slow exact counting when formula preconditions fail",
    )
    shared.add_argument(
        "--streaming",
        action="store_true",
        help="fold slab by slab in bounded memory (genus and bench only)",
    )
    shared.add_argument("--seed", type=int, default=0, help="generator seed")

    parser = _Parser(prog="digitopo", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="cmd", required=True, metavar="command")

    def sub(name, helptext, **kw):
        p = subs.add_parser(name, parents=[shared], help=helptext, **kw)
        return p

    p = sub("components", "count connected components")
    p.add_argument("input")
    p.set_defaults(func=_cmd_components)

    p = sub("holes", "hole count per 2D component")
    p.add_argument("input")
    p.set_defaults(func=_cmd_holes)

    p = sub("genus", "genus of the whole boundary surface of a 3D volume")
    p.add_argument("input")
    p.set_defaults(func=_cmd_genus)

    p = sub("homology", "Betti numbers per 3D component")
    p.add_argument("input")
    p.set_defaults(func=_cmd_homology)

    p = sub("repair", "remove pathological configurations")
    p.add_argument("input")
    p.add_argument("-o", "--output", help="write the repaired grid here")
    p.set_defaults(func=_cmd_repair)

    p = sub("validate", "run formula and oracle paths and compare")
    p.add_argument("input")
    p.set_defaults(func=_cmd_validate)

    p = sub("gen", "write a generated shape to a file")
    p.add_argument(
        "shape",
        choices=[
            "block2d",
            "block3d",
            "frame",
            "shell",
            "poly2d",
            "holey2d",
            "blob3d",
            "noisy2d",
            "noisy3d",
        ],
    )
    p.add_argument("output")
    p.add_argument("--width", type=int)
    p.add_argument("--height", type=int)
    p.add_argument("--nx", type=int)
    p.add_argument("--ny", type=int)
    p.add_argument("--nz", type=int)
    p.add_argument("--holes", type=int, default=1)
    p.add_argument("--ring-width", type=int, default=1)
    p.add_argument("--thickness", type=int, default=1)
    p.add_argument("--outer", default="5,5,5", help="shell outer size x,y,z")
    p.add_argument("--cavity", default="1,1,1", help="shell cavity size x,y,z")
    p.add_argument("--area", type=int, default=256)
    p.add_argument("--volume", type=int, default=512)
    p.add_argument("--rate", type=float)
    p.add_argument("--min-width", type=int, default=2)
    p.set_defaults(func=_cmd_gen)

    p = sub("bench", "time the genus counting pass over generated volumes")
    p.add_argument(
        "--ring-widths",
        default="64,128",
        help="comma-separated frame ring widths; object voxels = 8*r^3",
    )
    p.set_defaults(func=_cmd_bench)

    return parser


# ---------------------------------------------------------------------------
# input loading and output


def _load_any(path):
    with open(path, "rb") as fh:
        head = fh.read(4)
    if head[:2] in (b"P1", b"P4"):
        return pbm.read_pbm(path)
    if head == b"vox3":
        return vox3.read_vox3(path)
    raise ParseError("unrecognized input format (want PBM P1/P4 or vox3)", 1)


def _emit(ns, rep: dict, human_lines: list[str]) -> None:
    if ns.json:
        sys.stdout.write(report.dumps(rep))
    else:
        stamp = datetime.now().isoformat(timespec="seconds")
        sys.stdout.write(f"# {stamp} digitopo {ns.cmd}\n")
        sys.stdout.write("".join(line + "\n" for line in human_lines))


def _reject_streaming(ns) -> int | None:
    if ns.streaming:
        print(
            "digitopo: error: --streaming applies to genus and bench only",
            file=sys.stderr,
        )
        return 64
    return None


# ---------------------------------------------------------------------------
# subcommands


def _cmd_components(ns) -> int:
    bad = _reject_streaming(ns)
    if bad is not None:
        return bad
    grid = _load_any(ns.input)
    if isinstance(grid, Image2D):
        labeling = label_components_2d(grid, Adjacency.DIRECT_2D)
        adjacency = "direct-4"
    else:
        labeling = label_components_3d(grid, Adjacency.INDIRECT_3D)
        adjacency = "indirect-26"
    sizes = np.bincount(labeling.labels.ravel(), minlength=labeling.count + 1)
    rep = report.base_report("components", report.input_digest(ns.input))
    rep["adjacency"] = adjacency
    rep["count"] = labeling.count
    rep["components"] = [
        {"component": i, "cells": int(sizes[i])} for i in range(1, labeling.count + 1)
    ]
    lines = [f"components: {labeling.count} ({adjacency})"]
    lines += [f"component {i}: {int(sizes[i])} cells" for i in range(1, labeling.count + 1)]
    _emit(ns, rep, lines)
    return 0


def _cmd_holes(ns) -> int:
    bad = _reject_streaming(ns)
    if bad is not None:
        return bad
    grid = _load_any(ns.input)
    if not isinstance(grid, Image2D):
        print("digitopo: error: holes expects a 2D PBM input", file=sys.stderr)
        return 1
    reports, actions = topo2d.holes_pipeline(
        grid, repair=not ns.no_repair, fallback_oracle=ns.fallback_oracle
    )
    rep = report.base_report("holes", report.input_digest(ns.input))
    rep["components"] = [report.hole_record(r) for r in reports]
    rep["repair_actions"] = [report.action_record(a) for a in actions]
    rep["total_holes"] = sum(r.holes for r in reports)
    lines = [
        f"component {r.component_id}: area={r.area} holes={r.holes}"
        f" method={r.method.value}"
        for r in reports
    ]
    lines.append(f"total holes: {rep['total_holes']} ({len(actions)} repair edits)")
    _emit(ns, rep, lines)
    return 0


def _genus_report_from_histogram(hist, digest: str) -> dict:
    g = topo3d.genus(hist)
    rep = report.base_report("genus", digest)
    rep["histogram"] = {
        "m3": hist.m3,
        "m4": hist.m4,
        "m5": hist.m5,
        "m6": hist.m6,
        "irregular": hist.irregular,
        "total": hist.total,
    }
    rep["genus"] = g
    rep["euler_characteristic"] = 2 - 2 * g
    rep["method"] = "formula"
    return rep


def _cmd_genus(ns) -> int:
    if ns.streaming and not ns.no_repair:
        print(
            "digitopo: error: --streaming requires --no-repair"
            " (repair edits need the whole grid)",
            file=sys.stderr,
        )
        return 64
    digest = report.input_digest(ns.input)
    if ns.streaming:
        slabs = vox3.iter_vox3_slabs(ns.input)
        next(slabs)  # dimension triple
        hist, _stats = streaming.fold_surface_histogram_3d(slabs)
    else:
        grid = _load_any(ns.input)
        if not isinstance(grid, Volume3D):
            print("digitopo: error: genus expects a vox3 input", file=sys.stderr)
            return 1
        if not ns.no_repair:
            grid, _actions = topo3d.repair_3d(grid)
        hist = topo3d.classify_surface(topo3d.to_point_space(grid))
    rep = _genus_report_from_histogram(hist, digest)
    lines = [
        "histogram: "
        + " ".join(f"m{k}={rep['histogram'][f'm{k}']}" for k in (3, 4, 5, 6)),
        f"genus: {rep['genus']} (euler characteristic {rep['euler_characteristic']})",
    ]
    _emit(ns, rep, lines)
    return 0


def _cmd_homology(ns) -> int:
    bad = _reject_streaming(ns)
    if bad is not None:
        return bad
    grid = _load_any(ns.input)
    if not isinstance(grid, Volume3D):
        print("digitopo: error: homology expects a vox3 input", file=sys.stderr)
        return 1
    reports, actions = topo3d.analyze_volume(
        grid, repair=not ns.no_repair, fallback_oracle=ns.fallback_oracle
    )
    rep = report.base_report("homology", report.input_digest(ns.input))
    rep["components"] = [report.component_record_3d(r) for r in reports]
    rep["repair_actions"] = [report.action_record(a) for a in actions]
    lines = []
    for r in reports:
        b = ",".join(str(v) for v in r.betti)
        lines.append(
            f"component {r.component_id}: voxels={r.voxel_count}"
            f" surfaces={len(r.boundary_surfaces)} betti=({b})"
        )
        for i, s in enumerate(r.boundary_surfaces, start=1):
            lines.append(
                f"  surface {i}: points={s.points} genus={s.genus}"
                f" method={s.method}"
            )
    lines.append(f"{len(actions)} repair edits")
    _emit(ns, rep, lines)
    return 0


def _cmd_repair(ns) -> int:
    bad = _reject_streaming(ns)
    if bad is not None:
        return bad
    grid = _load_any(ns.input)
    if isinstance(grid, Image2D):
        cleaned, speckle_actions = topo2d.remove_speckles(grid)
        cleaned, path_actions = topo2d.repair_2d(cleaned)
        actions = speckle_actions + path_actions
        remaining = len(topo2d.find_pathologies_2d(cleaned))
        if ns.output:
            pbm.write_pbm(cleaned, ns.output)
    else:
        cleaned, actions = topo3d.repair_3d(grid)
        remaining = len(topo3d.find_pathologies_3d(cleaned))
        if ns.output:
            vox3.write_vox3(cleaned, ns.output)
    rep = report.base_report("repair", report.input_digest(ns.input))
    rep["repair_actions"] = [report.action_record(a) for a in actions]
    rep["remaining_pathologies"] = remaining
    if ns.output:
        rep["output"] = ns.output
    lines = [f"{len(actions)} repair edits, {remaining} pathologies remain"]
    if ns.output:
        lines.append(f"wrote {ns.output}")
    _emit(ns, rep, lines)
    return 0


def _cmd_validate(ns) -> int:
    bad = _reject_streaming(ns)
    if bad is not None:
        return bad
    grid = _load_any(ns.input)
    checks = []
    if isinstance(grid, Image2D):
        results, _actions = topo2d._analyze_components(
            grid, repair=not ns.no_repair, fallback_oracle=True
        )
        for rep2d, piece in results:
            flood = oracle.holes_by_floodfill(piece)
            chi = oracle.euler_2d(piece).chi
            agree = rep2d.holes == flood == 1 - chi
            checks.append(
                {
                    "component": rep2d.component_id,
                    "formula": rep2d.holes,
                    "flood_fill": flood,
                    "euler": 1 - chi,
                    "agree": agree,
                }
            )
    else:
        # Mirror analyze_volume: capture 26-components, repair each on its
        # own canvas, then compare formula and oracle per 6-piece.
        lab = label_components_3d(grid, Adjacency.INDIRECT_3D)
        cid = 0
        for i in range(1, lab.count + 1):
            canvas, _origin = _component_canvas(lab, i)
            if not ns.no_repair:
                canvas, _ = topo3d.repair_3d(canvas)
            if not canvas.cells.any():
                continue
            sub = label_components_3d(canvas, Adjacency.DIRECT_3D)
            for j in range(1, sub.count + 1):
                piece, _ = _component_canvas(sub, j)
                cid += 1
                rep3d = topo3d.homology(piece, fallback_oracle=True, component_id=cid)
                formula_genus = sum(s.genus for s in rep3d.boundary_surfaces)
                summaries = oracle.euler_surface_3d(piece)
                oracle_genus = sum(
                    (2 - s.chi) // 2 for s in summaries
                )
                agree = formula_genus == oracle_genus and len(summaries) == len(
                    rep3d.boundary_surfaces
                )
                checks.append(
                    {
                        "component": cid,
                        "formula": formula_genus,
                        "euler": oracle_genus,
                        "agree": agree,
                    }
                )
    all_agree = all(c["agree"] for c in checks)
    rep = report.base_report("validate", report.input_digest(ns.input))
    rep["checks"] = checks
    rep["agree"] = all_agree
    lines = [
        " ".join(f"{k}={v}" for k, v in c.items()) for c in checks
    ]
    lines.append("agree" if all_agree else "DISAGREE")
    _emit(ns, rep, lines)
    return 0 if all_agree else 1


def _cmd_gen(ns) -> int:
    bad = _reject_streaming(ns)
    if bad is not None:
        return bad

    def triple(text):
        parts = [int(p) for p in text.split(",")]
        if len(parts) != 3:
            raise ParseError(f"expected x,y,z, got {text!r}")
        return tuple(parts)

    # Unset size and rate flags fall through to the generators' defaults.
    given = {
        k: v
        for k, v in {
            "width": ns.width,
            "height": ns.height,
            "nx": ns.nx,
            "ny": ns.ny,
            "nz": ns.nz,
            "rate": ns.rate,
        }.items()
        if v is not None
    }

    def sized(names, fallback=8):
        return [given.get(n, fallback) for n in names]

    shape = ns.shape
    if shape == "block2d":
        out = shapes.gen_block_2d(*sized(("width", "height")))
    elif shape == "block3d":
        out = shapes.gen_block_3d(*sized(("nx", "ny", "nz")))
    elif shape == "frame":
        out = shapes.gen_frame(ns.holes, ns.ring_width, ns.thickness)
    elif shape == "shell":
        out = shapes.gen_shell(triple(ns.outer), triple(ns.cavity))
    elif shape == "poly2d":
        out = shapes.gen_fat_polyomino_2d(ns.seed, ns.area, ns.min_width)
    elif shape == "holey2d":
        out = shapes.gen_holey_polyomino_2d(ns.seed, ns.area, ns.holes, ns.min_width)
    elif shape == "blob3d":
        out = shapes.gen_fat_blob_3d(ns.seed, ns.volume, ns.min_width)
    elif shape == "noisy2d":
        kw = {k: given[k] for k in ("width", "height", "rate") if k in given}
        out = shapes.gen_noisy_image_2d(ns.seed, **kw)
    else:
        kw = {k: given[k] for k in ("nx", "ny", "nz", "rate") if k in given}
        out = shapes.gen_noisy_volume_3d(ns.seed, **kw)

    if isinstance(out, Image2D):
        pbm.write_pbm(out, ns.output)
        dims = f"{out.width}x{out.height}"
        cells = int(out.cells.sum())
    else:
        vox3.write_vox3(out, ns.output)
        dims = f"{out.nx}x{out.ny}x{out.nz}"
        cells = int(out.cells.sum())
    rep = report.base_report("gen")
    rep["shape"] = shape
    rep["seed"] = ns.seed
    rep["path"] = ns.output
    rep["dimensions"] = dims
    rep["occupied_cells"] = cells
    _emit(ns, rep, [f"wrote {ns.output} ({dims}, {cells} occupied cells)"])
    return 0


def _bench_row(ring_width: int, use_streaming: bool) -> dict:
    holes, thickness = 1, ring_width

    def run():
        if use_streaming:
            hist, stats = streaming.fold_surface_histogram_3d(
                streaming.iter_frame_slabs(holes, ring_width, thickness)
            )
            return hist, stats
        vol = shapes.gen_frame(holes, ring_width, thickness)
        return topo3d.classify_surface(topo3d.to_point_space(vol)), None

    t0 = time.perf_counter()
    hist, stats = run()
    elapsed = time.perf_counter() - t0

    tracemalloc.start()
    run()
    _, mem_peak = tracemalloc.get_traced_memory()
    tracemalloc.stop()

    object_voxels = 0
    nx = ny = nz = 0
    for slab in streaming.iter_frame_slabs(holes, ring_width, thickness):
        object_voxels += int(slab.sum())
        ny, nx = slab.shape
        nz += 1
    row = {
        "mode": "streaming" if use_streaming else "batch",
        "ring_width": ring_width,
        "nx": nx,
        "ny": ny,
        "nz": nz,
        "grid_cells": nx * ny * nz,
        "object_voxels": object_voxels,
        "genus": topo3d.genus(hist),
        "time_us": int(elapsed * 1_000_000),
        "tracemalloc_peak_bytes": int(mem_peak),
    }
    if stats is not None:
        row["held_bytes_peak"] = stats.held_bytes_peak
        row["slab_bytes"] = stats.slab_bytes
    return row


def _cmd_bench(ns) -> int:
    try:
        widths = [int(w) for w in ns.ring_widths.split(",") if w]
    except ValueError:
        print("digitopo: error: bad --ring-widths", file=sys.stderr)
        return 64
    rows = [_bench_row(w, ns.streaming) for w in widths]
    rep = report.base_report("bench")
    rep["rows"] = rows
    lines = [
        f"r={r['ring_width']} voxels={r['object_voxels']}"
        f" time={r['time_us']}us peak={r['tracemalloc_peak_bytes']}B"
        f" genus={r['genus']} ({r['mode']})"
        for r in rows
    ]
    _emit(ns, rep, lines)
    return 0


# ---------------------------------------------------------------------------
# dispatch


def cli_dispatch(argv) -> int:
    """Parse argv and run one subcommand, mapping errors to exit codes."""
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 0
    try:
        return ns.func(ns)
    except RepairDidNotConverge as e:
        print(f"digitopo: error: {e}", file=sys.stderr)
        return 3
    except PreconditionFailure as e:
        print(f"digitopo: error: {e}", file=sys.stderr)
        return 2
    except InvalidSurfaceError as e:
        print(f"digitopo: error: {e}", file=sys.stderr)
        return 1 if ns.fallback_oracle else 2
    except (DigitopoError, OSError, ValueError) as e:
        print(f"digitopo: error: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
