"""File formats and the command-line interface."""

import json

import numpy as np
import pytest

from digitopo import (
    Image2D,
    ParseError,
    Volume3D,
    cli_dispatch,
    find_pathologies_2d,
    find_pathologies_3d,
    gen_frame,
    gen_noisy_image_2d,
    gen_noisy_volume_3d,
    gen_shell,
    iter_vox3_slabs,
    read_pbm,
    read_vox3,
    write_pbm,
    write_pbm_p4,
    write_vox3,
)
from gridtext import NONCONVERGENT_SLABS, image, volume

BLOB = image(
    """
    00000000
    00111100
    01111100
    01110000
    00110000
    00111000
    00111000
    00000000
    """
)

STAIRCASE = image(
    """
    00000000
    01100000
    01110000
    00111000
    00011100
    00001110
    00000110
    00000000
    """
)


# ---------------------------------------------------------------------------
# PBM


class TestPbm:
    def test_p1_round_trip(self, tmp_path):
        path = tmp_path / "a.pbm"
        write_pbm(BLOB, path)
        back = read_pbm(path)
        assert np.array_equal(back.cells, BLOB.cells)

    def test_p4_round_trip(self, tmp_path):
        # Width 8 exercises exact byte fit; width 13 exercises pad bits.
        for img in (BLOB, gen_noisy_image_2d(1, width=13, height=5)):
            path = tmp_path / "b.pbm"
            write_pbm_p4(img, path)
            back = read_pbm(path)
            assert np.array_equal(back.cells, img.cells)

    def test_p1_p4_same_occupancy(self, tmp_path):
        img = gen_noisy_image_2d(2, width=21, height=9)
        a, b = tmp_path / "a.pbm", tmp_path / "b.pbm"
        write_pbm(img, a)
        write_pbm_p4(img, b)
        assert np.array_equal(read_pbm(a).cells, read_pbm(b).cells)

    def test_p1_whitespace_and_comments(self, tmp_path):
        path = tmp_path / "c.pbm"
        path.write_bytes(b"P1\n# a comment\n 3 # trailing\n2\n1 0 1\n0 1 0\n")
        img = read_pbm(path)
        assert (img.width, img.height) == (3, 2)
        assert img.cells.tolist() == [[True, False, True], [False, True, False]]

    def test_p1_packed_digits(self, tmp_path):
        path = tmp_path / "d.pbm"
        path.write_bytes(b"P1\n2 2\n10\n01\n")
        assert read_pbm(path).cells.tolist() == [[True, False], [False, True]]

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "e.pbm"
        path.write_bytes(b"P5\n2 2\nxxxx")
        with pytest.raises(ParseError, match="line 1"):
            read_pbm(path)

    def test_bad_dimensions(self, tmp_path):
        path = tmp_path / "f.pbm"
        path.write_bytes(b"P1\n0 3\n")
        with pytest.raises(ParseError):
            read_pbm(path)
        path.write_bytes(b"P1\nfoo 3\n111\n")
        with pytest.raises(ParseError):
            read_pbm(path)

    def test_truncated_p1_body(self, tmp_path):
        path = tmp_path / "g.pbm"
        path.write_bytes(b"P1\n3 2\n101\n")
        with pytest.raises(ParseError, match="truncated"):
            read_pbm(path)

    def test_bad_p1_character(self, tmp_path):
        path = tmp_path / "h.pbm"
        path.write_bytes(b"P1\n2 2\n10\n21\n")
        with pytest.raises(ParseError, match="line 4"):
            read_pbm(path)

    def test_truncated_p4_body(self, tmp_path):
        path = tmp_path / "i.pbm"
        path.write_bytes(b"P4\n16 4\n\x00\x00")
        with pytest.raises(ParseError, match="truncated"):
            read_pbm(path)


# ---------------------------------------------------------------------------
# vox3


class TestVox3:
    def test_frame_round_trip(self, tmp_path):
        vol = volume("111\n101\n111")
        path = tmp_path / "a.vox3"
        write_vox3(vol, path)
        back = read_vox3(path)
        assert (back.nx, back.ny, back.nz) == (3, 3, 1)
        assert np.array_equal(back.cells, vol.cells)

    def test_all_zeros_round_trip(self, tmp_path):
        vol = Volume3D(2, 3, 2, np.zeros((2, 3, 2), dtype=bool))
        path = tmp_path / "b.vox3"
        write_vox3(vol, path)
        assert np.array_equal(read_vox3(path).cells, vol.cells)

    def test_noisy_round_trip(self, tmp_path):
        vol = gen_noisy_volume_3d(5)
        path = tmp_path / "c.vox3"
        write_vox3(vol, path)
        assert np.array_equal(read_vox3(path).cells, vol.cells)

    def test_write_read_write_stable(self, tmp_path):
        vol = gen_frame(2)
        a, b = tmp_path / "a.vox3", tmp_path / "b.vox3"
        write_vox3(vol, a)
        write_vox3(read_vox3(a), b)
        assert a.read_bytes() == b.read_bytes()

    def test_iter_yields_dims_then_slabs(self, tmp_path):
        vol = volume("10\n01", "11\n00")
        path = tmp_path / "d.vox3"
        write_vox3(vol, path)
        it = iter_vox3_slabs(path)
        assert next(it) == (2, 2, 2)
        slabs = list(it)
        assert len(slabs) == 2
        assert np.array_equal(np.stack(slabs), vol.cells)

    def test_bad_header(self, tmp_path):
        path = tmp_path / "e.vox3"
        path.write_bytes(b"vox4 2 2 1\n10\n01\n")
        with pytest.raises(ParseError, match="line 1"):
            read_vox3(path)

    def test_body_too_short(self, tmp_path):
        path = tmp_path / "f.vox3"
        path.write_bytes(b"vox3 2 2 2\n10\n01\n\n10\n")
        with pytest.raises(ParseError):
            read_vox3(path)

    def test_missing_blank_separator(self, tmp_path):
        path = tmp_path / "g.vox3"
        path.write_bytes(b"vox3 2 2 2\n10\n01\n10\n01\n")
        with pytest.raises(ParseError):
            read_vox3(path)

    def test_wrong_row_length(self, tmp_path):
        path = tmp_path / "h.vox3"
        path.write_bytes(b"vox3 2 2 1\n100\n01\n")
        with pytest.raises(ParseError, match="line 2"):
            read_vox3(path)

    def test_bad_character(self, tmp_path):
        path = tmp_path / "i.vox3"
        path.write_bytes(b"vox3 2 2 1\n10\n0x\n")
        with pytest.raises(ParseError, match="line 3"):
            read_vox3(path)

    def test_missing_trailing_newline(self, tmp_path):
        path = tmp_path / "j.vox3"
        path.write_bytes(b"vox3 2 2 1\n10\n01")
        with pytest.raises(ParseError):
            read_vox3(path)

    def test_trailing_content(self, tmp_path):
        path = tmp_path / "k.vox3"
        path.write_bytes(b"vox3 2 2 1\n10\n01\n\n11\n")
        with pytest.raises(ParseError):
            read_vox3(path)


# ---------------------------------------------------------------------------
# CLI


def run_cli(capsys, *args):
    code = cli_dispatch(list(args))
    captured = capsys.readouterr()
    return code, captured.out


class TestCliReports:
    def test_holes_on_worked_blob(self, capsys, tmp_path):
        path = tmp_path / "blob.pbm"
        write_pbm(BLOB, path)
        code, out = run_cli(capsys, "holes", "--json", str(path))
        assert code == 0
        rep = json.loads(out)
        assert rep["schema_version"] == 1
        assert rep["total_holes"] == 0
        comp = rep["components"][0]
        assert comp["histogram"]["cp2"] == 8
        assert comp["histogram"]["cp4"] == 4
        assert comp["method"] == "formula"
        assert rep["input"].startswith("sha256:")

    def test_genus_on_frame(self, capsys, tmp_path):
        path = tmp_path / "frame.vox3"
        write_vox3(gen_frame(1), path)
        code, out = run_cli(capsys, "genus", "--json", str(path))
        assert code == 0
        rep = json.loads(out)
        assert rep["genus"] == 1
        assert rep["euler_characteristic"] == 0
        assert rep["histogram"] == {
            "irregular": 0, "m3": 8, "m4": 16, "m5": 8, "m6": 0, "total": 32,
        }

    def test_homology_on_shell(self, capsys, tmp_path):
        path = tmp_path / "shell.vox3"
        write_vox3(gen_shell((3, 3, 3), (1, 1, 1)), path)
        code, out = run_cli(capsys, "homology", "--json", str(path))
        assert code == 0
        rep = json.loads(out)
        assert rep["components"][0]["betti"] == [1, 0, 1, 0]
        assert len(rep["components"][0]["surfaces"]) == 2

    def test_components_adjacency(self, capsys, tmp_path):
        path = tmp_path / "two.pbm"
        write_pbm(image("10\n01"), path)
        code, out = run_cli(capsys, "components", "--json", str(path))
        assert code == 0
        rep = json.loads(out)
        assert rep["count"] == 2
        assert rep["adjacency"] == "direct-4"

    def test_json_byte_identical_across_runs(self, capsys, tmp_path):
        path = tmp_path / "n.pbm"
        write_pbm(gen_noisy_image_2d(3), path)
        _, first = run_cli(capsys, "holes", "--json", str(path))
        _, second = run_cli(capsys, "holes", "--json", str(path))
        assert first == second

    def test_streaming_genus_identical(self, capsys, tmp_path):
        path = tmp_path / "frame.vox3"
        write_vox3(gen_frame(3, ring_width=2), path)
        _, batch = run_cli(capsys, "genus", "--json", "--no-repair", str(path))
        _, streamed = run_cli(
            capsys, "genus", "--json", "--no-repair", "--streaming", str(path)
        )
        assert batch == streamed
        assert json.loads(batch)["genus"] == 3

    def test_human_mode_has_timestamp_header(self, capsys, tmp_path):
        path = tmp_path / "frame.vox3"
        write_vox3(gen_frame(1), path)
        code, out = run_cli(capsys, "genus", str(path))
        assert code == 0
        assert out.startswith("# ")
        assert "digitopo genus" in out.splitlines()[0]
        assert "genus: 1" in out

    def test_json_mode_has_no_timestamp(self, capsys, tmp_path):
        path = tmp_path / "frame.vox3"
        write_vox3(gen_frame(1), path)
        _, out = run_cli(capsys, "genus", "--json", str(path))
        json.loads(out)  # pure JSON, no leading comment line
        assert not out.startswith("#")


class TestCliRepairValidate:
    def test_repair_writes_clean_pbm(self, capsys, tmp_path):
        src = tmp_path / "noisy.pbm"
        dst = tmp_path / "clean.pbm"
        write_pbm(gen_noisy_image_2d(9), src)
        code, _ = run_cli(capsys, "repair", "--json", str(src), "-o", str(dst))
        assert code == 0
        assert find_pathologies_2d(read_pbm(dst)) == []

    def test_repair_writes_clean_vox3(self, capsys, tmp_path):
        src = tmp_path / "noisy.vox3"
        dst = tmp_path / "clean.vox3"
        write_vox3(gen_noisy_volume_3d(4), src)
        code, _ = run_cli(capsys, "repair", "--json", str(src), "-o", str(dst))
        assert code == 0
        assert find_pathologies_3d(read_vox3(dst)) == []

    def test_validate_agreement(self, capsys, tmp_path):
        for name, writer, grid in (
            ("s.pbm", write_pbm, STAIRCASE),
            ("n.pbm", write_pbm, gen_noisy_image_2d(7)),
            ("f.vox3", write_vox3, gen_frame(2)),
            ("v.vox3", write_vox3, gen_noisy_volume_3d(11)),
        ):
            path = tmp_path / name
            writer(grid, path)
            code, _ = run_cli(capsys, "validate", str(path))
            assert code == 0, name


class TestCliGen:
    def test_gen_frame_then_genus(self, capsys, tmp_path):
        path = tmp_path / "g.vox3"
        code, _ = run_cli(capsys, "gen", "frame", str(path), "--holes", "2")
        assert code == 0
        code, out = run_cli(capsys, "genus", "--json", str(path))
        assert code == 0
        assert json.loads(out)["genus"] == 2

    def test_gen_holey_then_holes(self, capsys, tmp_path):
        path = tmp_path / "h.pbm"
        code, _ = run_cli(capsys, "gen", "holey2d", str(path), "--seed", "4")
        assert code == 0
        code, out = run_cli(capsys, "holes", "--json", str(path))
        assert code == 0
        assert json.loads(out)["total_holes"] == 1

    def test_gen_seed_determinism(self, capsys, tmp_path):
        a, b = tmp_path / "a.pbm", tmp_path / "b.pbm"
        run_cli(capsys, "gen", "noisy2d", str(a), "--seed", "12")
        run_cli(capsys, "gen", "noisy2d", str(b), "--seed", "12")
        assert a.read_bytes() == b.read_bytes()

    def test_gen_shell_sizes(self, capsys, tmp_path):
        path = tmp_path / "s.vox3"
        code, _ = run_cli(
            capsys, "gen", "shell", str(path),
            "--outer", "4,4,4", "--cavity", "2,2,2",
        )
        assert code == 0
        vol = read_vox3(path)
        assert vol.voxel_count == 64 - 8


class TestCliBench:
    def test_batch_rows(self, capsys):
        code, out = run_cli(capsys, "bench", "--json", "--ring-widths", "2,4")
        assert code == 0
        rows = json.loads(out)["rows"]
        assert [r["ring_width"] for r in rows] == [2, 4]
        for r in rows:
            assert r["mode"] == "batch"
            assert r["genus"] == 1
            assert r["object_voxels"] == 8 * r["ring_width"] ** 3
            assert r["time_us"] >= 0

    def test_streaming_rows_track_memory(self, capsys):
        code, out = run_cli(
            capsys, "bench", "--json", "--streaming", "--ring-widths", "2,4"
        )
        assert code == 0
        for r in json.loads(out)["rows"]:
            assert r["mode"] == "streaming"
            assert r["held_bytes_peak"] <= 3 * r["slab_bytes"]


class TestCliExitCodes:
    def test_usage_errors(self, capsys, tmp_path):
        assert run_cli(capsys, "frobnicate")[0] == 64
        assert run_cli(capsys, "holes")[0] == 64
        assert run_cli(capsys, "holes", "--bogus-flag", "x.pbm")[0] == 64
        path = tmp_path / "f.vox3"
        write_vox3(gen_frame(1), path)
        # --streaming outside genus/bench, and genus --streaming without
        # --no-repair, are both usage errors.
        assert run_cli(capsys, "homology", "--streaming", str(path))[0] == 64
        assert run_cli(capsys, "genus", "--streaming", str(path))[0] == 64

    def test_help_exits_zero(self, capsys):
        assert run_cli(capsys, "--help")[0] == 0

    def test_wrong_format_is_an_error(self, capsys, tmp_path):
        path = tmp_path / "f.vox3"
        write_vox3(gen_frame(1), path)
        assert run_cli(capsys, "holes", str(path))[0] == 1

    def test_missing_file(self, capsys):
        assert run_cli(capsys, "holes", "/nonexistent/x.pbm")[0] == 1

    def test_precondition_failure_without_fallback(self, capsys, tmp_path):
        # Fat staircase: passes the precondition proxies but drives the
        # formula negative; without the oracle the pipeline must refuse.
        path = tmp_path / "stair.pbm"
        write_pbm(STAIRCASE, path)
        code, _ = run_cli(capsys, "holes", "--no-fallback-oracle", str(path))
        assert code == 2
        code, out = run_cli(capsys, "holes", "--json", str(path))
        assert code == 0
        comp = json.loads(out)["components"][0]
        assert comp["method"] == "oracle-fallback"
        assert comp["holes"] == 0

    def test_nonconvergence_exit(self, capsys, tmp_path):
        path = tmp_path / "osc.vox3"
        write_vox3(volume(*NONCONVERGENT_SLABS), path)
        assert run_cli(capsys, "repair", str(path))[0] == 3
        assert run_cli(capsys, "homology", str(path))[0] == 3

    def test_parse_error_exit(self, capsys, tmp_path):
        path = tmp_path / "bad.pbm"
        path.write_bytes(b"P1\n2 2\n10\n")
        assert run_cli(capsys, "holes", str(path))[0] == 1
