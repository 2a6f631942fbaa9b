"""3D pipeline tests: pathologies, repair, surfaces, genus, homology.

Expected histograms and Betti numbers were frozen from the cubical Euler
oracle and hand enumeration on small volumes before the classification
code existed.
"""

import numpy as np
import pytest

from digitopo import (
    Adjacency,
    InvalidSurfaceError,
    Pathology3D,
    Pathology3DKind,
    RepairDidNotConverge,
    RepairOp,
    Volume3D,
    analyze_volume,
    boundary_voxels,
    classify_surface,
    euler_surface_3d,
    find_pathologies_3d,
    genus,
    gen_block_3d,
    gen_frame,
    gen_shell,
    homology,
    label_components_3d,
    repair_3d,
    split_surface_components,
    surface_neighbors,
    to_point_space,
)
from digitopo.topo3d import SurfaceHistogram

from gridtext import NONCONVERGENT_SLABS, volume


def hist_tuple(h):
    return (h.m3, h.m4, h.m5, h.m6, h.irregular)


def solid(nx, ny, nz):
    # Unpadded block, for tests that assert exact coordinates.
    return Volume3D(nx, ny, nz, np.ones((nz, ny, nx), dtype=bool))


# ---------------------------------------------------------------------------
# pathology detection


class TestFindPathologies:
    def test_clean_block(self):
        assert find_pathologies_3d(gen_block_3d(3, 3, 3)) == []

    def test_vertex_pair(self):
        vol = volume("10\n00", "00\n01")
        found = find_pathologies_3d(vol)
        assert len(found) == 1
        p = found[0]
        assert p.kind is Pathology3DKind.VERTEX_PAIR
        assert (p.x, p.y, p.z) == (0, 0, 0)
        assert set(p.pair) == {(0, 0, 0), (1, 1, 1)}

    def test_vertex_pair_other_diagonal(self):
        vol = volume("01\n00", "00\n10")
        found = find_pathologies_3d(vol)
        assert len(found) == 1
        assert found[0].kind is Pathology3DKind.VERTEX_PAIR
        assert set(found[0].pair) == {(1, 0, 0), (0, 1, 1)}

    def test_edge_pair_x_axis(self):
        # Two voxels sharing the x-directed edge between them.
        vol = volume("1\n0", "0\n1")
        found = find_pathologies_3d(vol)
        assert len(found) == 1
        p = found[0]
        assert p.kind is Pathology3DKind.EDGE_PAIR
        assert p.axis == 0
        assert set(p.pair) == {(0, 0, 0), (0, 1, 1)}

    def test_edge_pair_y_axis(self):
        vol = volume("10", "01")
        found = find_pathologies_3d(vol)
        assert len(found) == 1
        assert found[0].axis == 1
        assert set(found[0].pair) == {(0, 0, 0), (1, 0, 1)}

    def test_edge_pair_z_axis(self):
        vol = volume("10\n01")
        found = find_pathologies_3d(vol)
        assert len(found) == 1
        assert found[0].axis == 2
        assert set(found[0].pair) == {(0, 0, 0), (1, 1, 0)}

    def test_complement_vertex_pair(self):
        vol = volume("01\n11", "11\n10")
        found = find_pathologies_3d(vol)
        assert len(found) == 1
        p = found[0]
        assert p.kind is Pathology3DKind.COMPLEMENT_VERTEX_PAIR
        assert set(p.pair) == {(0, 0, 0), (1, 1, 1)}

    def test_vertex_pair_with_companion_is_not_reported(self):
        # A third voxel 6-adjacent to one of the diagonal pair gives the
        # window an object count of 3, which matches no pattern.
        vol = volume("10\n10", "00\n01")
        kinds = {p.kind for p in find_pathologies_3d(vol)}
        assert Pathology3DKind.VERTEX_PAIR not in kinds

    def test_scan_order(self):
        # Two separated vertex pairs; anchors must come out in z, y, x order.
        cells = np.zeros((2, 2, 5), dtype=bool)
        cells[0, 0, 0] = cells[1, 1, 1] = True
        cells[0, 0, 3] = cells[1, 1, 4] = True
        vol = Volume3D(5, 2, 2, cells)
        found = find_pathologies_3d(vol)
        assert [(p.x, p.y, p.z) for p in found] == [(0, 0, 0), (3, 0, 0)]


# ---------------------------------------------------------------------------
# repair


class TestRepair:
    def test_vertex_pair_deletes_one(self):
        vol = volume("10\n00", "00\n01")
        fixed, actions = repair_3d(vol)
        assert len(actions) == 1
        assert actions[0].op is RepairOp.DELETE
        assert find_pathologies_3d(fixed) == []
        assert fixed.voxel_count == 1

    def test_delete_prefers_less_connected(self):
        # Edge pair (1,0,0)/(1,1,1); the first is reinforced by the
        # 6-neighbor at (0,0,0), so the bare (1,1,1) must go.
        cells = np.zeros((2, 2, 3), dtype=bool)
        cells[0, 0, 1] = cells[1, 1, 1] = True
        cells[0, 0, 0] = True
        vol = Volume3D(3, 2, 2, cells)
        fixed, actions = repair_3d(vol)
        deletes = [a for a in actions if a.op is RepairOp.DELETE]
        assert (deletes[0].x, deletes[0].y, deletes[0].z) == (1, 1, 1)
        assert find_pathologies_3d(fixed) == []

    def test_delete_tie_breaks_to_scan_later(self):
        # Both pair voxels isolated: degrees tie at 0, the later flat
        # index is deleted and the anchor voxel survives.
        vol = volume("10\n00", "00\n01")
        fixed, actions = repair_3d(vol)
        a = actions[0]
        assert (a.x, a.y, a.z) == (1, 1, 1)
        assert fixed.get(0, 0, 0)

    def test_complement_fills_first(self):
        vol = volume("01\n11", "11\n10")
        fixed, actions = repair_3d(vol)
        assert len(actions) == 1
        assert actions[0].op is RepairOp.ADD
        assert fixed.voxel_count == 7
        assert find_pathologies_3d(fixed) == []

    def test_fill_prefers_more_face_contact(self):
        # Complement pair with holes at (1,0,0) and (2,1,1); the extra
        # voxel at (0,0,0) gives the first hole four object faces against
        # the second hole's three, so the fill lands there.
        cells = np.zeros((2, 2, 3), dtype=bool)
        cells[:, :, 1:] = True
        cells[0, 0, 1] = False
        cells[1, 1, 2] = False
        cells[0, 0, 0] = True
        vol = Volume3D(3, 2, 2, cells)
        fixed, actions = repair_3d(vol)
        adds = [a for a in actions if a.op is RepairOp.ADD]
        assert len(adds) == 1
        assert (adds[0].x, adds[0].y, adds[0].z) == (1, 0, 0)
        assert find_pathologies_3d(fixed) == []

    def test_fill_tie_breaks_to_scan_first(self):
        # Bare 6-voxel complement case: both holes have 3 object faces, so
        # the add lands on the scan-earlier (0,0,0).
        vol = volume("01\n11", "11\n10")
        _, actions = repair_3d(vol)
        a = actions[0]
        assert (a.x, a.y, a.z) == (0, 0, 0)

    def test_torus_frame_untouched(self):
        frame = gen_frame(1)
        fixed, actions = repair_3d(frame)
        assert actions == []
        assert np.array_equal(fixed.cells, frame.cells)

    def test_repair_idempotent(self):
        vol = volume("10\n00", "00\n01")
        fixed, _ = repair_3d(vol)
        again, actions = repair_3d(fixed)
        assert actions == []
        assert np.array_equal(again.cells, fixed.cells)

    def test_input_not_mutated(self):
        vol = volume("10\n00", "00\n01")
        before = vol.cells.copy()
        repair_3d(vol)
        assert np.array_equal(vol.cells, before)

    def test_chain_of_pairs_terminates(self):
        # Diagonal string of voxels: every consecutive pair is a vertex
        # pair. Repair must end with no pathologies.
        n = 6
        cells = np.zeros((n, n, n), dtype=bool)
        for i in range(n):
            cells[i, i, i] = True
        vol = Volume3D(n, n, n, cells)
        fixed, actions = repair_3d(vol)
        assert find_pathologies_3d(fixed) == []
        assert len(actions) >= n // 2

    def test_noise_repair_idempotent(self):
        from digitopo import gen_noisy_volume_3d

        for seed in range(15):
            vol = gen_noisy_volume_3d(seed)
            fixed, _ = repair_3d(vol)
            assert find_pathologies_3d(fixed) == []
            _, again = repair_3d(fixed)
            assert again == []


# ---------------------------------------------------------------------------
# boundary and point space


class TestBoundary:
    def test_solid_2x2x2_all_boundary(self):
        vol = gen_block_3d(2, 2, 2)
        assert len(boundary_voxels(vol)) == 8

    def test_solid_4x4x4_peels_core(self):
        vol = solid(4, 4, 4)
        bv = boundary_voxels(vol)
        assert len(bv) == 56
        assert (1, 1, 1) not in bv
        assert (0, 0, 0) in bv

    def test_frame_all_boundary(self):
        vol = volume("111\n101\n111")
        assert len(boundary_voxels(vol)) == 8

    def test_point_space_single_voxel(self):
        vol = solid(1, 1, 1)
        pts = to_point_space(vol)
        assert len(pts) == 8
        assert pts.points == {
            (x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)
        }

    def test_point_space_2x2x2(self):
        pts = to_point_space(solid(2, 2, 2))
        assert len(pts) == 26
        assert (1, 1, 1) not in pts

    def test_point_space_frame(self):
        vol = volume("111\n101\n111")
        assert len(to_point_space(vol)) == 32


# ---------------------------------------------------------------------------
# surface neighbors and classification


class TestSurfaceNeighbors:
    def test_cube_corner_has_three(self):
        vol = solid(1, 1, 1)
        pts = to_point_space(vol)
        assert surface_neighbors((0, 0, 0), pts) == 3

    def test_face_center_of_2x2x2(self):
        pts = to_point_space(solid(2, 2, 2))
        assert surface_neighbors((1, 1, 0), pts) == 4

    def test_edge_midpoint_of_2x2x2(self):
        pts = to_point_space(solid(2, 2, 2))
        assert surface_neighbors((1, 0, 0), pts) == 4

    def test_not_a_surface_point(self):
        pts = to_point_space(solid(2, 2, 2))
        with pytest.raises(ValueError):
            surface_neighbors((1, 1, 1), pts)
        with pytest.raises(ValueError):
            surface_neighbors((9, 9, 9), pts)

    def test_agrees_with_vectorized_counts(self):
        vol = gen_frame(2)
        pts = to_point_space(vol)
        hist = classify_surface(pts)
        by_hand = [surface_neighbors(p, pts) for p in sorted(pts.points)]
        assert hist_tuple(hist) == (
            by_hand.count(3),
            by_hand.count(4),
            by_hand.count(5),
            by_hand.count(6),
            0,
        )


class TestClassify:
    def test_single_voxel(self):
        hist = classify_surface(to_point_space(gen_block_3d(1, 1, 1)))
        assert hist_tuple(hist) == (8, 0, 0, 0, 0)
        assert hist.total == 8

    def test_solid_2x2x2(self):
        hist = classify_surface(to_point_space(gen_block_3d(2, 2, 2)))
        assert hist_tuple(hist) == (8, 18, 0, 0, 0)

    def test_frame_3x3x1(self):
        hist = classify_surface(to_point_space(volume("111\n101\n111")))
        assert hist_tuple(hist) == (8, 16, 8, 0, 0)

    def test_seven_voxel_notch(self):
        # 2x2x2 minus one corner: simply connected, so m3 = 8 + m5 + 2*m6.
        cells = np.ones((2, 2, 2), dtype=bool)
        cells[1, 1, 1] = False
        hist = classify_surface(to_point_space(Volume3D(2, 2, 2, cells)))
        assert hist.irregular == 0
        assert hist.m3 == 8 + hist.m5 + 2 * hist.m6
        assert genus(hist) == 0


# ---------------------------------------------------------------------------
# surface splitting


class TestSplitSurfaces:
    def test_solid_block_one_surface(self):
        comps = split_surface_components(to_point_space(gen_block_3d(3, 2, 2)))
        assert len(comps) == 1

    def test_shell_has_two(self):
        vol = gen_shell((3, 3, 3), (1, 1, 1))
        comps = split_surface_components(to_point_space(vol))
        assert [len(c) for c in comps] == [56, 8]

    def test_two_blocks(self):
        cells = np.zeros((2, 2, 5), dtype=bool)
        cells[:, :, :2] = True
        cells[:, :, 3:] = True
        comps = split_surface_components(
            to_point_space(Volume3D(5, 2, 2, cells))
        )
        assert len(comps) == 2
        # Ordered by minimal vertex: the x<=2 surface first.
        assert max(x for x, _, _ in comps[0].points) == 2
        assert min(x for x, _, _ in comps[1].points) == 3

    def test_empty(self):
        vol = Volume3D(2, 2, 2, np.zeros((2, 2, 2), dtype=bool))
        assert split_surface_components(to_point_space(vol)) == []

    def test_union_recovers_all_points(self):
        vol = gen_shell((4, 3, 3), (2, 1, 1))
        pts = to_point_space(vol)
        comps = split_surface_components(pts)
        merged = set()
        for c in comps:
            assert not (merged & c.points)
            merged |= c.points
        assert merged == pts.points


# ---------------------------------------------------------------------------
# genus


class TestGenus:
    def test_sphere_like(self):
        assert genus(SurfaceHistogram(8, 0, 0, 0)) == 0

    def test_frame_is_torus(self):
        hist = classify_surface(to_point_space(volume("111\n101\n111")))
        assert genus(hist) == 1

    def test_double_frame(self):
        vol = volume("11111\n10101\n11111")
        hist = classify_surface(to_point_space(vol))
        assert genus(hist) == 2

    def test_irregular_rejected(self):
        with pytest.raises(InvalidSurfaceError):
            genus(SurfaceHistogram(8, 0, 0, 0, irregular=1))

    def test_indivisible_rejected(self):
        with pytest.raises(InvalidSurfaceError):
            genus(SurfaceHistogram(8, 0, 3, 0))

    def test_negative_rejected(self):
        with pytest.raises(InvalidSurfaceError):
            genus(SurfaceHistogram(16, 0, 0, 0))

    def test_matches_euler_oracle_on_frames(self):
        for k in range(4):
            vol = gen_frame(k)
            hist = classify_surface(to_point_space(vol))
            g = genus(hist)
            assert g == k
            summaries = euler_surface_3d(vol)
            assert len(summaries) == 1
            assert g == (2 - summaries[0].chi) // 2


# ---------------------------------------------------------------------------
# homology


class TestHomology:
    def test_solid_ball(self):
        rep = homology(gen_block_3d(2, 2, 2))
        assert rep.betti == (1, 0, 0, 0)
        assert rep.voxel_count == 8
        assert len(rep.boundary_surfaces) == 1
        assert rep.boundary_surfaces[0].method == "formula"
        assert rep.boundary_surfaces[0].euler_characteristic == 2

    def test_solid_torus(self):
        rep = homology(volume("111\n101\n111"))
        assert rep.betti == (1, 1, 0, 0)
        surf = rep.boundary_surfaces[0]
        assert surf.points == 32
        assert surf.genus == 1
        assert surf.euler_characteristic == 0

    def test_shell_encloses_cavity(self):
        rep = homology(gen_shell((3, 3, 3), (1, 1, 1)))
        assert rep.betti == (1, 0, 1, 0)
        assert [s.genus for s in rep.boundary_surfaces] == [0, 0]
        assert [s.points for s in rep.boundary_surfaces] == [56, 8]

    def test_genus_two(self):
        rep = homology(gen_frame(2))
        assert rep.betti == (1, 2, 0, 0)

    def test_empty_rejected(self):
        vol = Volume3D(2, 2, 2, np.zeros((2, 2, 2), dtype=bool))
        with pytest.raises(ValueError):
            homology(vol)

    def test_fallback_recovers_vertex_pair(self):
        # Unrepaired vertex pair: the shared point has six surface edges,
        # so the single classified sheet has m3 = 14, m6 = 1, which fails
        # divisibility. The oracle fallback splits the boundary into two
        # chi-2 cube surfaces instead.
        vol = volume("10\n00", "00\n01")
        rep = homology(vol, fallback_oracle=True)
        assert [s.method for s in rep.boundary_surfaces] == [
            "euler-oracle",
            "euler-oracle",
        ]
        assert [s.genus for s in rep.boundary_surfaces] == [0, 0]
        assert rep.betti == (1, 0, 1, 0)

    def test_no_fallback_raises(self):
        vol = volume("10\n00", "00\n01")
        with pytest.raises(InvalidSurfaceError):
            homology(vol, fallback_oracle=False)

    def test_odd_chi_boundary_rejected_even_with_fallback(self):
        # Edge-sharing voxel pair: one fused boundary sheet with
        # chi = 14 - 23 + 12 = 3, unusable by either route.
        vol = volume("10\n01")
        with pytest.raises(InvalidSurfaceError):
            homology(vol, fallback_oracle=True)

    def test_flat_plate_formula_route(self):
        rep = homology(volume("111\n111\n111"))
        assert rep.betti == (1, 0, 0, 0)
        surf = rep.boundary_surfaces[0]
        assert surf.method == "formula"
        assert surf.points == 32
        assert hist_tuple(surf.histogram) == (8, 24, 0, 0, 0)


# ---------------------------------------------------------------------------
# the full pipeline


class TestAnalyzeVolume:
    def test_separate_components_get_sequential_ids(self):
        cells = np.zeros((2, 2, 7), dtype=bool)
        cells[:, :, :2] = True
        cells[:, :, 4:6] = True
        reports, actions = analyze_volume(Volume3D(7, 2, 2, cells))
        assert [r.component_id for r in reports] == [1, 2]
        assert actions == []
        assert all(r.betti == (1, 0, 0, 0) for r in reports)

    def test_repair_actions_in_source_coordinates(self):
        # Vertex pair far from the origin; the delete must be reported at
        # volume coordinates, not canvas coordinates.
        cells = np.zeros((4, 4, 6), dtype=bool)
        cells[2, 2, 4] = True
        cells[3, 3, 5] = True
        reports, actions = analyze_volume(Volume3D(6, 4, 4, cells))
        assert len(actions) == 1
        a = actions[0]
        assert (a.x, a.y, a.z) == (5, 3, 3)
        assert len(reports) == 1
        assert reports[0].voxel_count == 1

    def test_vertex_pair_becomes_one_ball(self):
        vol = volume("10\n00", "00\n01")
        reports, actions = analyze_volume(vol)
        assert len(reports) == 1
        assert reports[0].betti == (1, 0, 0, 0)
        assert len(actions) == 1

    def test_no_repair_mode(self):
        vol = volume("10\n00", "00\n01")
        reports, actions = analyze_volume(vol, repair=False)
        assert actions == []
        # Without repair the 26-component splits into two 6-components.
        assert len(reports) == 2

    def test_frame_report(self):
        reports, _ = analyze_volume(gen_frame(1))
        assert len(reports) == 1
        assert reports[0].betti == (1, 1, 0, 0)

    def test_empty_volume(self):
        vol = Volume3D(3, 3, 3, np.zeros((3, 3, 3), dtype=bool))
        reports, actions = analyze_volume(vol)
        assert reports == []
        assert actions == []

    def test_relabel_after_repair(self):
        # Two voxels joined only through a vertex pair: repair deletes one,
        # then 6-relabeling finds a single one-voxel component.
        vol = volume("10\n00", "00\n01")
        reports, _ = analyze_volume(vol)
        lab = label_components_3d(vol, Adjacency.INDIRECT_3D)
        assert lab.count == 1  # captured as one 26-component
        assert reports[0].voxel_count == 1


# ---------------------------------------------------------------------------
# invariants over generated volumes


class TestProperties:
    def test_gauss_bonnet_over_frames_and_shells(self):
        volumes = [
            gen_block_3d(2, 3, 4),
            gen_frame(1),
            gen_frame(2, ring_width=2),
            gen_frame(3),
            gen_shell((4, 4, 4), (2, 2, 2)),
        ]
        for vol in volumes:
            for comp in split_surface_components(to_point_space(vol)):
                hist = classify_surface(comp)
                g = genus(hist)
                assert hist.m3 - hist.m5 - 2 * hist.m6 == 8 * (1 - g)

    def test_oracle_equivalence_on_noise(self):
        # After whole-volume repair the volume is clean, so the pipeline's
        # per-component repair must be a no-op, and every surface genus
        # must match the face-count oracle on the same voxel set.
        from digitopo import gen_noisy_volume_3d

        for seed in range(8):
            fixed, _ = repair_3d(gen_noisy_volume_3d(seed))
            reports, actions = analyze_volume(fixed)
            assert actions == []
            formula = sorted(
                s.genus for r in reports for s in r.boundary_surfaces
            )
            oracle = sorted(
                (2 - s.chi) // 2 for s in euler_surface_3d(fixed)
            )
            assert formula == oracle

    def test_oracle_equivalence_on_blobs(self):
        from digitopo import gen_fat_blob_3d

        for seed in range(6):
            vol = gen_fat_blob_3d(seed, 60)
            reports, actions = analyze_volume(vol)
            # Blobs are fattened during accretion, never pathological.
            assert actions == []
            formula = sorted(
                s.genus for r in reports for s in r.boundary_surfaces
            )
            oracle = sorted((2 - s.chi) // 2 for s in euler_surface_3d(vol))
            assert formula == oracle

    def test_histogram_totals_match_point_counts(self):
        vol = gen_shell((5, 4, 3), (3, 2, 1))
        for comp in split_surface_components(to_point_space(vol)):
            assert classify_surface(comp).total == len(comp)


# ---------------------------------------------------------------------------
# non-convergence


class TestNonConvergence:
    def test_frozen_oscillator_raises(self):
        vol = volume(*NONCONVERGENT_SLABS)
        with pytest.raises(RepairDidNotConverge, match="did not converge"):
            repair_3d(vol)

    def test_oscillator_detected_quickly(self):
        # Cycle detection must fire well before the 4*n action cap; a
        # repeated grid state is proof the cap would be hit.
        import time

        vol = volume(*NONCONVERGENT_SLABS)
        t0 = time.perf_counter()
        with pytest.raises(RepairDidNotConverge):
            repair_3d(vol)
        assert time.perf_counter() - t0 < 1.0

    def test_checkerboard_either_cleans_or_raises(self):
        # Densest adversarial pattern a small box allows: every diagonal
        # pair pathological. Whatever the rules do, they must not return
        # a dirty volume.
        cells = np.indices((4, 4, 4)).sum(axis=0) % 2 == 0
        vol = Volume3D(4, 4, 4, cells)
        try:
            fixed, _ = repair_3d(vol)
        except RepairDidNotConverge as e:
            assert "did not converge" in str(e)
        else:
            assert find_pathologies_3d(fixed) == []
