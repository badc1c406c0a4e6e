"""Treatment-machine kinematics, collision checks, sweeps, attachments."""
import math
from dataclasses import replace

import numpy as np
import pytest

from virtlab.linac import (
    AttachmentNotFound,
    AttachmentParseFailed,
    Axis,
    BeamArrangement,
    DEFAULT_LIMITS,
    DirectoryUnreadable,
    LinacConfiguration,
    UnknownAxis,
    check_collision,
    frame_transform,
    list_attachments,
    load_attachment,
    part_world_transform,
    reference_geometry,
    set_axis,
    sweep_beam_arrangement,
)
from virtlab.x3d import parse_x3d

from oracle import oracle_config_colliding

ATTACHMENTS = __import__("pathlib").Path(__file__).parent.parent \
    / "scenes" / "attachments"
_FRAME_GROUP = {"room": "room", "gantry": "machine", "collimator": "machine",
                "couch": "couch"}


class TestSetAxis:
    def test_rotations_wrap(self):
        cfg = set_axis(LinacConfiguration(), Axis.GANTRY, 540.0)
        assert cfg.gantry_deg == 180.0
        cfg = set_axis(cfg, Axis.GANTRY, -90.0)
        assert cfg.gantry_deg == 270.0
        cfg = set_axis(cfg, Axis.COLLIMATOR, 360.0)
        assert cfg.collimator_deg == 0.0

    def test_translations_clamp(self):
        cfg = set_axis(LinacConfiguration(), Axis.COUCH_VERTICAL, 9.0)
        assert cfg.couch_vertical_m == DEFAULT_LIMITS[Axis.COUCH_VERTICAL][1]
        cfg = set_axis(cfg, Axis.COUCH_LATERAL, -5.0)
        assert cfg.couch_lateral_m == DEFAULT_LIMITS[Axis.COUCH_LATERAL][0]

    def test_non_finite_rejected(self):
        for bad in (float("nan"), float("inf"), float("-inf")):
            with pytest.raises(ValueError):
                set_axis(LinacConfiguration(), Axis.GANTRY, bad)

    def test_unknown_axis(self):
        with pytest.raises(UnknownAxis):
            set_axis(LinacConfiguration(), "gantry", 10.0)

    def test_returns_new_value_object(self):
        cfg = LinacConfiguration()
        out = set_axis(cfg, Axis.GANTRY, 45.0)
        assert cfg.gantry_deg == 0.0 and out.gantry_deg == 45.0


class TestKinematics:
    def test_gantry_head_overhead_at_zero(self):
        geo = reference_geometry()
        head = next(p for p in geo.parts if p.name == "gantry_head")
        m = part_world_transform(LinacConfiguration(), head)
        assert np.allclose(m[:3, 3], [0, 0, 0.7])

    def test_gantry_head_under_couch_at_180(self):
        geo = reference_geometry()
        head = next(p for p in geo.parts if p.name == "gantry_head")
        cfg = set_axis(LinacConfiguration(), Axis.GANTRY, 180.0)
        m = part_world_transform(cfg, head)
        assert np.allclose(m[:3, 3], [0, 0, -0.7], atol=1e-12)

    def test_gantry_rotation_about_y_through_isocenter(self):
        cfg = set_axis(LinacConfiguration(), Axis.GANTRY, 90.0)
        m = frame_transform(cfg, "gantry")
        assert np.allclose(m[:3, 3], 0)
        # +z (overhead) maps to +x at gantry 90
        assert np.allclose(m[:3, :3] @ [0, 0, 1], [1, 0, 0], atol=1e-12)

    def test_couch_translations_compose(self):
        cfg = LinacConfiguration(couch_lateral_m=0.1, couch_longitudinal_m=0.2,
                                 couch_vertical_m=0.3)
        m = frame_transform(cfg, "couch")
        assert np.allclose(m[:3, 3], [0.1, 0.2, -0.24 + 0.3])

    def test_couch_rotation_about_vertical(self):
        cfg = LinacConfiguration(couch_rotation_deg=90.0,
                                 couch_longitudinal_m=0.2,
                                 couch_vertical_m=0.24)
        m = frame_transform(cfg, "couch")
        # rotation applied before the translations: the couch swings around
        assert np.allclose(m[:3, 3], [-0.2, 0, 0], atol=1e-12)


class TestCollision:
    GEO = reference_geometry()

    def test_default_configuration_safe(self):
        report = check_collision(LinacConfiguration(), self.GEO)
        assert not report.colliding
        assert report.pairs == ()

    def test_gantry_180_couch_high_collides(self):
        cfg = set_axis(LinacConfiguration(), Axis.GANTRY, 180.0)
        cfg = set_axis(cfg, Axis.COUCH_VERTICAL, 0.5)
        report = check_collision(cfg, self.GEO)
        assert report.colliding
        names = {frozenset(p[:2]) for p in report.pairs}
        assert frozenset(("gantry_head", "couch_column")) in names

    def test_within_frame_pairs_ignored(self):
        # couch parts interpenetrate by construction; never reported
        for cfg in (LinacConfiguration(),
                    set_axis(LinacConfiguration(), Axis.GANTRY, 180.0)):
            report = check_collision(cfg, self.GEO, clearance=10.0)
            for a, b, _ in report.pairs:
                pa = next(p for p in self.GEO.parts if p.name == a)
                pb = next(p for p in self.GEO.parts if p.name == b)
                assert _FRAME_GROUP[pa.frame] != _FRAME_GROUP[pb.frame]

    def test_clearance_margin_expands_report(self):
        cfg = set_axis(LinacConfiguration(), Axis.GANTRY, 140.0)
        tight = check_collision(cfg, self.GEO)
        wide = check_collision(cfg, self.GEO, clearance=0.2)
        assert len(wide.pairs) >= len(tight.pairs)

    def test_matches_sampling_oracle(self):
        rng = np.random.default_rng(11)
        mismatches = 0
        for trial in range(20):
            cfg = LinacConfiguration(
                gantry_deg=rng.uniform(0, 360),
                couch_rotation_deg=rng.uniform(0, 360),
                couch_vertical_m=rng.uniform(0, 0.5),
                couch_longitudinal_m=rng.uniform(-0.5, 0.5),
                couch_lateral_m=rng.uniform(-0.2, 0.2),
            )
            posed = [(p.name, p.frame, p.shape, part_world_transform(cfg, p))
                     for p in self.GEO.all_parts()]
            n = 20_000
            import oracle
            tol = 2 * math.sqrt(max(oracle.surface_area(p.shape)
                                    for p in self.GEO.all_parts()) / n)
            expected = oracle_config_colliding(posed, _FRAME_GROUP,
                                               clearance=tol, n=n, seed=trial)
            got = check_collision(cfg, self.GEO, clearance=tol).colliding
            mismatches += expected != got
        assert mismatches == 0


class TestSweep:
    GEO = reference_geometry()

    def test_empty_plan(self):
        result = sweep_beam_arrangement(BeamArrangement(control_points=()),
                                        self.GEO)
        assert result.entries == () and result.colliding_intervals == ()

    def test_control_points_indexed(self):
        safe = LinacConfiguration()
        bad = set_axis(set_axis(safe, Axis.GANTRY, 180.0),
                       Axis.COUCH_VERTICAL, 0.5)
        result = sweep_beam_arrangement(
            BeamArrangement(control_points=(safe, bad, safe)), self.GEO)
        assert [k for k, _ in result.entries] == [0, 1, 2]
        assert result.colliding_intervals == ((1, 1),)

    def test_full_arc_single_interval_around_180(self):
        start = LinacConfiguration(gantry_deg=0.0)
        end = replace(start, gantry_deg=359.0)
        result = sweep_beam_arrangement(
            BeamArrangement(control_points=(start, end), arc=True,
                            arc_step_deg=1.0), self.GEO)
        assert len(result.entries) == 360
        assert len(result.colliding_intervals) == 1
        lo, hi = result.colliding_intervals[0]
        assert lo <= 180.0 <= hi

    def test_arc_interval_frozen_bounds(self):
        start = LinacConfiguration(gantry_deg=0.0)
        end = replace(start, gantry_deg=359.0)
        result = sweep_beam_arrangement(
            BeamArrangement(control_points=(start, end), arc=True,
                            arc_step_deg=1.0), self.GEO)
        assert result.colliding_intervals == ((135.0, 225.0),)

    def test_safe_arc_has_no_intervals(self):
        start = LinacConfiguration(gantry_deg=0.0)
        end = replace(start, gantry_deg=90.0)
        result = sweep_beam_arrangement(
            BeamArrangement(control_points=(start, end), arc=True,
                            arc_step_deg=5.0), self.GEO)
        assert result.colliding_intervals == ()

    def test_bad_arc_step(self):
        with pytest.raises(ValueError):
            BeamArrangement(control_points=(LinacConfiguration(),), arc=True,
                            arc_step_deg=0.0)


class TestAttachments:
    def test_listing_sorted_stems(self):
        names = list_attachments(ATTACHMENTS)
        assert names == sorted(names)
        assert "cone" in names and "wedge" in names

    def test_listing_is_read_through(self, tmp_path):
        assert list_attachments(tmp_path) == []
        (tmp_path / "probe.x3d").write_text("<Scene/>")
        assert list_attachments(tmp_path) == ["probe"]
        (tmp_path / "probe.x3d").unlink()
        assert list_attachments(tmp_path) == []

    def test_listing_unreadable(self, tmp_path):
        with pytest.raises(DirectoryUnreadable):
            list_attachments(tmp_path / "absent")

    def test_load_adds_collimator_solids(self):
        doc = parse_x3d("<Scene><Transform DEF='COLLIMATOR_MOUNT'/></Scene>"
                        .replace("'", '"'))
        geo = reference_geometry()
        new_doc, new_geo = load_attachment(doc, geo, "cone", ATTACHMENTS)
        assert len(new_geo.attachments) == 1
        assert new_geo.attachments[0].frame == "collimator"
        assert new_geo.attachments[0].name.startswith("cone@0")
        # grafted under the mount, originals untouched
        mount = new_doc.defs["COLLIMATOR_MOUNT"]
        assert len(mount.children) == 1
        assert doc.defs["COLLIMATOR_MOUNT"].children == []
        assert len(geo.attachments) == 0

    def test_double_load_distinct_instances(self):
        doc = parse_x3d("<Scene/>")
        geo = reference_geometry()
        doc, geo = load_attachment(doc, geo, "cone", ATTACHMENTS)
        doc, geo = load_attachment(doc, geo, "cone", ATTACHMENTS)
        names = [p.name for p in geo.attachments]
        assert len(names) == 2 and len(set(names)) == 2
        assert names[0].startswith("cone@0") and names[1].startswith("cone@1")

    def test_attachment_moves_with_gantry(self):
        doc = parse_x3d("<Scene/>")
        geo = reference_geometry()
        doc, geo = load_attachment(doc, geo, "wedge", ATTACHMENTS)
        part = geo.attachments[0]
        m0 = part_world_transform(LinacConfiguration(), part)
        m180 = part_world_transform(
            set_axis(LinacConfiguration(), Axis.GANTRY, 180.0), part)
        assert m0[2, 3] > 0 > m180[2, 3]

    def test_not_found(self):
        with pytest.raises(AttachmentNotFound):
            load_attachment(parse_x3d("<Scene/>"), reference_geometry(),
                            "ghost", ATTACHMENTS)

    def test_parse_failure(self, tmp_path):
        (tmp_path / "broken.x3d").write_text("<Scene><Sphere></Scene>")
        with pytest.raises(AttachmentParseFailed):
            load_attachment(parse_x3d("<Scene/>"), reference_geometry(),
                            "broken", tmp_path)
