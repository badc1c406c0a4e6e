"""Linac treatment-room model: kinematic chain, axis limits, machine/couch
collision checks, beam-arrangement sweeps, and the attachment registry.

Frames: room → gantry (rotation about the horizontal y axis through the
isocenter) → collimator (rotation about the beam axis); room → couch
(three translations plus a rotation about the vertical axis through the
isocenter).  World frame: z up, y along the couch, isocenter at origin.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Optional

import numpy as np

from . import geometry
from .scene import axis_angle_matrix, translation_matrix
from .x3d import Document, NodeKind, SFFloat, SFVec3f, X3DParseError, parse_x3d
from .x3d.model import make_node


class UnknownAxis(Exception):
    pass


class DirectoryUnreadable(Exception):
    pass


class AttachmentNotFound(Exception):
    pass


class AttachmentParseFailed(Exception):
    pass


class Axis(Enum):
    GANTRY = "gantry"
    COLLIMATOR = "collimator"
    COUCH_ROTATION = "couch_rotation"
    COUCH_VERTICAL = "couch_vertical"
    COUCH_LONGITUDINAL = "couch_longitudinal"
    COUCH_LATERAL = "couch_lateral"


ROTATIONAL_AXES = {Axis.GANTRY, Axis.COLLIMATOR, Axis.COUCH_ROTATION}

# Fixture translation limits in meters; not asserted as clinically accurate.
DEFAULT_LIMITS = {
    Axis.COUCH_VERTICAL: (0.0, 0.5),
    Axis.COUCH_LONGITUDINAL: (-0.5, 0.5),
    Axis.COUCH_LATERAL: (-0.2, 0.2),
}


@dataclass(frozen=True)
class LinacConfiguration:
    gantry_deg: float = 0.0
    collimator_deg: float = 0.0
    couch_rotation_deg: float = 0.0
    couch_vertical_m: float = 0.12
    couch_longitudinal_m: float = 0.0
    couch_lateral_m: float = 0.0
    limits: tuple = tuple(sorted((a.value, lo, hi) for a, (lo, hi) in DEFAULT_LIMITS.items()))

    def limit_for(self, axis: Axis):
        for name, lo, hi in self.limits:
            if name == axis.value:
                return lo, hi
        return None


_AXIS_FIELDS = {
    Axis.GANTRY: "gantry_deg",
    Axis.COLLIMATOR: "collimator_deg",
    Axis.COUCH_ROTATION: "couch_rotation_deg",
    Axis.COUCH_VERTICAL: "couch_vertical_m",
    Axis.COUCH_LONGITUDINAL: "couch_longitudinal_m",
    Axis.COUCH_LATERAL: "couch_lateral_m",
}


def set_axis(cfg: LinacConfiguration, axis: Axis, value: float) -> LinacConfiguration:
    """Set one axis: rotations wrap into [0, 360); translations clamp to limits."""
    if not isinstance(axis, Axis):
        raise UnknownAxis(f"unknown axis {axis!r}")
    value = float(value)
    if math.isnan(value) or math.isinf(value):
        raise ValueError(f"axis value must be finite, got {value}")
    if axis in ROTATIONAL_AXES:
        value = value % 360.0
    else:
        lo, hi = cfg.limit_for(axis)
        value = min(max(value, lo), hi)
    return replace(cfg, **{_AXIS_FIELDS[axis]: value})


@dataclass(frozen=True)
class LinacPart:
    name: str
    frame: str  # room | gantry | collimator | couch
    shape: object
    local: tuple  # 16 floats, row-major 4x4

    def local_matrix(self) -> np.ndarray:
        return np.asarray(self.local, dtype=float).reshape(4, 4)


def _part(name, frame, shape, matrix=None) -> LinacPart:
    m = np.eye(4) if matrix is None else np.asarray(matrix, dtype=float)
    return LinacPart(name=name, frame=frame, shape=shape, local=tuple(m.ravel()))


@dataclass
class LinacGeometry:
    parts: list = field(default_factory=list)
    attachments: list = field(default_factory=list)  # collimator-frame solids

    def all_parts(self):
        return list(self.parts) + list(self.attachments)


# Source-axis distance of the gantry head center, and the local offset of
# the collimator mount below the head face (leaves a small air gap so the
# mount never touches the head itself).
SAD = 0.7
HEAD_FACE = 0.5
MOUNT_OFFSET = 0.45


def reference_geometry() -> LinacGeometry:
    """Desk-scale reference fixture: gantry head cylinder, box couch with a
    support column to the floor, and a capsule patient."""
    head = _part("gantry_head", "gantry",
                 geometry.Cylinder(radius=0.3, half_height=0.2),
                 translation_matrix((0, 0, SAD))
                 @ axis_angle_matrix((1, 0, 0), math.pi / 2))
    couch_top = _part("couch_top", "couch",
                      geometry.Box(half_extents=(0.25, 1.1, 0.04)),
                      translation_matrix((0, 0, -0.04)))
    column = _part("couch_column", "couch",
                   geometry.Box(half_extents=(0.15, 0.15, 0.45)),
                   translation_matrix((0, 0, -0.53)))
    patient = _part("patient", "couch",
                    geometry.Capsule(radius=0.12, half_length=0.7),
                    translation_matrix((0, 0, 0.12)))
    return LinacGeometry(parts=[head, couch_top, column, patient])


def frame_transform(cfg: LinacConfiguration, frame: str) -> np.ndarray:
    if frame == "room":
        return np.eye(4)
    if frame == "gantry":
        return axis_angle_matrix((0, 1, 0), math.radians(cfg.gantry_deg))
    if frame == "collimator":
        return (frame_transform(cfg, "gantry")
                @ translation_matrix((0, 0, MOUNT_OFFSET))
                @ axis_angle_matrix((0, 0, 1), math.radians(cfg.collimator_deg)))
    if frame == "couch":
        return (axis_angle_matrix((0, 0, 1), math.radians(cfg.couch_rotation_deg))
                @ translation_matrix((cfg.couch_lateral_m, cfg.couch_longitudinal_m,
                                      -0.24 + cfg.couch_vertical_m)))
    raise ValueError(f"unknown frame {frame!r}")


def part_world_transform(cfg: LinacConfiguration, part: LinacPart) -> np.ndarray:
    return frame_transform(cfg, part.frame) @ part.local_matrix()


@dataclass(frozen=True)
class CollisionReport:
    colliding: bool
    pairs: tuple  # (part_a, part_b, min_distance_m), distance < clearance or <= 0
    config: LinacConfiguration


# Machine-side vs couch-side frame groups; parts within one group are
# mechanically attached and not checked against each other.
_FRAME_GROUP = {"room": "room", "gantry": "machine", "collimator": "machine",
                "couch": "couch"}


def check_collision(cfg: LinacConfiguration, geo: LinacGeometry,
                    clearance: float = 0.0) -> CollisionReport:
    """Exact pairwise minimum distances across frame groups."""
    parts = geo.all_parts()
    posed = [(p, part_world_transform(cfg, p)) for p in parts]
    pairs = []
    colliding = False
    for i in range(len(posed)):
        for j in range(i + 1, len(posed)):
            a, ta = posed[i]
            b, tb = posed[j]
            if _FRAME_GROUP[a.frame] == _FRAME_GROUP[b.frame]:
                continue
            d = geometry.pair_distance(a.shape, ta, b.shape, tb)
            if d <= 0 or d < clearance:
                pairs.append((a.name, b.name, d))
                colliding = True
    return CollisionReport(colliding=colliding, pairs=tuple(pairs), config=cfg)


@dataclass(frozen=True)
class BeamArrangement:
    control_points: tuple  # LinacConfiguration per point
    arc: bool = False
    arc_step_deg: float = 1.0

    def __post_init__(self):
        if self.arc and self.arc_step_deg <= 0:
            raise ValueError("arc step must be > 0")


@dataclass(frozen=True)
class SweepResult:
    entries: tuple               # (gantry angle or control-point index, report)
    colliding_intervals: tuple   # closed [start_deg, end_deg] gantry intervals


def sweep_beam_arrangement(plan: BeamArrangement, geo: LinacGeometry,
                           clearance: float = 0.0) -> SweepResult:
    """Evaluate every control point; arcs expand between the first and last
    control point's gantry angles at the arc step."""
    if not plan.control_points:
        return SweepResult(entries=(), colliding_intervals=())
    entries = []
    if plan.arc:
        base = plan.control_points[0]
        start = plan.control_points[0].gantry_deg
        end = plan.control_points[-1].gantry_deg
        angle = start
        angles = []
        while angle <= end + 1e-9:
            angles.append(angle)
            angle += plan.arc_step_deg
        for a in angles:
            report = check_collision(replace(base, gantry_deg=a % 360.0), geo, clearance)
            entries.append((a, report))
    else:
        for idx, cp in enumerate(plan.control_points):
            entries.append((idx, check_collision(cp, geo, clearance)))

    intervals = []
    run_start = None
    prev_key = None
    for key, report in entries:
        if report.colliding:
            if run_start is None:
                run_start = key
            prev_key = key
        elif run_start is not None:
            intervals.append((run_start, prev_key))
            run_start = None
    if run_start is not None:
        intervals.append((run_start, prev_key))
    return SweepResult(entries=tuple(entries), colliding_intervals=tuple(intervals))


SCENE_EXTENSION = ".x3d"


def list_attachments(registry_dir) -> list:
    """Names of loadable attachment scenes, freshly read from disk each call."""
    path = Path(registry_dir)
    try:
        files = sorted(p.stem for p in path.iterdir()
                       if p.is_file() and p.suffix == SCENE_EXTENSION)
    except OSError as exc:
        raise DirectoryUnreadable(f"cannot list {path}: {exc}") from None
    return files


def _extract_solids(doc: Document, name: str) -> list:
    """Collect primitive solids (with accumulated transforms) from a scene."""
    solids = []

    def visit(node, matrix, index):
        from .scene import local_matrix
        m = matrix @ local_matrix(node)
        if node.kind is NodeKind.Sphere:
            r = node.fields["radius"].value
            solids.append((geometry.Sphere(radius=r), m))
        elif node.kind is NodeKind.Cylinder:
            solids.append((geometry.Cylinder(
                radius=node.fields["radius"].value,
                half_height=node.fields["height"].value / 2), m))
        elif node.kind is NodeKind.Box:
            s = node.fields["size"]
            solids.append((geometry.Box(half_extents=(s.x / 2, s.y / 2, s.z / 2)), m))
        for _, child in node.children:
            visit(child, m, index)

    visit(doc.root, np.eye(4), 0)
    return [
        _part(f"{name}#{i}", "collimator", shape, m)
        for i, (shape, m) in enumerate(solids)
    ]


def load_attachment(doc: Document, geo: LinacGeometry, name: str,
                    registry_dir) -> tuple:
    """Graft an attachment scene under the collimator mount.

    Returns a new (document, geometry) pair; the attachment's solids join
    the collision set on the collimator frame.
    """
    if name not in list_attachments(registry_dir):
        raise AttachmentNotFound(f"no attachment named {name!r}")
    path = Path(registry_dir) / f"{name}{SCENE_EXTENSION}"
    try:
        attachment = parse_x3d(path.read_text())
    except X3DParseError as exc:
        raise AttachmentParseFailed(f"{name}: {exc}") from None

    import copy
    new_doc = copy.deepcopy(doc)
    mount: Optional[object] = new_doc.defs.get("COLLIMATOR_MOUNT")
    group = make_node(NodeKind.Group)
    for cf, child in attachment.root.children:
        group.children.append((cf, child))
    if mount is not None:
        mount.add(group)
    else:
        new_doc.root.add(group)

    new_geo = LinacGeometry(parts=list(geo.parts),
                            attachments=list(geo.attachments))
    existing = sum(1 for p in new_geo.attachments
                   if p.name.startswith(f"{name}#") or p.name.startswith(f"{name}@"))
    solids = _extract_solids(attachment, f"{name}@{existing}")
    new_geo.attachments.extend(solids)
    new_doc.diagnostics.extend(attachment.diagnostics)
    return new_doc, new_geo
