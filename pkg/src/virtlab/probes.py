"""Scripted haptic exploration probes.

Each probe drives a trajectory through the contact/friction pipeline and
reduces the result to the characteristic the gesture reveals: stroking →
texture (roughness), pressing → firmness, contour following → form,
enclosure → volume.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Optional

import numpy as np

from . import geometry
from .haptics import (
    HapticDeviceConfig,
    HapticDeviceState,
    SurfaceParams,
    contact_force,
    friction_step,
)


class ProbeKind(Enum):
    Stroke = "Stroke"
    Press = "Press"
    ContourFollow = "ContourFollow"
    Enclosure = "Enclosure"


@dataclass
class ProbeReport:
    kind: ProbeKind
    tangential_forces: Optional[list] = None   # Stroke: |F_t| per tick
    roughness: Optional[float] = None          # Stroke: variance of |F_t|
    firmness: Optional[float] = None           # Press: fitted N/m slope
    contour_points: Optional[list] = None      # ContourFollow: surface points
    volume: Optional[float] = None             # Enclosure: m^3 estimate


def load_trajectory(path) -> list:
    """Read a replay file: one `t x y z` line per tick."""
    out = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        t, x, y, z = (float(v) for v in line.split())
        out.append((t, np.array([x, y, z])))
    return out


def save_trajectory(path, samples) -> None:
    lines = [f"{float(t)!r} {float(p[0])!r} {float(p[1])!r} {float(p[2])!r}"
             for t, p in samples]
    Path(path).write_text("\n".join(lines) + "\n")


def _press(shape, transform, surface, cfg, depth=0.004, steps=40) -> ProbeReport:
    # approach along the outward normal at a reference surface point
    _, anchor, normal = geometry.point_query(shape, transform,
                                             transform[:3, 3] + np.array([0, 1, 0]))
    depths, mags = [], []
    for i in range(1, steps + 1):
        d = depth * i / steps
        pos = anchor - d * normal
        force, pen = contact_force(pos, shape, transform, surface, cfg)
        depths.append(pen)
        mags.append(float(np.linalg.norm(force)))
    slope = float(np.polyfit(depths, mags, 1)[0])
    return ProbeReport(kind=ProbeKind.Press, firmness=slope)


def _stroke(shape, transform, surface, cfg, depth=0.002, steps=200,
            trajectory=None) -> ProbeReport:
    _, anchor, normal = geometry.point_query(shape, transform,
                                             transform[:3, 3] + np.array([0, 1, 0]))
    tangent = np.cross(normal, np.array([1.0, 0.0, 0.0]))
    if np.linalg.norm(tangent) < 1e-9:
        tangent = np.cross(normal, np.array([0.0, 1.0, 0.0]))
    tangent /= np.linalg.norm(tangent)

    if trajectory is None:
        span = 0.02
        trajectory = [(i * 1e-3, anchor - depth * normal + tangent * (span * i / steps))
                      for i in range(steps)]

    _, start_surf, _ = geometry.point_query(shape, transform, trajectory[0][1])
    state = HapticDeviceState(position=np.asarray(trajectory[0][1], dtype=float),
                              proxy=start_surf)
    series = []
    for _, pos in trajectory:
        state = replace(state, position=np.asarray(pos, dtype=float))
        fn, pen = contact_force(state.position, shape, transform, surface, cfg)
        if pen <= 0:
            series.append(0.0)
            continue
        state = friction_step(state, fn, tangential_spring=min(surface.stiffness,
                                                               cfg.max_stiffness),
                              surface=surface)
        tangential = state.output_force - fn
        series.append(float(np.linalg.norm(tangential)))
    roughness = float(np.var(series)) if series else 0.0
    return ProbeReport(kind=ProbeKind.Stroke, tangential_forces=series,
                       roughness=roughness)


def _contour(shape, transform, surface, cfg, samples=64) -> ProbeReport:
    # circle the shape in the world x-y plane and record the proxy landing
    lo, hi = geometry.aabb(shape, transform)
    center = (lo + hi) / 2
    radius = float(np.linalg.norm(hi - lo))  # safely outside
    points = []
    for i in range(samples):
        a = 2 * math.pi * i / samples
        probe = center + radius * np.array([math.cos(a), math.sin(a), 0.0])
        _, surf, _ = geometry.point_query(shape, transform, probe)
        points.append(surf)
    return ProbeReport(kind=ProbeKind.ContourFollow, contour_points=points)


def _enclosure(shape, transform, surface, cfg, grid=50) -> ProbeReport:
    lo, hi = geometry.aabb(shape, transform)
    span = hi - lo
    lo = lo - 0.1 * span
    hi = hi + 0.1 * span
    steps = (hi - lo) / grid
    count = 0
    for i in range(grid):
        x = lo[0] + (i + 0.5) * steps[0]
        for j in range(grid):
            y = lo[1] + (j + 0.5) * steps[1]
            for k in range(grid):
                z = lo[2] + (k + 0.5) * steps[2]
                signed, _, _ = geometry.point_query(shape, transform,
                                                    np.array([x, y, z]))
                if signed < 0:
                    count += 1
    volume = count * float(steps[0] * steps[1] * steps[2])
    return ProbeReport(kind=ProbeKind.Enclosure, volume=volume)


def exploration_probe(kind: ProbeKind, shape, transform, surface: SurfaceParams,
                      cfg: HapticDeviceConfig, trajectory=None) -> ProbeReport:
    """Run one scripted exploration gesture against a posed solid."""
    transform = np.asarray(transform, dtype=float)
    if kind is ProbeKind.Press:
        return _press(shape, transform, surface, cfg)
    if kind is ProbeKind.Stroke:
        return _stroke(shape, transform, surface, cfg, trajectory=trajectory)
    if kind is ProbeKind.ContourFollow:
        return _contour(shape, transform, surface, cfg)
    if kind is ProbeKind.Enclosure:
        return _enclosure(shape, transform, surface, cfg)
    raise ValueError(f"unknown probe kind {kind}")  # pragma: no cover
