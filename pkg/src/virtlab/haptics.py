"""Virtual haptic device: calibration, device limits, penalty contact
forces, and proxy-based Coulomb stick/slip friction.

The device model is 3-DOF positional with force output; the pipeline is a
pure state-transition function intended to be driven at a fixed 1 kHz tick.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Tuple

import numpy as np

from . import geometry

SERVO_HZ = 1000
SERVO_DT = 1.0 / SERVO_HZ


class NotInContact(Exception):
    pass


@dataclass(frozen=True)
class HapticDeviceConfig:
    """Device characteristics: DOF, workspace, resolution, force and
    stiffness ceilings, plus the raw→world position calibration."""

    dof: int = 3
    workspace_min: tuple = (-0.2, -0.2, -0.2)
    workspace_max: tuple = (0.2, 0.2, 0.2)
    position_resolution: float = 1e-4   # meters, grid step
    max_force: float = 10.0             # newtons
    max_stiffness: float = 1000.0       # N/m
    calibration: tuple = tuple(np.eye(4).ravel())

    def __post_init__(self):
        if self.position_resolution <= 0:
            raise ValueError("position_resolution must be > 0")
        if self.max_force <= 0:
            raise ValueError("max_force must be > 0")
        if self.max_stiffness <= 0:
            raise ValueError("max_stiffness must be > 0")
        lo, hi = np.asarray(self.workspace_min), np.asarray(self.workspace_max)
        if not np.all(lo < hi):
            raise ValueError("workspace min must be < max per axis")

    @property
    def calibration_matrix(self) -> np.ndarray:
        return np.asarray(self.calibration, dtype=float).reshape(4, 4)


@dataclass
class HapticDeviceState:
    raw_position: np.ndarray = field(default_factory=lambda: np.zeros(3))
    position: np.ndarray = field(default_factory=lambda: np.zeros(3))
    proxy: np.ndarray = field(default_factory=lambda: np.zeros(3))
    output_force: np.ndarray = field(default_factory=lambda: np.zeros(3))
    sticking: bool = False


@dataclass(frozen=True)
class SurfaceParams:
    stiffness: float = 300.0
    static_friction: float = 0.0
    dynamic_friction: float = 0.0

    def __post_init__(self):
        if self.stiffness < 0 or self.static_friction < 0 or self.dynamic_friction < 0:
            raise ValueError("surface parameters must be >= 0")


def calibrate_position(raw, calibration: np.ndarray) -> np.ndarray:
    """Map a raw device position through the affine calibration matrix."""
    m = np.asarray(calibration, dtype=float).reshape(4, 4)
    if not np.allclose(m[3], (0, 0, 0, 1)):
        raise ValueError("calibration matrix must be affine (bottom row 0 0 0 1)")
    p = np.asarray(raw, dtype=float)
    return m[:3, :3] @ p + m[:3, 3]


def _snap(x: float, res: float, lo: float, hi: float) -> float:
    # nearest multiple of res, ties away from zero; then nudged back inside
    # the workspace if the snap crossed a boundary
    q = math.floor(abs(x) / res + 0.5) * res * (1.0 if x >= 0 else -1.0)
    if q > hi:
        q -= res
    elif q < lo:
        q += res
    return q


def constrain_state(pos, force, cfg: HapticDeviceConfig) -> Tuple[np.ndarray, np.ndarray]:
    """Clamp a position into the workspace and onto the resolution grid;
    saturate the force magnitude at max_force (direction preserved)."""
    lo = np.asarray(cfg.workspace_min, dtype=float)
    hi = np.asarray(cfg.workspace_max, dtype=float)
    p = np.clip(np.asarray(pos, dtype=float), lo, hi)
    p = np.array([_snap(p[i], cfg.position_resolution, lo[i], hi[i]) for i in range(3)])
    f = np.asarray(force, dtype=float)
    mag = float(np.linalg.norm(f))
    if mag > cfg.max_force:
        f = f * (cfg.max_force / mag)
    return p, f


def contact_force(device_pos, shape, transform, surface: SurfaceParams,
                  cfg: HapticDeviceConfig) -> Tuple[np.ndarray, float]:
    """Penalty normal force against a posed solid.

    Returns (force, penetration); zero force outside the surface.  The
    effective stiffness is the surface's, capped at the device ceiling.
    """
    signed, _, normal = geometry.point_query(shape, np.asarray(transform, dtype=float),
                                             device_pos)
    if signed >= 0:
        return np.zeros(3), 0.0
    penetration = -signed
    k = min(surface.stiffness, cfg.max_stiffness)
    return k * penetration * normal, penetration


def friction_step(state: HapticDeviceState, normal_force,
                  tangential_spring: float, surface: SurfaceParams) -> HapticDeviceState:
    """One stick/slip update of the proxy.

    The proxy holds while the demanded tangential spring force stays inside
    the static friction cone; otherwise it slides along the force direction
    until the dynamic-friction magnitude is met.
    """
    fn = np.asarray(normal_force, dtype=float)
    fn_mag = float(np.linalg.norm(fn))
    if fn_mag <= 0:
        raise NotInContact("friction_step requires contact (|normal_force| > 0)")
    n_hat = fn / fn_mag

    device, proxy = state.position, state.proxy
    projected = device - float((device - proxy) @ n_hat) * n_hat
    ft = tangential_spring * (projected - proxy)
    ft_mag = float(np.linalg.norm(ft))

    if ft_mag <= surface.static_friction * fn_mag:
        out = fn + ft
        return replace(state, output_force=out, sticking=True)

    limit = surface.dynamic_friction * fn_mag
    if ft_mag > 1e-15:
        ft_hat = ft / ft_mag
        new_proxy = projected - (limit / tangential_spring) * ft_hat
        tangential = limit * ft_hat
    else:
        new_proxy = projected
        tangential = np.zeros(3)
    return replace(state, proxy=new_proxy, output_force=fn + tangential,
                   sticking=False)
