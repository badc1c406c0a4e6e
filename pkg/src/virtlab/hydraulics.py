"""Pascal's-principle hydraulics: pressure measurement, force
transmission between pistons, and quasi-static lifting.

The fluid is incompressible, so area_in * piston_in_pos always equals
area_out * piston_out_pos; there is no inertia or damping.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Tuple

import numpy as np

from .haptics import HapticDeviceConfig, constrain_state

GRAVITY = 9.81


class NonPositiveArea(Exception):
    pass


class StrokeLimitExceeded(Exception):
    pass


@dataclass(frozen=True)
class HydraulicSystem:
    area_in: float = 0.001       # m^2
    area_out: float = 0.01       # m^2
    piston_in_pos: float = 0.0   # m, + = pushed in
    piston_out_pos: float = 0.0  # m, + = lifted
    load_mass: float = 0.0       # kg on the output piston
    fluid_volume: float = 1e-3   # m^3, constant
    stroke_limit: float = 0.1    # m, per piston, either direction

    def __post_init__(self):
        if self.area_in <= 0 or self.area_out <= 0:
            raise NonPositiveArea("piston areas must be > 0")


def pressure(force: float, area: float) -> float:
    """P = F / A, in pascals."""
    if area <= 0:
        raise NonPositiveArea(f"area must be > 0, got {area}")
    return force / area


def transmit_force(sys: HydraulicSystem, input_force: float) -> float:
    """Force at the output piston under equal pressure: F * A_out / A_in."""
    return input_force * sys.area_out / sys.area_in


def lift_step(sys: HydraulicSystem, input_displacement: float) -> HydraulicSystem:
    """Push the input piston; the output piston rises by the volume-conserving
    amount d_in * A_in / A_out."""
    new_in = sys.piston_in_pos + input_displacement
    new_out = new_in * sys.area_in / sys.area_out
    if abs(new_in) > sys.stroke_limit or abs(new_out) > sys.stroke_limit:
        raise StrokeLimitExceeded(
            f"displacement {input_displacement} exceeds stroke limit "
            f"{sys.stroke_limit}")
    return replace(sys, piston_in_pos=new_in, piston_out_pos=new_out)


def haptic_resistance(sys: HydraulicSystem, gravity: float = GRAVITY,
                      cfg: HapticDeviceConfig = None) -> Tuple[float, float]:
    """Force the user must hold on the input piston to support the load.

    Returns (required_force, delivered_force): the physical requirement
    m*g*A_in/A_out, and the same force after the device's max_force clamp
    (equal when no device config is given).
    """
    required = sys.load_mass * gravity * sys.area_in / sys.area_out
    if cfg is None:
        return required, required
    _, clamped = constrain_state(np.zeros(3), np.array([0.0, 0.0, required]), cfg)
    return required, float(np.linalg.norm(clamped))
