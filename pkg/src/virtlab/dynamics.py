"""Rigid-body motion for dynamic scene nodes.

Semi-implicit (symplectic) Euler at the shared fixed tick: velocities are
updated from the applied wrench first, then poses from the new velocities.
Orientation is integrated with the quaternion exponential and renormalized
every step to bound drift.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np


class NonFiniteInput(Exception):
    pass


@dataclass
class RigidBodyState:
    position: np.ndarray = field(default_factory=lambda: np.zeros(3))
    orientation: np.ndarray = field(default_factory=lambda: np.array([1.0, 0, 0, 0]))  # w x y z
    linear_velocity: np.ndarray = field(default_factory=lambda: np.zeros(3))
    angular_velocity: np.ndarray = field(default_factory=lambda: np.zeros(3))
    mass: float = 1.0
    inertia: np.ndarray = field(default_factory=lambda: 0.1 * np.eye(3))

    def __post_init__(self):
        if self.mass <= 0:
            raise ValueError("mass must be > 0")
        inertia = np.asarray(self.inertia, dtype=float)
        if not np.allclose(inertia, inertia.T):
            raise ValueError("inertia tensor must be symmetric")
        if np.any(np.linalg.eigvalsh(inertia) <= 0):
            raise ValueError("inertia tensor must be positive-definite")
        self.inertia = inertia


@dataclass(frozen=True)
class Wrench:
    force: tuple = (0.0, 0.0, 0.0)
    torque: tuple = (0.0, 0.0, 0.0)


def quat_multiply(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return np.array([
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    ])


def quat_exp(omega: np.ndarray, dt: float) -> np.ndarray:
    """Unit quaternion for a rotation of |omega|*dt about omega."""
    angle = float(np.linalg.norm(omega)) * dt
    if angle < 1e-18:
        return np.array([1.0, 0.0, 0.0, 0.0])
    axis = omega / np.linalg.norm(omega)
    half = angle / 2.0
    s = math.sin(half)
    return np.array([math.cos(half), axis[0] * s, axis[1] * s, axis[2] * s])


def quat_to_matrix(q: np.ndarray) -> np.ndarray:
    w, x, y, z = q
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


def step_rigid_body(state: RigidBodyState, wrench: Wrench, dt: float) -> RigidBodyState:
    """Advance one fixed step: v += (F/m)dt; x += v dt;
    ω += I⁻¹(τ − ω×Iω)dt; orientation by quaternion exponential."""
    if dt <= 0:
        raise ValueError("dt must be > 0")
    force = np.asarray(wrench.force, dtype=float)
    torque = np.asarray(wrench.torque, dtype=float)
    if not (np.all(np.isfinite(force)) and np.all(np.isfinite(torque))):
        raise NonFiniteInput("wrench components must be finite")

    v = state.linear_velocity + (force / state.mass) * dt
    x = state.position + v * dt

    inertia = state.inertia
    omega = state.angular_velocity
    gyro = np.cross(omega, inertia @ omega)
    omega_new = omega + np.linalg.solve(inertia, torque - gyro) * dt
    dq = quat_exp(omega_new, dt)
    q = quat_multiply(dq, state.orientation)
    q = q / np.linalg.norm(q)

    return replace(state, position=x, linear_velocity=v,
                   angular_velocity=omega_new, orientation=q)
