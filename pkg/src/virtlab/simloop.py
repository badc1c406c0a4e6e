"""Fixed-timestep simulation loop with a between-tick command queue.

One thread owns all mutable simulation state.  Network handlers enqueue
commands and read the latest published snapshot; commands are drained at
tick boundaries, so state transitions are whole-tick atomic.
"""
from __future__ import annotations

import queue
import threading
import time
from dataclasses import asdict, replace
from pathlib import Path
from typing import Optional

import numpy as np

from . import electrolysis, hydraulics, linac
from .scene import FieldUpdate, apply_update
from .x3d import SFFloat, SFRotation, SFString, SFVec3f, parse_x3d


class UnknownTarget(Exception):
    pass


class ValidationFailed(Exception):
    pass


def _field_value_from_wire(raw):
    """Wire field values: float, [x,y,z], [x,y,z,angle], or string."""
    if isinstance(raw, (int, float)):
        return SFFloat(float(raw))
    if isinstance(raw, str):
        return SFString(raw)
    if isinstance(raw, (list, tuple)):
        if len(raw) == 3:
            return SFVec3f(*(float(v) for v in raw))
        if len(raw) == 4:
            return SFRotation(*(float(v) for v in raw))
    raise ValidationFailed(f"cannot interpret field value {raw!r}")


class SimulationLoop:
    def __init__(self, scenes_dir=None, attachments_dir=None,
                 tick_hz: int = 1000, publish_hz: int = 30, seed: int = 0,
                 clearance: float = 0.0):
        self.scenes_dir = Path(scenes_dir) if scenes_dir else None
        self.attachments_dir = Path(attachments_dir) if attachments_dir else None
        self.tick_hz = tick_hz
        self.publish_hz = publish_hz
        self.dt = 1.0 / tick_hz
        self.seed = seed
        self.clearance = clearance

        self.tick = 0
        self.linac_cfg = linac.LinacConfiguration()
        self.linac_geo = linac.reference_geometry()
        self.electrolysis = electrolysis.init_electrolysis(10, seed=seed)
        self.hydraulics = hydraulics.HydraulicSystem()
        self.documents: dict = {}
        if self.scenes_dir and self.scenes_dir.is_dir():
            for path in sorted(self.scenes_dir.glob(f"*{linac.SCENE_EXTENSION}")):
                self.documents[path.stem] = parse_x3d(path.read_text())

        self._commands: queue.SimpleQueue = queue.SimpleQueue()
        self._snapshot_lock = threading.Lock()
        self._latest_snapshot: Optional[dict] = None
        self._stop = threading.Event()
        self._thread: Optional[threading.Thread] = None
        self.publish_snapshot()

    # -- command handling ---------------------------------------------------

    def handle_command(self, command: dict) -> dict:
        """Queue a validated command; it applies at the next tick boundary."""
        self._validate(command)
        self._commands.put(command)
        return {"status": "queued", "apply_tick": self.tick + 1}

    def _validate(self, command: dict) -> None:
        target = command.get("target")
        if target == "linac_axis":
            try:
                axis = linac.Axis(command["axis"])
            except (KeyError, ValueError):
                raise ValidationFailed(f"bad axis {command.get('axis')!r}") from None
            value = command.get("value")
            if not isinstance(value, (int, float)) or value != value:
                raise ValidationFailed(f"bad axis value {value!r}")
        elif target == "electrolysis":
            action = command.get("action")
            if action not in ("start", "stop", "reset", "set_speed"):
                raise ValidationFailed(f"bad electrolysis action {action!r}")
            if action == "set_speed":
                speed = command.get("speed")
                if not isinstance(speed, (int, float)) or speed < 0:
                    raise ValidationFailed("speed must be >= 0")
            if action == "reset" and (command.get("n") or 0) < 0:
                raise ValidationFailed("n must be >= 0")
        elif target == "hydraulics":
            action = command.get("action")
            if action not in ("push", "set_load"):
                raise ValidationFailed(f"bad hydraulics action {action!r}")
            if action == "push" and not isinstance(command.get("displacement"),
                                                   (int, float)):
                raise ValidationFailed("push needs a displacement")
            if action == "set_load":
                mass = command.get("mass")
                if not isinstance(mass, (int, float)) or mass < 0:
                    raise ValidationFailed("set_load needs a mass >= 0")
        elif target == "scene_field":
            for key in ("scene", "path", "field", "value"):
                if key not in command:
                    raise ValidationFailed(f"scene_field command missing {key!r}")
            if command["scene"] not in self.documents:
                raise ValidationFailed(f"unknown scene {command['scene']!r}")
            _field_value_from_wire(command["value"])
        elif target == "attachment":
            if not isinstance(command.get("name"), str):
                raise ValidationFailed("attachment command needs a name")
            if self.attachments_dir is None:
                raise ValidationFailed("no attachment registry configured")
        else:
            raise UnknownTarget(f"unknown command target {target!r}")

    def _apply(self, command: dict) -> None:
        target = command["target"]
        if target == "linac_axis":
            self.linac_cfg = linac.set_axis(
                self.linac_cfg, linac.Axis(command["axis"]), command["value"])
        elif target == "electrolysis":
            action = command["action"]
            if action == "start":
                self.electrolysis = replace(self.electrolysis, powered=True)
            elif action == "stop":
                self.electrolysis = replace(self.electrolysis, powered=False)
            elif action == "set_speed":
                self.electrolysis = replace(self.electrolysis,
                                            speed=float(command["speed"]))
            elif action == "reset":
                n = command.get("n")
                seed = command.get("seed")
                self.electrolysis = electrolysis.init_electrolysis(
                    10 if n is None else int(n),
                    seed=self.seed if seed is None else int(seed),
                    speed=self.electrolysis.speed)
        elif target == "hydraulics":
            if command["action"] == "push":
                try:
                    self.hydraulics = hydraulics.lift_step(
                        self.hydraulics, float(command["displacement"]))
                except hydraulics.StrokeLimitExceeded:
                    pass  # piston pinned at its limit; ignore the push
            else:
                self.hydraulics = replace(self.hydraulics,
                                          load_mass=float(command["mass"]))
        elif target == "scene_field":
            update = FieldUpdate(
                path=command["path"], field=command["field"],
                value=_field_value_from_wire(command["value"]), tick=self.tick)
            self.documents[command["scene"]] = apply_update(
                self.documents[command["scene"]], update)
        elif target == "attachment":
            if "linac_room" not in self.documents:
                from .x3d import Document, NodeKind
                from .x3d.model import make_node
                self.documents["linac_room"] = Document(root=make_node(NodeKind.Scene))
            new_doc, new_geo = linac.load_attachment(
                self.documents["linac_room"], self.linac_geo,
                command["name"], self.attachments_dir)
            self.documents["linac_room"] = new_doc
            self.linac_geo = new_geo

    # -- stepping ------------------------------------------------------------

    def step(self, n_ticks: int = 1) -> None:
        """Advance the simulation; commands drain at each tick boundary."""
        for _ in range(n_ticks):
            while True:
                try:
                    command = self._commands.get_nowait()
                except queue.Empty:
                    break
                self._apply(command)
            self.electrolysis = electrolysis.step_electrolysis(self.electrolysis,
                                                               self.dt)
            self.tick += 1

    # -- snapshots -----------------------------------------------------------

    def build_snapshot(self) -> dict:
        report = linac.check_collision(self.linac_cfg, self.linac_geo,
                                       self.clearance)
        parts = []
        for part in self.linac_geo.all_parts():
            tf = linac.part_world_transform(self.linac_cfg, part)
            shape = part.shape
            parts.append({
                "name": part.name,
                "frame": part.frame,
                "shape": type(shape).__name__,
                "params": asdict(shape),
                "transform": [float(v) for v in tf.ravel()],
            })
        cen = electrolysis.census(self.electrolysis)
        required, delivered = hydraulics.haptic_resistance(self.hydraulics)
        return {
            "tick": self.tick,
            "linac": {
                "config": {
                    "gantry_deg": self.linac_cfg.gantry_deg,
                    "collimator_deg": self.linac_cfg.collimator_deg,
                    "couch_rotation_deg": self.linac_cfg.couch_rotation_deg,
                    "couch_vertical_m": self.linac_cfg.couch_vertical_m,
                    "couch_longitudinal_m": self.linac_cfg.couch_longitudinal_m,
                    "couch_lateral_m": self.linac_cfg.couch_lateral_m,
                },
                "colliding": report.colliding,
                "pairs": [{"a": a, "b": b, "distance_m": d}
                          for a, b, d in report.pairs],
                "parts": parts,
            },
            "electrolysis": {
                "powered": self.electrolysis.powered,
                "speed": self.electrolysis.speed,
                "bulb_intensity": cen.bulb_intensity,
                "census": [{"species": s.value, "phase": p.value, "count": c}
                           for s, p, c in cen.counts],
                "particles": [{"species": p.species.value,
                               "phase": p.phase.value,
                               "position": list(p.position)}
                              for p in self.electrolysis.particles],
            },
            "hydraulics": {
                "area_in": self.hydraulics.area_in,
                "area_out": self.hydraulics.area_out,
                "piston_in_pos": self.hydraulics.piston_in_pos,
                "piston_out_pos": self.hydraulics.piston_out_pos,
                "load_mass": self.hydraulics.load_mass,
                "required_force_n": required,
            },
            "diagnostics": [],
        }

    def publish_snapshot(self) -> dict:
        snapshot = self.build_snapshot()
        with self._snapshot_lock:
            # ticks are strictly monotone across published snapshots; skip
            # republishing the same tick
            if (self._latest_snapshot is None
                    or snapshot["tick"] > self._latest_snapshot["tick"]):
                self._latest_snapshot = snapshot
            return self._latest_snapshot

    def latest_snapshot(self) -> Optional[dict]:
        with self._snapshot_lock:
            return self._latest_snapshot

    # -- real-time thread ----------------------------------------------------

    def start(self) -> None:
        if self._thread is not None:
            return
        self._stop.clear()
        self._thread = threading.Thread(target=self._run, daemon=True,
                                        name="virtlab-sim")
        self._thread.start()

    def stop(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=2.0)
            self._thread = None

    def _run(self) -> None:
        publish_every = max(1, self.tick_hz // self.publish_hz)
        next_time = time.perf_counter()
        since_publish = 0
        while not self._stop.is_set():
            self.step(1)
            since_publish += 1
            if since_publish >= publish_every:
                self.publish_snapshot()
                since_publish = 0
            next_time += self.dt
            delay = next_time - time.perf_counter()
            if delay > 0:
                time.sleep(delay)
            elif delay < -1.0:
                next_time = time.perf_counter()  # fell behind; resynchronize
