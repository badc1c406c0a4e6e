"""Acceptance gate: one test per headline criterion, each printing a
single pass/fail line.  Tolerances are part of the criteria and must not
be loosened."""
import math
import time
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

SCENES = Path(__file__).parent.parent / "scenes"


def _report(name: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {name}"
    if detail:
        line += f" ({detail})"
    print(line)
    assert ok, line


def test_parser_fidelity():
    from virtlab.x3d import NodeKind, documents_equal, parse_x3d, serialize_x3d

    t0 = time.perf_counter()

    doc = parse_x3d((SCENES / "haptic_device.x3d").read_text())
    device = next(n for n in doc.walk() if n.kind is NodeKind.HLHapticsDevice)
    cal_ok = device.fields["positionCalibration"].values == (
        1e-3, 0, 0, -0.15, 0, 2e-3, 0, 0.05, 0, 0, 1e-3, 0, 0, 0, 0, 1)

    doc2 = parse_x3d((SCENES / "dynamic_cylinder.x3d").read_text())
    dyn = doc2.defs["DYN1"]
    surface = next(n for n in doc2.walk()
                   if n.kind is NodeKind.FrictionalSurface)
    cyl = doc2.defs["LEFTCYL"]
    values_ok = (dyn.fields["mass"].value == 0.05
                 and surface.fields["dynamicFriction"].value == 0.6
                 and surface.fields["staticFriction"].value == 0.2
                 and cyl.fields["height"].value == 0.085
                 and cyl.fields["radius"].value == 0.045)

    corpus = sorted(SCENES.rglob("*.x3d"))
    round_trip_ok = len(corpus) >= 20
    for path in corpus:
        d1 = parse_x3d(path.read_text())
        text = serialize_x3d(d1)
        d2 = parse_x3d(text)
        round_trip_ok &= documents_equal(d1, d2) and serialize_x3d(d2) == text

    elapsed = time.perf_counter() - t0
    _report("parser fidelity",
            cal_ok and values_ok and round_trip_ok and elapsed < 1.0,
            f"{len(corpus)} files round-tripped in {elapsed:.3f}s")


def test_calibration():
    from virtlab.haptics import calibrate_position

    cal = np.array([[1e-3, 0, 0, -0.15],
                    [0, 2e-3, 0, 0.05],
                    [0, 0, 1e-3, 0],
                    [0, 0, 0, 1]])
    a = calibrate_position((0, 0, 0), cal)
    b = calibrate_position((150, -25, 0), cal)
    err = max(float(np.max(np.abs(a - [-0.15, 0.05, 0]))),
              float(np.max(np.abs(b - [0, 0, 0]))))
    _report("calibration", err <= 1e-12, f"max error {err:.1e}")


def test_haptic_clamps():
    from virtlab.haptics import HapticDeviceConfig, constrain_state

    cfg = HapticDeviceConfig()
    rng = np.random.default_rng(0)
    lo = np.asarray(cfg.workspace_min)
    hi = np.asarray(cfg.workspace_max)
    res = cfg.position_resolution
    violations = 0
    for _ in range(100_000):
        p, f = constrain_state(rng.uniform(-1, 1, 3), rng.uniform(-40, 40, 3),
                               cfg)
        if np.any(p < lo - 1e-12) or np.any(p > hi + 1e-12):
            violations += 1
        elif any(abs(x / res - round(x / res)) > 1e-6 for x in p):
            violations += 1
        elif np.linalg.norm(f) > cfg.max_force + 1e-12:
            violations += 1
    _report("haptic clamps", violations == 0,
            f"{violations} violations in 100000 states")


def test_friction_cone():
    from virtlab.haptics import (HapticDeviceState, SurfaceParams,
                                 friction_step)

    rng = np.random.default_rng(1)
    worst = 0.0
    ok = True
    for _ in range(50):
        surface = SurfaceParams(static_friction=rng.uniform(0.1, 1.0),
                                dynamic_friction=rng.uniform(0.05, 0.8))
        state = HapticDeviceState(position=rng.uniform(-0.02, 0.02, 3),
                                  proxy=rng.uniform(-0.02, 0.02, 3))
        spring = rng.uniform(50, 800)
        for _ in range(200):
            state = replace(state,
                            position=state.position + rng.uniform(-2e-3, 2e-3, 3))
            fn = np.array([0.0, rng.uniform(0.2, 4.0), 0.0])
            state = friction_step(state, fn, spring, surface)
            ft = float(np.linalg.norm(state.output_force - fn))
            fn_mag = float(np.linalg.norm(fn))
            if state.sticking:
                ok &= ft <= surface.static_friction * fn_mag + 1e-9
            else:
                err = abs(ft - surface.dynamic_friction * fn_mag)
                worst = max(worst, err)
                ok &= err <= 1e-9
    _report("friction cone", ok, f"worst slip error {worst:.1e}")


def test_dynamics():
    from virtlab.dynamics import RigidBodyState, Wrench, step_rigid_body
    from virtlab.geometry import Plane, point_query

    dt = 1e-3

    s = RigidBodyState(mass=0.05)
    for _ in range(1000):
        s = step_rigid_body(s, Wrench(force=(0.05, 0, 0)), dt)
    v_err = abs(s.linear_velocity[0] - 1.0)
    v_ok = v_err <= 1e-12

    s = RigidBodyState(linear_velocity=np.array([0.4, -0.2, 0.1]),
                       angular_velocity=np.array([1.0, 2.0, 3.0]))
    p0 = s.mass * s.linear_velocity
    L0 = s.inertia @ s.angular_velocity
    for _ in range(10_000):
        s = step_rigid_body(s, Wrench(), dt)
    mom_err = max(float(np.max(np.abs(s.mass * s.linear_velocity - p0))),
                  float(np.max(np.abs(s.inertia @ s.angular_velocity - L0))))
    mom_ok = mom_err <= 1e-6

    g, k, damping = 9.81, 1000.0, 2.0
    floor = Plane((0, 1, 0), 0.0)
    s = RigidBodyState(position=np.array([0.0, 0.05, 0.0]), mass=0.05)

    def energy(state):
        signed, _, _ = point_query(floor, np.eye(4), state.position)
        pen = max(0.0, -signed)
        return (state.mass * g * state.position[1]
                + 0.5 * state.mass * float(state.linear_velocity
                                           @ state.linear_velocity)
                + 0.5 * k * pen * pen)

    e0 = energy(s)
    emax = e0
    for _ in range(4000):
        signed, _, n = point_query(floor, np.eye(4), s.position)
        f = np.array([0.0, -s.mass * g, 0.0])
        if signed < 0:
            f += (-signed) * k * n - damping * s.linear_velocity
        s = step_rigid_body(s, Wrench(force=tuple(f)), dt)
        emax = max(emax, energy(s))
    growth = (emax - e0) / e0
    bounce_ok = growth <= 0.01

    _report("dynamics", v_ok and mom_ok and bounce_ok,
            f"v err {v_err:.1e}, momentum err {mom_err:.1e}, "
            f"energy growth {growth:.2%}")


def test_collision_oracle():
    from virtlab.linac import (BeamArrangement, LinacConfiguration,
                               check_collision, part_world_transform,
                               reference_geometry, sweep_beam_arrangement)

    import oracle

    t0 = time.perf_counter()
    geo = reference_geometry()
    frame_group = {"room": "room", "gantry": "machine",
                   "collimator": "machine", "couch": "couch"}
    n = 100_000
    tol = 2 * math.sqrt(max(oracle.surface_area(p.shape)
                            for p in geo.all_parts()) / n)
    rng = np.random.default_rng(42)
    matches = 0
    for trial in range(100):
        cfg = LinacConfiguration(
            gantry_deg=rng.uniform(0, 360),
            couch_rotation_deg=rng.uniform(0, 360),
            couch_vertical_m=rng.uniform(0, 0.5),
            couch_longitudinal_m=rng.uniform(-0.5, 0.5),
            couch_lateral_m=rng.uniform(-0.2, 0.2),
        )
        posed = [(p.name, p.frame, p.shape, part_world_transform(cfg, p))
                 for p in geo.all_parts()]
        expected = oracle.oracle_config_colliding(posed, frame_group,
                                                  clearance=tol, n=n,
                                                  seed=trial)
        got = check_collision(cfg, geo, clearance=tol).colliding
        matches += expected == got

    start = LinacConfiguration(gantry_deg=0.0)
    end = replace(start, gantry_deg=359.0)
    sweep = sweep_beam_arrangement(
        BeamArrangement(control_points=(start, end), arc=True,
                        arc_step_deg=1.0), geo)
    intervals = sweep.colliding_intervals
    sweep_ok = (len(intervals) == 1
                and intervals[0][0] <= 180.0 <= intervals[0][1])

    elapsed = time.perf_counter() - t0
    _report("collision oracle",
            matches == 100 and sweep_ok and elapsed < 60.0,
            f"{matches}/100 oracle matches, arc intervals {intervals}, "
            f"{elapsed:.1f}s")


def test_electrolysis():
    from virtlab.electrolysis import (Phase, Species, census, charge_balance,
                                      cl_nuclei, init_electrolysis,
                                      is_quiescent, na_nuclei,
                                      step_electrolysis)

    def run(n, seed, dt=0.05, check=True):
        state = init_electrolysis(n, seed=seed)
        state.powered = True
        na0, cl0 = na_nuclei(state), cl_nuclei(state)
        while not is_quiescent(state):
            state = step_electrolysis(state, dt)
            if check:
                assert na_nuclei(state) == na0
                assert cl_nuclei(state) == cl0
                assert charge_balance(state) == 0
            assert state.tick < 500_000
        return state

    end = run(10, seed=1)
    c = census(end)
    stoich_ok = (c.count(Species.NaAtom, Phase.at_cathode) == 10
                 and c.count(Species.Cl2Molecule, Phase.evaporated) == 5)

    conserve_ok = True
    for n in (0, 1, 7, 10, 100):
        end = run(n, seed=n)
        conserve_ok &= na_nuclei(end) == n and cl_nuclei(end) == n
        conserve_ok &= charge_balance(end) == 0

    def trace(seed):
        state = init_electrolysis(8, seed=seed)
        state.powered = True
        out = []
        for _ in range(400):
            state = step_electrolysis(state, 1e-3)
            out.append(tuple((p.species, p.phase, p.position)
                             for p in state.particles))
        return out

    deterministic = trace(5) == trace(5)

    _report("electrolysis",
            stoich_ok and conserve_ok and deterministic,
            "10 Na at cathode + 5 Cl2 evaporated; conservation at every tick "
            "for n in {0,1,7,10,100}; seed-deterministic")


def test_hydraulics():
    from virtlab.hydraulics import (HydraulicSystem, lift_step, pressure,
                                    transmit_force)

    rng = np.random.default_rng(2)
    worst = 0.0
    ok = True
    for _ in range(1000):
        a_in = rng.uniform(1e-4, 1e-2)
        a_out = rng.uniform(1e-4, 1e-2)
        force = rng.uniform(0.1, 100.0)
        d_in = rng.uniform(-0.09, 0.09)
        sys = HydraulicSystem(area_in=a_in, area_out=a_out, stroke_limit=10.0)

        rel = abs(pressure(force, a_in) - force / a_in) / (force / a_in)
        worst = max(worst, rel)

        f_out = transmit_force(sys, force)
        rel = abs(f_out - force * a_out / a_in) / abs(force * a_out / a_in)
        worst = max(worst, rel)

        moved = lift_step(sys, d_in)
        swept_in = moved.area_in * moved.piston_in_pos
        swept_out = moved.area_out * moved.piston_out_pos
        rel = abs(swept_in - swept_out) / max(abs(swept_in), 1e-300)
        worst = max(worst, rel)

        work_in = force * d_in
        work_out = f_out * moved.piston_out_pos
        rel = abs(work_out - work_in) / max(abs(work_in), 1e-300)
        worst = max(worst, rel)

        ok &= worst <= 1e-12
    _report("hydraulics", ok, f"worst relative error {worst:.1e}")


def test_server_headless():
    from fastapi.testclient import TestClient

    from virtlab.server import create_app
    from virtlab.simloop import SimulationLoop

    import tempfile

    with tempfile.TemporaryDirectory() as tmp:
        attachments = Path(tmp)
        loop = SimulationLoop(scenes_dir=SCENES, attachments_dir=attachments)
        with TestClient(create_app(loop, run_thread=False)) as client:
            read_through = client.get("/api/attachments").json() == []
            (attachments / "live.x3d").write_text("<Scene/>")
            read_through &= client.get("/api/attachments").json() == ["live"]

            ticks = [client.get("/api/state").json()["tick"]]
            for _ in range(4):
                loop.step(3)
                loop.publish_snapshot()
                ticks.append(client.get("/api/state").json()["tick"])
            monotone = all(b > a for a, b in zip(ticks, ticks[1:]))

            client.post("/api/command",
                        json={"target": "linac_axis", "axis": "gantry",
                              "value": 180.0})
            client.post("/api/command",
                        json={"target": "linac_axis",
                              "axis": "couch_vertical", "value": 0.5})
            pre = client.get("/api/state").json()["linac"]["config"]
            atomic = pre["gantry_deg"] == 0.0  # nothing applied mid-tick
            loop.step(1)
            loop.publish_snapshot()
            post = client.get("/api/state").json()["linac"]
            atomic &= (post["config"]["gantry_deg"] == 180.0
                       and post["config"]["couch_vertical_m"] == 0.5
                       and post["colliding"] is True)

    _report("server", read_through and monotone and atomic,
            "read-through listing, monotone ticks, per-tick atomic commands")
