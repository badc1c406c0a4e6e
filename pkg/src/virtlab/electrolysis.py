"""Agent-based NaCl electrolysis.

Molecules dissociate on seeded exponential timers, the ions drift in a
straight line to their electrode, sodium neutralizes at the cathode,
chlorine neutralizes at the anode and pairs into Cl2 which rises out of
the tank.  Everything is deterministic for a given seed, and sodium and
chlorine nuclei are conserved through every transition.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

DISSOCIATION_RATE = 0.5   # 1/s at speed 1
DRIFT_SPEED = 0.02        # m/s at speed 1
CONTACT_EPS = 0.01        # electrode capture distance, m


class Species(Enum):
    NaClMolecule = "NaClMolecule"
    NaIon = "NaIon"
    ClIon = "ClIon"
    NaAtom = "NaAtom"
    ClAtom = "ClAtom"
    Cl2Molecule = "Cl2Molecule"


class Phase(Enum):
    dissolved = "dissolved"
    at_cathode = "at_cathode"
    at_anode = "at_anode"
    evaporated = "evaporated"


# nuclei carried per particle: (Na, Cl)
NUCLEI = {
    Species.NaClMolecule: (1, 1),
    Species.NaIon: (1, 0),
    Species.ClIon: (0, 1),
    Species.NaAtom: (1, 0),
    Species.ClAtom: (0, 1),
    Species.Cl2Molecule: (0, 2),
}

CHARGE = {
    Species.NaClMolecule: 0,
    Species.NaIon: +1,
    Species.ClIon: -1,
    Species.NaAtom: 0,
    Species.ClAtom: 0,
    Species.Cl2Molecule: 0,
}


@dataclass
class Particle:
    species: Species
    position: tuple
    phase: Phase = Phase.dissolved
    timer: float = 0.0  # time to dissociation, NaClMolecule only

    def __post_init__(self):
        if self.phase is Phase.evaporated and self.species is not Species.Cl2Molecule:
            raise ValueError("only Cl2 molecules evaporate")


@dataclass
class ElectrolysisState:
    particles: list = field(default_factory=list)
    tank_min: tuple = (-0.1, -0.1, -0.1)
    tank_max: tuple = (0.1, 0.1, 0.1)
    cathode_pos: tuple = (-0.09, 0.0, 0.0)
    anode_pos: tuple = (0.09, 0.0, 0.0)
    speed: float = 1.0
    tick: int = 0
    powered: bool = False
    electrons_absorbed_cathode: int = 0
    electrons_released_anode: int = 0
    seed: int = 0


@dataclass(frozen=True)
class Census:
    counts: tuple  # ((species, phase, count), ...)
    bulb_intensity: float

    def count(self, species: Species, phase=None) -> int:
        return sum(c for s, p, c in self.counts
                   if s == species and (phase is None or p == phase))


def init_electrolysis(n_molecules: int, seed: int = 0,
                      speed: float = 1.0) -> ElectrolysisState:
    """Seed a tank with n NaCl molecules at pseudo-random positions."""
    if n_molecules < 0:
        raise ValueError("n_molecules must be >= 0")
    rng = random.Random(seed)
    state = ElectrolysisState(speed=speed, seed=seed)
    lo, hi = state.tank_min, state.tank_max
    particles = []
    for _ in range(n_molecules):
        pos = tuple(rng.uniform(lo[i], hi[i]) for i in range(3))
        timer = rng.expovariate(DISSOCIATION_RATE)
        particles.append(Particle(Species.NaClMolecule, pos, timer=timer))
    state.particles = particles
    return state


def _toward(pos, target, step: float) -> tuple:
    p, t = np.asarray(pos), np.asarray(target)
    delta = t - p
    dist = float(np.linalg.norm(delta))
    if dist <= step:
        return tuple(t)
    return tuple(p + delta * (step / dist))


def step_electrolysis(state: ElectrolysisState, dt: float) -> ElectrolysisState:
    """Advance one tick; with power off only the tick counter moves."""
    if dt <= 0:
        raise ValueError("dt must be > 0")
    if not state.powered:
        return replace(state, tick=state.tick + 1)

    step = DRIFT_SPEED * state.speed * dt
    absorbed = state.electrons_absorbed_cathode
    released = state.electrons_released_anode
    particles: list = []
    for p in state.particles:
        if p.species is Species.NaClMolecule:
            timer = p.timer - dt * state.speed
            if timer <= 0:
                particles.append(Particle(Species.NaIon, p.position))
                particles.append(Particle(Species.ClIon, p.position))
            else:
                particles.append(Particle(p.species, p.position, timer=timer))
        elif p.species is Species.NaIon:
            pos = _toward(p.position, state.cathode_pos, step)
            if np.linalg.norm(np.asarray(pos) - np.asarray(state.cathode_pos)) <= CONTACT_EPS:
                absorbed += 1
                particles.append(Particle(Species.NaAtom, state.cathode_pos,
                                          phase=Phase.at_cathode))
            else:
                particles.append(Particle(p.species, pos))
        elif p.species is Species.ClIon:
            pos = _toward(p.position, state.anode_pos, step)
            if np.linalg.norm(np.asarray(pos) - np.asarray(state.anode_pos)) <= CONTACT_EPS:
                released += 1
                particles.append(Particle(Species.ClAtom, state.anode_pos,
                                          phase=Phase.at_anode))
            else:
                particles.append(Particle(p.species, pos))
        elif p.species is Species.Cl2Molecule and p.phase is Phase.at_anode:
            x, y, z = p.position
            z += step
            if z > state.tank_max[2]:
                particles.append(Particle(Species.Cl2Molecule, (x, y, z),
                                          phase=Phase.evaporated))
            else:
                particles.append(Particle(Species.Cl2Molecule, (x, y, z),
                                          phase=Phase.at_anode))
        else:
            particles.append(p)

    # pair neutral chlorine at the anode, in deterministic list order
    cl_indices = [i for i, p in enumerate(particles)
                  if p.species is Species.ClAtom and p.phase is Phase.at_anode]
    consumed = set()
    for a, b in zip(cl_indices[::2], cl_indices[1::2]):
        consumed.add(b)
        particles[a] = Particle(Species.Cl2Molecule, particles[a].position,
                                phase=Phase.at_anode)
    particles = [p for i, p in enumerate(particles) if i not in consumed]

    return replace(state, particles=particles, tick=state.tick + 1,
                   electrons_absorbed_cathode=absorbed,
                   electrons_released_anode=released)


def na_nuclei(state: ElectrolysisState) -> int:
    return sum(NUCLEI[p.species][0] for p in state.particles)


def cl_nuclei(state: ElectrolysisState) -> int:
    return sum(NUCLEI[p.species][1] for p in state.particles)


def charge_balance(state: ElectrolysisState) -> int:
    """(#Na+ − #Cl−) + (electrons absorbed − electrons released); 0 always."""
    ions = sum(CHARGE[p.species] for p in state.particles)
    return ions + state.electrons_absorbed_cathode - state.electrons_released_anode


def census(state: ElectrolysisState) -> Census:
    """Species/phase counts plus the bulb (current) indicator."""
    tally: dict = {}
    for p in state.particles:
        key = (p.species, p.phase)
        tally[key] = tally.get(key, 0) + 1
    migrating = sum(c for (s, _), c in tally.items()
                    if s in (Species.NaIon, Species.ClIon))
    pairs = (na_nuclei(state) + cl_nuclei(state)) / 2
    if migrating == 0 or pairs == 0 or not state.powered:
        bulb = 0.0
    else:
        bulb = min(1.0, migrating / pairs)
    counts = tuple(sorted(((s, p, c) for (s, p), c in tally.items()),
                          key=lambda e: (e[0].value, e[1].value)))
    return Census(counts=counts, bulb_intensity=bulb)


def is_quiescent(state: ElectrolysisState) -> bool:
    """No molecules left to split, no ions in flight, no Cl2 still rising."""
    for p in state.particles:
        if p.species in (Species.NaClMolecule, Species.NaIon, Species.ClIon):
            return False
        if p.species is Species.Cl2Molecule and p.phase is not Phase.evaporated:
            return False
        if p.species is Species.ClAtom and p.phase is Phase.at_anode:
            # an unpaired odd atom can never react further; still quiescent
            continue
    counts = {}
    for p in state.particles:
        if p.species is Species.ClAtom and p.phase is Phase.at_anode:
            counts["cl"] = counts.get("cl", 0) + 1
    return counts.get("cl", 0) <= 1
