/** Scene view model: turns snapshots into a rendered frame description
 * (posed solids, collision warning, electrolysis colors, bulb glow).
 *
 * The renderer proper is the thin DOM/WebGL layer; everything testable
 * lives here. A snapshot applied before renderFrame() is guaranteed to be
 * fully reflected in that frame, so a colliding snapshot shows its warning
 * within one rendered frame.
 */
import type { CollisionPair, Snapshot } from './types'

/** Species color legend for the electrolysis view. */
export const SPECIES_COLORS: Record<string, string> = {
  NaClMolecule: '#ffffff',
  NaIon: '#b39ddb',
  ClIon: '#aed581',
  NaAtom: '#7e57c2',
  ClAtom: '#9ccc65',
  Cl2Molecule: '#558b2f',
}

export interface PosedSolid {
  name: string
  shape: string
  params: Record<string, unknown>
  transform: number[]
}

export interface ParticleDot {
  color: string
  position: number[]
  evaporated: boolean
}

export interface RenderedFrame {
  tick: number
  solids: PosedSolid[]
  warningVisible: boolean
  warningPairs: CollisionPair[]
  particles: ParticleDot[]
  bulbGlow: number
  hydraulicsReadout: string
}

export class SceneViewModel {
  private latest: Snapshot | null = null
  lastRenderedTick = -1

  /** Store the newest snapshot; stale (non-monotone) ticks are ignored. */
  applySnapshot(snapshot: Snapshot): boolean {
    if (this.latest !== null && snapshot.tick <= this.latest.tick) {
      return false
    }
    this.latest = snapshot
    return true
  }

  /** Produce the frame for the latest applied snapshot. */
  renderFrame(): RenderedFrame | null {
    const snap = this.latest
    if (snap === null) return null
    this.lastRenderedTick = snap.tick
    const solids = snap.linac.parts.map((p) => ({
      name: p.name,
      shape: p.shape,
      params: p.params,
      transform: p.transform,
    }))
    const particles = snap.electrolysis.particles.map((p) => ({
      color: SPECIES_COLORS[p.species] ?? '#888888',
      position: p.position,
      evaporated: p.phase === 'evaporated',
    }))
    const h = snap.hydraulics
    return {
      tick: snap.tick,
      solids,
      warningVisible: snap.linac.colliding,
      warningPairs: snap.linac.pairs,
      particles,
      bulbGlow: snap.electrolysis.bulb_intensity,
      hydraulicsReadout:
        `hold ${h.required_force_n.toFixed(2)} N ` +
        `(load ${h.load_mass.toFixed(1)} kg, lift ${(h.piston_out_pos * 1000).toFixed(1)} mm)`,
    }
  }
}

/** Raises a banner when no snapshot has arrived for longer than the
 * threshold (default 2 s). Clock injectable for tests. */
export class StalenessMonitor {
  private lastSeenAt: number | null = null

  constructor(
    private readonly thresholdMs = 2000,
    private readonly now: () => number = () => Date.now(),
  ) {}

  noteSnapshot(): void {
    this.lastSeenAt = this.now()
  }

  isStale(): boolean {
    if (this.lastSeenAt === null) return false
    return this.now() - this.lastSeenAt > this.thresholdMs
  }
}
