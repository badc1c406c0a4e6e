/** Wire types for the simulation server's external interface. */

export interface LinacConfig {
  gantry_deg: number
  collimator_deg: number
  couch_rotation_deg: number
  couch_vertical_m: number
  couch_longitudinal_m: number
  couch_lateral_m: number
}

export interface CollisionPair {
  a: string
  b: string
  distance_m: number
}

export interface LinacPart {
  name: string
  frame: string
  shape: string
  params: Record<string, unknown>
  transform: number[] // row-major 4x4
}

export interface ElectrolysisParticle {
  species: string
  phase: string
  position: number[]
}

export interface Snapshot {
  tick: number
  linac: {
    config: LinacConfig
    colliding: boolean
    pairs: CollisionPair[]
    parts: LinacPart[]
  }
  electrolysis: {
    powered: boolean
    speed: number
    bulb_intensity: number
    census: { species: string; phase: string; count: number }[]
    particles: ElectrolysisParticle[]
  }
  hydraulics: {
    area_in: number
    area_out: number
    piston_in_pos: number
    piston_out_pos: number
    load_mass: number
    required_force_n: number
  }
}

export type Command =
  | { target: 'linac_axis'; axis: string; value: number }
  | { target: 'electrolysis'; action: string; n?: number; seed?: number; speed?: number }
  | { target: 'hydraulics'; action: string; displacement?: number; mass?: number }
  | { target: 'attachment'; name: string }

export interface CommandAck {
  status: 'queued'
  apply_tick: number
}

export interface MeshSolid {
  shape: 'Sphere' | 'Cylinder' | 'Box'
  radius?: number
  height?: number
  size?: number[]
  transform: number[]
}

export interface MeshList {
  solids: MeshSolid[]
}
