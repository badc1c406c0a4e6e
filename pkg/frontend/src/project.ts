/** Minimal projection math for the canvas scene view: apply the server's
 * row-major 4x4 part transforms and project world points isometrically.
 */

export type Vec3 = [number, number, number]

export function applyTransform(transform: number[], p: Vec3): Vec3 {
  const [x, y, z] = p
  const t = transform
  return [
    t[0] * x + t[1] * y + t[2] * z + t[3],
    t[4] * x + t[5] * y + t[6] * z + t[7],
    t[8] * x + t[9] * y + t[10] * z + t[11],
  ]
}

export interface Camera {
  yawRad: number
  pitchRad: number
  scale: number // pixels per meter
  centerX: number
  centerY: number
}

/** World (z up) to canvas pixels under a turntable camera. */
export function project(camera: Camera, p: Vec3): [number, number] {
  const [x, y, z] = p
  const cy = Math.cos(camera.yawRad)
  const sy = Math.sin(camera.yawRad)
  const cp = Math.cos(camera.pitchRad)
  const sp = Math.sin(camera.pitchRad)
  const rx = cy * x + sy * y
  const ry = -sy * x + cy * y
  const screenX = camera.centerX + camera.scale * rx
  const screenY = camera.centerY - camera.scale * (cp * z + sp * ry)
  return [screenX, screenY]
}
