/** Browser entry point: builds the control panel, connects the snapshot
 * stream, and draws the scene on a canvas each animation frame.
 */
import { ApiClient } from './api'
import { CommandCoalescer, commandKey } from './coalescer'
import { AXIS_BINDINGS, AttachmentDropdown, PanelVisibility, clampToRange } from './panel'
import { applyTransform, project, type Camera } from './project'
import { SceneViewModel, StalenessMonitor } from './view'
import { SnapshotStream } from './ws'

const PUBLISH_HZ = 30

export function mount(root: HTMLElement, baseUrl: string): void {
  const api = new ApiClient(baseUrl)
  const toast = makeToast(root)
  const coalescer = new CommandCoalescer(
    (cmd) => api.sendCommand(cmd), PUBLISH_HZ, undefined,
    (err) => toast(String(err)))
  const viewModel = new SceneViewModel()
  const staleness = new StalenessMonitor()

  const canvas = document.createElement('canvas')
  canvas.width = 720
  canvas.height = 480
  root.appendChild(canvas)
  const camera: Camera = {
    yawRad: 0.6, pitchRad: 0.9, scale: 220,
    centerX: canvas.width / 2, centerY: canvas.height / 2 + 60,
  }
  let dragging = false
  canvas.addEventListener('pointerdown', () => { dragging = true })
  window.addEventListener('pointerup', () => { dragging = false })
  canvas.addEventListener('pointermove', (ev) => {
    if (!dragging) return
    camera.yawRad += ev.movementX * 0.01
    camera.pitchRad = Math.min(1.5, Math.max(0.1, camera.pitchRad + ev.movementY * 0.01))
  })

  const warning = document.createElement('div')
  warning.className = 'collision-warning'
  warning.style.display = 'none'
  root.appendChild(warning)

  const banner = document.createElement('div')
  banner.className = 'stale-banner'
  banner.textContent = 'connection stale: no update for 2 s'
  banner.style.display = 'none'
  root.appendChild(banner)

  const panel = buildPanel(root, coalescer, api, toast)

  const stream = new SnapshotStream(baseUrl, (snapshot) => {
    staleness.noteSnapshot()
    viewModel.applySnapshot(snapshot)
  })
  stream.connect()

  const draw = () => {
    const frame = viewModel.renderFrame()
    if (frame !== null) {
      coalescer.noteRenderedTick(frame.tick)
      warning.style.display = frame.warningVisible ? 'block' : 'none'
      warning.textContent = frame.warningVisible
        ? 'COLLISION: ' + frame.warningPairs.map((p) => `${p.a} / ${p.b}`).join(', ')
        : ''
      panel.readout.textContent = `tick ${frame.tick} | ${frame.hydraulicsReadout}`
      drawScene(canvas, camera, frame)
    }
    banner.style.display = staleness.isStale() ? 'block' : 'none'
    requestAnimationFrame(draw)
  }
  requestAnimationFrame(draw)
}

function makeToast(root: HTMLElement): (message: string) => void {
  const el = document.createElement('div')
  el.className = 'toast'
  el.style.display = 'none'
  root.appendChild(el)
  let timer: ReturnType<typeof setTimeout> | null = null
  return (message) => {
    el.textContent = message
    el.style.display = 'block'
    if (timer !== null) clearTimeout(timer)
    timer = setTimeout(() => { el.style.display = 'none' }, 4000)
  }
}

function buildPanel(
  root: HTMLElement,
  coalescer: CommandCoalescer,
  api: ApiClient,
  toast: (m: string) => void,
): { readout: HTMLElement } {
  const panel = document.createElement('div')
  panel.className = 'control-panel'
  root.appendChild(panel)

  const visibility = new PanelVisibility()
  const toggle = document.createElement('button')
  toggle.textContent = 'hide panel'
  toggle.addEventListener('click', () => {
    const visible = visibility.toggle()
    panel.style.display = visible ? 'block' : 'none'
    toggle.textContent = visible ? 'hide panel' : 'show panel'
  })
  root.appendChild(toggle)

  for (const binding of AXIS_BINDINGS) {
    const row = document.createElement('label')
    row.textContent = binding.label
    const input = document.createElement('input')
    input.type = 'range'
    input.min = String(binding.min)
    input.max = String(binding.max)
    input.step = String(binding.step)
    input.addEventListener('input', () => {
      const value = clampToRange(binding, Number(input.value))
      const cmd = binding.command(value)
      coalescer.push(cmd)
      row.classList.toggle('pending', coalescer.isPending(commandKey(cmd)))
    })
    input.addEventListener('change', () => coalescer.flush())
    row.appendChild(input)
    panel.appendChild(row)
  }

  for (const [label, action] of [['start electrolysis', 'start'],
                                 ['stop electrolysis', 'stop']] as const) {
    const button = document.createElement('button')
    button.textContent = label
    button.addEventListener('click', () =>
      coalescer.push({ target: 'electrolysis', action }))
    panel.appendChild(button)
  }

  const dropdown = new AttachmentDropdown(api, toast)
  const select = document.createElement('select')
  select.disabled = true
  select.addEventListener('pointerdown', async () => {
    const state = await dropdown.open()
    select.innerHTML = ''
    for (const name of state.options) {
      const option = document.createElement('option')
      option.value = name
      option.textContent = name
      select.appendChild(option)
    }
    select.disabled = state.disabled
    select.title = state.hint
  })
  select.addEventListener('change', () => {
    if (select.value) coalescer.push(dropdown.select(select.value))
  })
  panel.appendChild(select)

  const readout = document.createElement('div')
  readout.className = 'readout'
  panel.appendChild(readout)
  return { readout }
}

function drawScene(
  canvas: HTMLCanvasElement,
  camera: Camera,
  frame: NonNullable<ReturnType<SceneViewModel['renderFrame']>>,
): void {
  const ctx = canvas.getContext('2d')
  if (!ctx) return
  ctx.clearRect(0, 0, canvas.width, canvas.height)

  for (const solid of frame.solids) {
    const center = applyTransform(solid.transform, [0, 0, 0])
    const [sx, sy] = project(camera, center)
    const radius = solidScreenRadius(solid.params) * camera.scale
    ctx.beginPath()
    ctx.arc(sx, sy, Math.max(3, radius), 0, 2 * Math.PI)
    ctx.strokeStyle = frame.warningPairs.some(
      (p) => p.a === solid.name || p.b === solid.name) ? '#d32f2f' : '#455a64'
    ctx.stroke()
  }

  for (const particle of frame.particles) {
    const [sx, sy] = project(camera, particle.position as [number, number, number])
    ctx.beginPath()
    ctx.arc(sx, sy, particle.evaporated ? 2 : 4, 0, 2 * Math.PI)
    ctx.fillStyle = particle.color
    ctx.fill()
  }

  if (frame.bulbGlow > 0) {
    ctx.beginPath()
    ctx.arc(canvas.width - 40, 40, 10 + 10 * frame.bulbGlow, 0, 2 * Math.PI)
    ctx.fillStyle = `rgba(255, 235, 59, ${frame.bulbGlow})`
    ctx.fill()
  }
}

function solidScreenRadius(params: Record<string, unknown>): number {
  if (typeof params.radius === 'number') return params.radius
  const he = params.half_extents
  if (Array.isArray(he)) return Math.max(...(he as number[]))
  return 0.05
}
