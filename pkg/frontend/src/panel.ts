/** Control-panel view model: widget bindings, the attachment dropdown,
 * and client-side range clamping. Framework-free so it can be driven both
 * by the DOM layer and by tests.
 */
import type { ApiClient } from './api'
import type { Command } from './types'

export type WidgetKind = 'slider' | 'scroll' | 'button' | 'dropdown' | 'readout'

export interface ControlBinding {
  kind: WidgetKind
  label: string
  command: (value: number) => Command
  min: number
  max: number
  step: number
}

/** Axis widgets mirroring the server's axis set and limits:
 * scrolls for rotations, sliders for translations. */
export const AXIS_BINDINGS: ControlBinding[] = [
  { kind: 'scroll', label: 'Gantry', min: 0, max: 360, step: 1,
    command: (v) => ({ target: 'linac_axis', axis: 'gantry', value: v }) },
  { kind: 'scroll', label: 'Collimator', min: 0, max: 360, step: 1,
    command: (v) => ({ target: 'linac_axis', axis: 'collimator', value: v }) },
  { kind: 'scroll', label: 'Couch rotation', min: 0, max: 360, step: 1,
    command: (v) => ({ target: 'linac_axis', axis: 'couch_rotation', value: v }) },
  { kind: 'slider', label: 'Couch vertical', min: 0, max: 0.5, step: 0.005,
    command: (v) => ({ target: 'linac_axis', axis: 'couch_vertical', value: v }) },
  { kind: 'slider', label: 'Couch longitudinal', min: -0.5, max: 0.5, step: 0.005,
    command: (v) => ({ target: 'linac_axis', axis: 'couch_longitudinal', value: v }) },
  { kind: 'slider', label: 'Couch lateral', min: -0.2, max: 0.2, step: 0.005,
    command: (v) => ({ target: 'linac_axis', axis: 'couch_lateral', value: v }) },
]

/** Clamp a typed-in value to the widget's declared range. */
export function clampToRange(binding: ControlBinding, value: number): number {
  if (Number.isNaN(value)) return binding.min
  return Math.min(binding.max, Math.max(binding.min, value))
}

export interface DropdownState {
  options: string[]
  disabled: boolean
  hint: string
}

/** Attachment picker backed by the server's read-through listing.
 * Every open() re-fetches, so server-side changes appear without a page
 * reload; network failures surface as a toast and keep the old options.
 */
export class AttachmentDropdown {
  state: DropdownState = { options: [], disabled: true, hint: 'loading…' }

  constructor(
    private readonly api: ApiClient,
    private readonly toast: (message: string) => void = () => {},
  ) {}

  async open(): Promise<DropdownState> {
    try {
      const names = await this.api.listAttachments()
      this.state = names.length > 0
        ? { options: names, disabled: false, hint: '' }
        : { options: [], disabled: true, hint: 'no attachments available' }
    } catch (err) {
      this.toast(`attachment listing failed: ${String(err)}`)
    }
    return this.state
  }

  select(name: string): Command {
    if (!this.state.options.includes(name)) {
      throw new Error(`unknown attachment ${name}`)
    }
    return { target: 'attachment', name }
  }
}

/** Panel visibility; hiding must never drop input queued in the coalescer,
 * so this holds no input state at all. */
export class PanelVisibility {
  visible = true

  toggle(): boolean {
    this.visible = !this.visible
    return this.visible
  }
}
