/** Coalesces rapid widget changes into commands at no more than the
 * server's publish rate.
 *
 * A drag emits one leading command, then at most one per interval with the
 * latest value winning; distinct keys (e.g. different axes) coalesce
 * independently. Each sent command stays "pending" until a snapshot tick at
 * or past its acked apply_tick has been rendered.
 */
import type { Command, CommandAck } from './types'

type Sender = (command: Command) => Promise<CommandAck>
type Clock = () => number

export function commandKey(command: Command): string {
  if (command.target === 'linac_axis') return `linac_axis:${command.axis}`
  if (command.target === 'attachment') return `attachment:${command.name}`
  return `${command.target}:${(command as { action?: string }).action ?? ''}`
}

interface Slot {
  lastSentAt: number
  trailing: Command | null
  timer: ReturnType<typeof setTimeout> | null
}

export class CommandCoalescer {
  private readonly intervalMs: number
  private readonly slots = new Map<string, Slot>()
  private readonly pendingTicks = new Map<string, number>()
  private renderedTick = -1
  sentCount = 0

  constructor(
    private readonly send: Sender,
    publishHz: number,
    private readonly now: Clock = () => Date.now(),
    private readonly onError: (err: unknown) => void = () => {},
  ) {
    this.intervalMs = 1000 / publishHz
  }

  /** Queue a value change; sends immediately if the rate budget allows. */
  push(command: Command): void {
    const key = commandKey(command)
    let slot = this.slots.get(key)
    if (!slot) {
      slot = { lastSentAt: -Infinity, trailing: null, timer: null }
      this.slots.set(key, slot)
    }
    const elapsed = this.now() - slot.lastSentAt
    if (elapsed >= this.intervalMs && slot.timer === null) {
      this.dispatch(key, slot, command)
    } else {
      slot.trailing = command
      if (slot.timer === null) {
        const delay = Math.max(0, this.intervalMs - elapsed)
        slot.timer = setTimeout(() => {
          slot.timer = null
          if (slot.trailing !== null) {
            const cmd = slot.trailing
            slot.trailing = null
            this.dispatch(key, slot, cmd)
          }
        }, delay)
      }
    }
  }

  private dispatch(key: string, slot: Slot, command: Command): void {
    slot.lastSentAt = this.now()
    this.sentCount += 1
    this.send(command)
      .then((ack) => this.pendingTicks.set(key, ack.apply_tick))
      .catch((err) => this.onError(err))
  }

  /** Call with each rendered snapshot tick; resolves pending commands. */
  noteRenderedTick(tick: number): void {
    this.renderedTick = tick
    for (const [key, applyTick] of this.pendingTicks) {
      if (applyTick <= tick) this.pendingTicks.delete(key)
    }
  }

  /** True while a sent command has not yet appeared in a rendered snapshot. */
  isPending(key: string): boolean {
    const tick = this.pendingTicks.get(key)
    return tick !== undefined && tick > this.renderedTick
  }

  /** Flush any trailing value immediately (e.g. on drag end). */
  flush(): void {
    for (const [key, slot] of this.slots) {
      if (slot.timer !== null) {
        clearTimeout(slot.timer)
        slot.timer = null
      }
      if (slot.trailing !== null) {
        const cmd = slot.trailing
        slot.trailing = null
        this.dispatch(key, slot, cmd)
      }
    }
  }
}
