/** Snapshot stream over the server's WebSocket endpoint.
 *
 * The socket factory is injectable so tests can feed recorded snapshots
 * through a fake. Malformed messages are dropped silently; the staleness
 * monitor covers a dead stream.
 */
import type { Snapshot } from './types'

export interface SocketLike {
  onmessage: ((ev: { data: string }) => void) | null
  onclose: ((ev: unknown) => void) | null
  close(): void
}

export type SocketFactory = (url: string) => SocketLike

export class SnapshotStream {
  private socket: SocketLike | null = null

  constructor(
    private readonly baseUrl: string,
    private readonly onSnapshot: (snapshot: Snapshot) => void,
    private readonly factory: SocketFactory = (url) =>
      new WebSocket(url) as unknown as SocketLike,
  ) {}

  connect(): void {
    const wsUrl = this.baseUrl.replace(/^http/, 'ws') + '/ws/state'
    this.socket = this.factory(wsUrl)
    this.socket.onmessage = (ev) => {
      let snapshot: Snapshot
      try {
        snapshot = JSON.parse(ev.data) as Snapshot
      } catch {
        return
      }
      if (typeof snapshot.tick === 'number') this.onSnapshot(snapshot)
    }
  }

  close(): void {
    this.socket?.close()
    this.socket = null
  }
}
