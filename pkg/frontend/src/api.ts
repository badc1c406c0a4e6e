/** Thin fetch wrappers over the server's HTTP endpoints.
 *
 * The fetch function is injectable so tests can run without a network.
 */
import type { Command, CommandAck, MeshList } from './types'

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail)
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (u, i) => fetch(u, i),
  ) {}

  async listAttachments(): Promise<string[]> {
    const resp = await this.fetchFn(`${this.baseUrl}/api/attachments`)
    if (!resp.ok) throw new ApiError(resp.status, await resp.text())
    return (await resp.json()) as string[]
  }

  async fetchMeshList(scene: string): Promise<MeshList> {
    const resp = await this.fetchFn(
      `${this.baseUrl}/api/scene/${encodeURIComponent(scene)}?format=json`,
    )
    if (!resp.ok) throw new ApiError(resp.status, await resp.text())
    return (await resp.json()) as MeshList
  }

  async sendCommand(command: Command): Promise<CommandAck> {
    const resp = await this.fetchFn(`${this.baseUrl}/api/command`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(command),
    })
    if (!resp.ok) throw new ApiError(resp.status, await resp.text())
    return (await resp.json()) as CommandAck
  }
}
