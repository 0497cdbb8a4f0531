import type { MoveResponse, NewGameRequest, ServerState, TranscriptJson } from "./types";

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function parse<T>(res: Response): Promise<T> {
  const body = await res.json().catch(() => ({}));
  if (!res.ok) {
    throw new ApiError(res.status, (body as { error?: string }).error ?? res.statusText);
  }
  return body as T;
}

export class Client {
  constructor(public base: string) {}

  async createGame(req: NewGameRequest): Promise<{ id: string; state: ServerState }> {
    const res = await fetch(`${this.base}/games`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(req),
    });
    return parse(res);
  }

  async move(id: string, tail: number, head: number): Promise<MoveResponse> {
    const res = await fetch(`${this.base}/games/${id}/move`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ tail, head }),
    });
    return parse(res);
  }

  async state(id: string): Promise<ServerState> {
    return parse(await fetch(`${this.base}/games/${id}`));
  }

  async transcript(id: string): Promise<TranscriptJson> {
    return parse(await fetch(`${this.base}/games/${id}/transcript`));
  }
}
