export type Actor = "OMaker" | "OBreaker";

export type ArcTriple = [number, number, Actor | null];

export interface TerminalInfo {
  winner: "OMaker" | "OBreaker";
  terminal: "CycleClosed" | "TransitiveTournament" | "Forfeit";
}

export interface ServerState {
  id: string;
  n: number;
  b: number;
  rules: "monotone" | "strict";
  obreaker: string;
  board: { n: number; arcs: [number, number][] };
  arcs: ArcTriple[];
  turn: "maker" | "done";
  threats: [number, number][];
  partitions: Record<string, unknown>;
  lastReply: [number, number][];
  rounds: number;
  terminal: TerminalInfo | null;
}

export interface MoveResponse {
  breakerArcs: [number, number][];
  state: ServerState;
  terminal: TerminalInfo | null;
  fault?: string;
}

export interface TranscriptRound {
  maker: [number, number];
  breaker: [number, number][];
  hash: string;
}

export interface TranscriptJson {
  config: { n: number; b: number; rules: string; obreaker: string };
  rounds: TranscriptRound[];
  winner: string | null;
  terminal: string | null;
}

export interface NewGameRequest {
  n: number;
  b: number;
  rules: "monotone" | "strict";
  obreaker: string;
}
