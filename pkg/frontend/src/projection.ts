/**
 * Pure view-model helpers.  Everything the SVG layer draws comes from
 * these functions applied to the last server payload (or to a transcript
 * prefix while scrubbing a replay); no game logic lives here beyond
 * "which pairs are still undirected", needed to grey them out and to
 * pre-validate clicks.
 */

import type { Actor, ArcTriple, ServerState, TranscriptRound } from "./types";

export interface VertexPos {
  x: number;
  y: number;
}

export function circleLayout(n: number, cx: number, cy: number, r: number): VertexPos[] {
  const out: VertexPos[] = [];
  for (let i = 0; i < n; i++) {
    const angle = (2 * Math.PI * i) / n - Math.PI / 2;
    out.push({ x: cx + r * Math.cos(angle), y: cy + r * Math.sin(angle) });
  }
  return out;
}

export interface BoardView {
  n: number;
  arcs: ArcTriple[];
  undirected: [number, number][];
  threats: [number, number][];
  badges: Map<number, string>;
  replySet: Set<string>;
  cycle: [number, number][];
}

export function arcKey(t: number, h: number): string {
  return `${t}>${h}`;
}

function undirectedPairs(n: number, arcs: ArcTriple[]): [number, number][] {
  const taken = new Set<string>();
  for (const [t, h] of arcs) {
    taken.add(t < h ? `${t},${h}` : `${h},${t}`);
  }
  const out: [number, number][] = [];
  for (let u = 0; u < n; u++) {
    for (let v = u + 1; v < n; v++) {
      if (!taken.has(`${u},${v}`)) out.push([u, v]);
    }
  }
  return out;
}

/** Badge per vertex from the breaker's certificate summary. */
export function partitionBadges(partitions: Record<string, unknown>): Map<number, string> {
  const out = new Map<number, string>();
  const classKeys = ["A_D", "A_AD", "A_S", "A_0", "B_D", "B_AD", "B_S", "B_0"];
  let found = false;
  for (const key of classKeys) {
    const members = partitions[key];
    if (Array.isArray(members)) {
      found = true;
      for (const v of members) out.set(v as number, key);
    }
  }
  if (!found) {
    for (const key of ["A", "B"]) {
      const members = partitions[key];
      if (Array.isArray(members)) {
        for (const v of members) out.set(v as number, key);
      }
    }
    const spine = partitions["spine"];
    if (Array.isArray(spine)) {
      spine.forEach((v, i) => out.set(v as number, `s${i + 1}`));
    }
    if (typeof partitions["apex"] === "number") {
      out.set(partitions["apex"] as number, "apex");
    }
  }
  return out;
}

/** Some directed cycle in the arc set, as consecutive arcs ([] if acyclic). */
export function findCycle(n: number, arcs: ArcTriple[]): [number, number][] {
  const adj: number[][] = Array.from({ length: n }, () => []);
  for (const [t, h] of arcs) adj[t].push(h);
  const state = new Array<number>(n).fill(0); // 0 fresh, 1 on stack, 2 done
  const stack: number[] = [];

  function dfs(v: number): number[] | null {
    state[v] = 1;
    stack.push(v);
    for (const w of adj[v]) {
      if (state[w] === 1) {
        return stack.slice(stack.indexOf(w));
      }
      if (state[w] === 0) {
        const hit = dfs(w);
        if (hit) return hit;
      }
    }
    stack.pop();
    state[v] = 2;
    return null;
  }

  for (let v = 0; v < n; v++) {
    if (state[v] === 0) {
      const cycle = dfs(v);
      if (cycle) {
        const out: [number, number][] = [];
        for (let i = 0; i < cycle.length; i++) {
          out.push([cycle[i], cycle[(i + 1) % cycle.length]]);
        }
        return out;
      }
    }
  }
  return [];
}

export function viewFromState(state: ServerState): BoardView {
  const replySet = new Set(state.lastReply.map(([t, h]) => arcKey(t, h)));
  const cycle =
    state.terminal?.terminal === "CycleClosed" ? findCycle(state.n, state.arcs) : [];
  return {
    n: state.n,
    arcs: state.arcs,
    undirected: undirectedPairs(state.n, state.arcs),
    threats: state.threats,
    badges: partitionBadges(state.partitions),
    replySet,
    cycle,
  };
}

/** Replay: project the board after the first `upto` rounds of a transcript. */
export function viewFromTranscript(
  n: number,
  rounds: TranscriptRound[],
  upto: number,
): BoardView {
  const arcs: ArcTriple[] = [];
  for (const rnd of rounds.slice(0, upto)) {
    arcs.push([rnd.maker[0], rnd.maker[1], "OMaker" as Actor]);
    for (const [t, h] of rnd.breaker) arcs.push([t, h, "OBreaker" as Actor]);
  }
  return {
    n,
    arcs,
    undirected: undirectedPairs(n, arcs),
    threats: [],
    badges: new Map(),
    replySet: new Set(),
    cycle: [],
  };
}

export function pairIsUndirected(view: BoardView, a: number, b: number): boolean {
  const key = a < b ? `${a},${b}` : `${b},${a}`;
  return view.undirected.some(([u, v]) => `${u},${v}` === key);
}
