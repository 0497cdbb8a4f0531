import { describe, expect, it } from "vitest";

import {
  arcKey,
  circleLayout,
  findCycle,
  pairIsUndirected,
  partitionBadges,
  viewFromState,
  viewFromTranscript,
} from "../src/projection";
import type { ArcTriple, ServerState } from "../src/types";

describe("circleLayout", () => {
  it("spaces n vertices evenly on the circle", () => {
    const pos = circleLayout(4, 100, 100, 50);
    expect(pos).toHaveLength(4);
    expect(pos[0].x).toBeCloseTo(100);
    expect(pos[0].y).toBeCloseTo(50);
    for (const p of pos) {
      expect(Math.hypot(p.x - 100, p.y - 100)).toBeCloseTo(50);
    }
  });
});

describe("partitionBadges", () => {
  it("labels biclique sides", () => {
    const badges = partitionBadges({ A: [1, 0], B: [3], k: 1 });
    expect(badges.get(1)).toBe("A");
    expect(badges.get(3)).toBe("B");
    expect(badges.has(2)).toBe(false);
  });

  it("prefers the finer strict-game classes", () => {
    const badges = partitionBadges({ A_S: [2], A_0: [4], B_S: [7], B_0: [9] });
    expect(badges.get(2)).toBe("A_S");
    expect(badges.get(9)).toBe("B_0");
  });

  it("labels the spine strategy", () => {
    const badges = partitionBadges({ spine: [5, 1], apex: 2 });
    expect(badges.get(5)).toBe("s1");
    expect(badges.get(1)).toBe("s2");
    expect(badges.get(2)).toBe("apex");
  });
});

describe("findCycle", () => {
  it("returns consecutive arcs of a cycle", () => {
    const arcs: ArcTriple[] = [
      [0, 1, "OMaker"],
      [1, 2, "OMaker"],
      [2, 0, "OMaker"],
      [3, 4, "OBreaker"],
    ];
    const cycle = findCycle(5, arcs);
    expect(cycle).toHaveLength(3);
    for (let i = 0; i < cycle.length; i++) {
      expect(cycle[i][1]).toBe(cycle[(i + 1) % cycle.length][0]);
    }
  });

  it("is empty on acyclic boards", () => {
    expect(findCycle(3, [[0, 1, null], [0, 2, null]])).toHaveLength(0);
  });
});

function fakeState(overrides: Partial<ServerState> = {}): ServerState {
  return {
    id: "g1",
    n: 5,
    b: 3,
    rules: "monotone",
    obreaker: "alpha-monotone",
    board: { n: 5, arcs: [] },
    arcs: [],
    turn: "maker",
    threats: [],
    partitions: {},
    lastReply: [],
    rounds: 0,
    terminal: null,
    ...overrides,
  };
}

describe("viewFromState", () => {
  it("is a pure projection: identical payloads give identical views", () => {
    const payload = fakeState({
      arcs: [[0, 1, "OMaker"], [2, 1, "OBreaker"]],
      lastReply: [[2, 1]],
      threats: [[1, 0]],
    });
    const a = viewFromState(payload);
    const b = viewFromState(JSON.parse(JSON.stringify(payload)));
    expect(JSON.stringify(a.undirected)).toBe(JSON.stringify(b.undirected));
    expect(a.replySet.has(arcKey(2, 1))).toBe(true);
    expect(a.threats).toEqual([[1, 0]]);
  });

  it("tracks undirected pairs", () => {
    const view = viewFromState(fakeState({ arcs: [[0, 1, "OMaker"]] }));
    expect(view.undirected).toHaveLength(9);
    expect(pairIsUndirected(view, 0, 1)).toBe(false);
    expect(pairIsUndirected(view, 1, 0)).toBe(false);
    expect(pairIsUndirected(view, 2, 3)).toBe(true);
  });

  it("highlights a cycle at a cycle-closed terminal", () => {
    const view = viewFromState(
      fakeState({
        arcs: [[0, 1, "OMaker"], [1, 2, "OMaker"], [2, 0, "OMaker"]],
        terminal: { winner: "OMaker", terminal: "CycleClosed" },
      }),
    );
    expect(view.cycle.length).toBeGreaterThan(0);
  });
});

describe("viewFromTranscript", () => {
  it("replays a prefix with actors attached", () => {
    const rounds = [
      { maker: [0, 1] as [number, number], breaker: [[2, 1]] as [number, number][], hash: "" },
      { maker: [3, 4] as [number, number], breaker: [] as [number, number][], hash: "" },
    ];
    const one = viewFromTranscript(5, rounds, 1);
    expect(one.arcs).toEqual([
      [0, 1, "OMaker"],
      [2, 1, "OBreaker"],
    ]);
    const two = viewFromTranscript(5, rounds, 2);
    expect(two.arcs).toHaveLength(3);
    expect(two.undirected).toHaveLength(10 - 3);
  });
});
