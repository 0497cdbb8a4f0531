// @vitest-environment jsdom
//
// End-to-end round trip against the real Python service: a scripted
// browser session creates a game, plays five legal moves against the
// alpha-monotone engine, and the replies must byte-match the engine
// transcript produced by the CLI for the same configuration.  A stale
// double-click then exercises the server's 409 path.
import { spawn, spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { App } from "../src/app";
import { Client } from "../src/api";
import type { TranscriptJson } from "../src/types";

const ROOT = resolve(__dirname, "..", "..");
const PYENV = { ...process.env, PYTHONPATH: join(ROOT, "src") };

let server: ReturnType<typeof spawn>;
let base = "";
let workdir = "";

beforeAll(async () => {
  workdir = mkdtempSync(join(tmpdir(), "ocycle-ui-"));
  server = spawn("python3", ["-m", "ocycle.cli", "serve", "--port", "0"], {
    cwd: ROOT,
    env: PYENV,
  });
  base = await new Promise<string>((resolvePort, reject) => {
    const timer = setTimeout(() => reject(new Error("service did not start")), 20000);
    server.stdout!.on("data", (chunk: Buffer) => {
      const match = /listening on (http:\/\/[\d.]+:\d+)/.exec(chunk.toString());
      if (match) {
        clearTimeout(timer);
        resolvePort(match[1]);
      }
    });
    server.stderr!.on("data", () => {});
    server.on("exit", (code) => reject(new Error(`service exited: ${code}`)));
  });
});

afterAll(() => {
  server?.kill();
  if (workdir) rmSync(workdir, { recursive: true, force: true });
});

function engineTranscript(): TranscriptJson {
  const out = join(workdir, "engine.json");
  const run = spawnSync(
    "python3",
    [
      "-m", "ocycle.cli", "play",
      "--n", "24", "--b", "22", "--rules", "monotone",
      "--obreaker", "alpha-monotone", "--omaker", "random",
      "--seed", "5", "--out", out,
    ],
    { cwd: ROOT, env: PYENV },
  );
  expect(run.status).toBe(0);
  return JSON.parse(readFileSync(out, "utf-8"));
}

function domElements() {
  document.body.innerHTML = `
    <form id="new-game"></form>
    <div id="status"></div>
    <div id="board"></div>
    <input id="replay" type="range" min="0" max="0" value="0" />
    <span id="replay-label"></span>
    <div id="toasts"></div>`;
  return {
    board: document.getElementById("board")!,
    status: document.getElementById("status")!,
    toasts: document.getElementById("toasts")!,
    form: document.getElementById("new-game") as HTMLFormElement,
    replay: document.getElementById("replay") as HTMLInputElement,
    replayLabel: document.getElementById("replay-label")!,
  };
}

function click(els: ReturnType<typeof domElements>, v: number) {
  const node = els.board.querySelector(`[data-vertex="${v}"]`)!;
  node.dispatchEvent(new window.MouseEvent("click", { bubbles: true }));
}

async function waitRounds(app: App, rounds: number) {
  const t0 = Date.now();
  while (app.state?.rounds !== rounds || app.inFlight) {
    if (Date.now() - t0 > 15000) throw new Error(`timed out waiting for round ${rounds}`);
    await new Promise((r) => setTimeout(r, 10));
  }
}

describe("browser session against the live engine", () => {
  it("five clicked moves byte-match the engine transcript", async () => {
    const reference = engineTranscript();
    const els = domElements();
    const app = new App(new Client(base), els);
    await app.newGame(24, 22, "monotone", "alpha-monotone");
    expect(app.state).not.toBeNull();

    const replies: [number, number][][] = [];
    for (let i = 0; i < 5; i++) {
      const [tail, head] = reference.rounds[i].maker;
      click(els, tail);
      click(els, head);
      await waitRounds(app, i + 1);
      replies.push(app.state!.lastReply);
    }
    const expected = reference.rounds.slice(0, 5).map((r) => r.breaker);
    expect(JSON.stringify(replies)).toBe(JSON.stringify(expected));

    // the served transcript prefix matches the reference byte for byte
    const served = await new Client(base).transcript(app.state!.id);
    expect(JSON.stringify(served.rounds.slice(0, 5))).toBe(
      JSON.stringify(reference.rounds.slice(0, 5)),
    );

    // a stale click on an already-directed pair: the server answers 409,
    // the app toasts, and the game on the server is untouched
    const [t0arc, h0arc] = reference.rounds[0].maker;
    const staleArcs = app.state!.arcs.filter(
      ([t, h]) => !(t === t0arc && h === h0arc),
    );
    app.state = { ...app.state!, arcs: staleArcs };
    app.draw();
    const before = await new Client(base).state(app.state!.id);
    click(els, t0arc);
    click(els, h0arc);
    const t1 = Date.now();
    while (app.inFlight || !els.toasts.textContent) {
      if (Date.now() - t1 > 10000) throw new Error("no toast appeared");
      await new Promise((r) => setTimeout(r, 10));
    }
    expect(els.toasts.textContent).toContain("rejected");
    const after = await new Client(base).state(before.id);
    expect(JSON.stringify(after.board)).toBe(JSON.stringify(before.board));
    expect(after.rounds).toBe(before.rounds);
  });

  it("replay stepper projects transcript prefixes", async () => {
    const els = domElements();
    const app = new App(new Client(base), els);
    await app.newGame(10, 9, "monotone", "alpha-monotone");
    click(els, 0);
    click(els, 1);
    await waitRounds(app, 1);
    click(els, 4);
    click(els, 5);
    await waitRounds(app, 2);

    els.replay.value = "1";
    await app.scrub();
    const arcsShown = els.board.querySelectorAll("[data-arc]").length;
    expect(arcsShown).toBe(1 + app.transcript!.rounds[0].breaker.length);
    els.replay.value = "2";
    await app.scrub();
    expect(els.board.querySelectorAll("[data-arc]").length).toBeGreaterThan(arcsShown);
  });
});
