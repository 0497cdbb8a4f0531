/**
 * Application wiring: the new-game form, click-to-direct arc submission,
 * reply animation, threat display and the transcript replay stepper.
 *
 * View state is always a pure projection of the last server response;
 * reloading the page refetches the session named in the URL hash and
 * reproduces the identical view.
 */

import { ApiError, Client } from "./api";
import {
  BoardView,
  pairIsUndirected,
  viewFromState,
  viewFromTranscript,
} from "./projection";
import { banner, renderBoard, showToast } from "./render";
import type { ServerState, TranscriptJson } from "./types";

interface Elements {
  board: HTMLElement;
  status: HTMLElement;
  toasts: HTMLElement;
  form: HTMLFormElement;
  replay: HTMLInputElement;
  replayLabel: HTMLElement;
}

export class App {
  client: Client;
  els: Elements;
  state: ServerState | null = null;
  selected: number | null = null;
  inFlight = false;
  transcript: TranscriptJson | null = null;

  constructor(client: Client, els: Elements) {
    this.client = client;
    this.els = els;
  }

  currentView(): BoardView | null {
    if (this.transcript && this.state) {
      const upto = parseInt(this.els.replay.value, 10);
      if (upto < this.transcript.rounds.length) {
        return viewFromTranscript(this.state.n, this.transcript.rounds, upto);
      }
    }
    return this.state ? viewFromState(this.state) : null;
  }

  draw(): void {
    const view = this.currentView();
    if (!view) {
      this.els.board.textContent = "";
      return;
    }
    renderBoard(this.els.board, view, {
      selected: this.selected,
      onVertexClick: (v) => this.clickVertex(v),
    });
    const terminal = this.state?.terminal ?? null;
    const note = terminal
      ? banner(terminal)
      : this.state
        ? `round ${this.state.rounds + 1}: your move (tail first, then head)`
        : "";
    this.els.status.textContent = note;
    this.els.status.className = terminal ? "status terminal" : "status";
  }

  setState(state: ServerState): void {
    this.state = state;
    this.selected = null;
    this.syncReplay();
    this.draw();
  }

  syncReplay(): void {
    const rounds = this.state?.rounds ?? 0;
    this.els.replay.max = `${rounds}`;
    this.els.replay.value = `${rounds}`;
    this.els.replayLabel.textContent = `round ${rounds}/${rounds}`;
  }

  async newGame(n: number, b: number, rules: "monotone" | "strict", obreaker: string) {
    try {
      const { id, state } = await this.client.createGame({ n, b, rules, obreaker });
      window.location.hash = id;
      this.transcript = null;
      this.setState(state);
    } catch (err) {
      this.fail(err);
    }
  }

  async resume(id: string) {
    try {
      this.transcript = null;
      this.setState(await this.client.state(id));
    } catch (err) {
      this.fail(err);
    }
  }

  async clickVertex(v: number): Promise<void> {
    if (!this.state || this.state.terminal || this.inFlight) return;
    if (this.selected === null) {
      this.selected = v;
      this.draw();
      return;
    }
    if (this.selected === v) {
      this.selected = null;
      this.draw();
      return;
    }
    const tail = this.selected;
    const view = this.currentView();
    if (view && !pairIsUndirected(view, tail, v)) {
      // inline rejection: no request leaves the page
      showToast(this.els.toasts, `pair {${tail}, ${v}} is already directed`);
      this.selected = null;
      this.draw();
      return;
    }
    this.inFlight = true;
    try {
      const res = await this.client.move(this.state.id, tail, v);
      this.setState(res.state);
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        showToast(this.els.toasts, `rejected: ${err.message}`);
        this.selected = null;
        this.draw(); // board unchanged
      } else {
        this.fail(err);
      }
    } finally {
      this.inFlight = false;
    }
  }

  async scrub(): Promise<void> {
    if (!this.state) return;
    if (!this.transcript) {
      try {
        this.transcript = await this.client.transcript(this.state.id);
      } catch (err) {
        this.fail(err);
        return;
      }
    }
    const upto = parseInt(this.els.replay.value, 10);
    this.els.replayLabel.textContent = `round ${upto}/${this.transcript.rounds.length}`;
    this.draw();
  }

  fail(err: unknown): void {
    const message = err instanceof Error ? err.message : String(err);
    showToast(this.els.toasts, `error: ${message}`);
  }
}

export function presetBias(preset: string, n: number): number {
  if (preset === "monotone-five-sixths") return Math.ceil((5 * n) / 6) + 2;
  if (preset === "strict-nineteen-twentieths") return Math.ceil((19 * n) / 20);
  return NaN;
}

export function bootstrap(base: string): App {
  const els: Elements = {
    board: document.getElementById("board")!,
    status: document.getElementById("status")!,
    toasts: document.getElementById("toasts")!,
    form: document.getElementById("new-game") as HTMLFormElement,
    replay: document.getElementById("replay") as HTMLInputElement,
    replayLabel: document.getElementById("replay-label")!,
  };
  const app = new App(new Client(base), els);

  els.form.addEventListener("submit", (ev) => {
    ev.preventDefault();
    const data = new FormData(els.form);
    const n = parseInt(String(data.get("n")), 10);
    const rules = String(data.get("rules")) as "monotone" | "strict";
    const preset = String(data.get("preset"));
    const manual = String(data.get("b"));
    const b = preset === "manual" ? parseInt(manual, 10) : presetBias(preset, n);
    void app.newGame(n, b, rules, String(data.get("obreaker")));
  });
  els.replay.addEventListener("input", () => void app.scrub());

  const existing = window.location.hash.replace(/^#/, "");
  if (existing) void app.resume(existing);
  return app;
}
