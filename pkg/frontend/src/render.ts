/**
 * SVG board rendering.  The view is rebuilt from scratch on every state
 * change (boards are small); reply arcs get staggered animation delays in
 * the exact order the server emitted them.
 */

import { arcKey, BoardView, circleLayout } from "./projection";

const SVG_NS = "http://www.w3.org/2000/svg";
const SIZE = 640;
const RADIUS = 270;

export interface RenderHooks {
  onVertexClick?: (v: number) => void;
  selected?: number | null;
}

function el(name: string, attrs: Record<string, string>): SVGElement {
  const node = document.createElementNS(SVG_NS, name);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  return node;
}

function shrink(a: { x: number; y: number }, b: { x: number; y: number }, by: number) {
  const dx = b.x - a.x;
  const dy = b.y - a.y;
  const len = Math.hypot(dx, dy) || 1;
  return {
    x1: a.x + (dx / len) * by,
    y1: a.y + (dy / len) * by,
    x2: b.x - (dx / len) * by,
    y2: b.y - (dy / len) * by,
  };
}

export function renderBoard(
  container: HTMLElement,
  view: BoardView,
  hooks: RenderHooks = {},
): SVGSVGElement {
  container.textContent = "";
  const svg = el("svg", {
    viewBox: `0 0 ${SIZE} ${SIZE}`,
    class: "board",
  }) as SVGSVGElement;
  const defs = el("defs", {});
  for (const [id, cls] of [
    ["arrow-maker", "maker"],
    ["arrow-breaker", "breaker"],
    ["arrow-threat", "threat"],
  ]) {
    const marker = el("marker", {
      id,
      viewBox: "0 0 10 10",
      refX: "9",
      refY: "5",
      markerWidth: "7",
      markerHeight: "7",
      orient: "auto-start-reverse",
    });
    const tip = el("path", { d: "M 0 0 L 10 5 L 0 10 z", class: `tip-${cls}` });
    marker.appendChild(tip);
    defs.appendChild(marker);
  }
  svg.appendChild(defs);

  const pos = circleLayout(view.n, SIZE / 2, SIZE / 2, RADIUS);
  const cycleSet = new Set(view.cycle.map(([t, h]) => arcKey(t, h)));
  const threatSet = new Set(view.threats.map(([t, h]) => arcKey(t, h)));

  for (const [u, v] of view.undirected) {
    const { x1, y1, x2, y2 } = shrink(pos[u], pos[v], 18);
    svg.appendChild(
      el("line", {
        x1: `${x1}`,
        y1: `${y1}`,
        x2: `${x2}`,
        y2: `${y2}`,
        class: "pair-undirected",
        "data-pair": `${Math.min(u, v)},${Math.max(u, v)}`,
      }),
    );
  }

  // threat overlays: arcs the human could close a cycle with right now
  for (const [t, h] of view.threats) {
    const { x1, y1, x2, y2 } = shrink(pos[t], pos[h], 20);
    svg.appendChild(
      el("line", {
        x1: `${x1}`,
        y1: `${y1}`,
        x2: `${x2}`,
        y2: `${y2}`,
        class: "arc-threat",
        "marker-end": "url(#arrow-threat)",
        "data-threat": arcKey(t, h),
      }),
    );
  }

  let replyIndex = 0;
  for (const [t, h, actor] of view.arcs) {
    const { x1, y1, x2, y2 } = shrink(pos[t], pos[h], 20);
    const classes = [`arc-${actor === "OMaker" ? "maker" : "breaker"}`];
    const attrs: Record<string, string> = {
      x1: `${x1}`,
      y1: `${y1}`,
      x2: `${x2}`,
      y2: `${y2}`,
      "marker-end": `url(#arrow-${actor === "OMaker" ? "maker" : "breaker"})`,
      "data-arc": arcKey(t, h),
    };
    const key = arcKey(t, h);
    if (view.replySet.has(key)) {
      classes.push("arc-reply");
      attrs["data-reply-order"] = `${replyIndex}`;
      attrs["style"] = `animation-delay: ${replyIndex * 120}ms`;
      replyIndex += 1;
    }
    if (cycleSet.has(key)) classes.push("arc-cycle");
    if (threatSet.has(key)) classes.push("arc-threat");
    attrs["class"] = classes.join(" ");
    svg.appendChild(el("line", attrs));
  }

  for (let v = 0; v < view.n; v++) {
    const group = el("g", {
      class: `vertex${hooks.selected === v ? " selected" : ""}`,
      "data-vertex": `${v}`,
    });
    group.appendChild(
      el("circle", { cx: `${pos[v].x}`, cy: `${pos[v].y}`, r: "14" }),
    );
    const label = el("text", {
      x: `${pos[v].x}`,
      y: `${pos[v].y + 4}`,
      class: "vertex-label",
    });
    label.textContent = `${v}`;
    group.appendChild(label);
    const badge = view.badges.get(v);
    if (badge) {
      const off = 26;
      const cx = SIZE / 2;
      const cy = SIZE / 2;
      const dx = pos[v].x - cx;
      const dy = pos[v].y - cy;
      const len = Math.hypot(dx, dy) || 1;
      const text = el("text", {
        x: `${pos[v].x + (dx / len) * off}`,
        y: `${pos[v].y + (dy / len) * off + 3}`,
        class: "vertex-badge",
        "data-badge": `${v}`,
      });
      text.textContent = badge;
      group.appendChild(text);
    }
    if (hooks.onVertexClick) {
      group.addEventListener("click", () => hooks.onVertexClick!(v));
    }
    svg.appendChild(group);
  }
  container.appendChild(svg);
  return svg;
}

export function showToast(container: HTMLElement, message: string): void {
  const toast = document.createElement("div");
  toast.className = "toast";
  toast.textContent = message;
  container.appendChild(toast);
  setTimeout(() => toast.remove(), 3500);
}

export function banner(terminal: { winner: string; terminal: string } | null): string {
  if (!terminal) return "";
  if (terminal.terminal === "TransitiveTournament") {
    return "OBreaker wins: transitive tournament";
  }
  if (terminal.terminal === "CycleClosed") {
    return "OMaker wins: cycle";
  }
  return `${terminal.winner} wins: forfeit`;
}
