// DOM rendering: a wholesale redraw of the ViewState into an SVG map and
// a dialogue panel. No incremental state lives in the DOM, so rendering
// after a reload reproduces the same scene from a fresh state fetch.

import type { ViewState } from "./viewstate.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const ENGINE_COLORS = ["#c0392b", "#2471a3", "#1e8449", "#9b59b6", "#d68910"];

function el<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) {
    node.setAttribute(k, String(v));
  }
  return node;
}

export function engineColor(index: number): string {
  return ENGINE_COLORS[index % ENGINE_COLORS.length];
}

export function renderMap(view: ViewState, svg: SVGSVGElement): void {
  svg.replaceChildren();
  if (!view.map) return;
  const byId = new Map(view.map.cities.map((c) => [c.id, c]));
  for (const edge of view.map.edges) {
    const a = byId.get(edge.a);
    const b = byId.get(edge.b);
    if (!a || !b) continue;
    svg.appendChild(el("line", {
      x1: a.x, y1: a.y, x2: b.x, y2: b.y,
      stroke: "#b8b8b8", "stroke-width": 2, class: "track",
    }));
  }
  const engineIds = Object.keys(view.engines).sort();
  engineIds.forEach((eid, idx) => {
    const route = view.engines[eid].route;
    if (!route || route.length < 2) return;
    const points = route
      .map((cid) => byId.get(cid))
      .filter((c): c is NonNullable<typeof c> => Boolean(c))
      .map((c) => `${c.x},${c.y}`)
      .join(" ");
    svg.appendChild(el("polyline", {
      points,
      fill: "none",
      stroke: engineColor(idx),
      "stroke-width": 4,
      opacity: 0.75,
      class: `route route-${eid}`,
      "data-engine": eid,
    }));
  });
  for (const city of view.map.cities) {
    const goal = view.goals.includes(city.id);
    svg.appendChild(el("circle", {
      cx: city.x, cy: city.y, r: goal ? 8 : 5,
      fill: goal ? "#f1c40f" : "#444",
      stroke: "#222", "stroke-width": 1,
      class: "city", "data-city": city.id,
    }));
    const label = el("text", {
      x: city.x + 9, y: city.y - 7, "font-size": 11, class: "city-label",
    });
    label.textContent = city.name.replace(/_/g, " ");
    svg.appendChild(label);
    const extra = view.congestion[city.id];
    if (extra !== undefined) {
      const badge = el("text", {
        x: city.x + 9, y: city.y + 14, "font-size": 11,
        fill: "#c0392b", "font-weight": "bold", class: "congestion-badge",
        "data-city": city.id,
      });
      badge.textContent = `+${extra}h`;
      svg.appendChild(badge);
    }
  }
  engineIds.forEach((eid, idx) => {
    const marker = view.engines[eid];
    const city = byId.get(marker.at);
    if (!city) return;
    svg.appendChild(el("rect", {
      x: city.x - 7, y: city.y - 16, width: 14, height: 10,
      fill: engineColor(idx), stroke: "#111",
      class: `engine engine-${eid}`, "data-engine": eid, "data-city": marker.at,
    }));
  });
}

export function renderTranscript(view: ViewState, list: HTMLElement): void {
  list.replaceChildren();
  for (const line of view.transcript) {
    const item = document.createElement("div");
    item.className = `line ${line.speaker.toLowerCase()}${line.error ? " error" : ""}`;
    item.textContent = `${line.speaker === "USER" ? "U" : "S"}: ${line.text}`;
    list.appendChild(item);
  }
  list.scrollTop = list.scrollHeight;
}

export function renderState(view: ViewState, root: {
  svg: SVGSVGElement;
  transcript: HTMLElement;
  input: HTMLInputElement;
}): void {
  renderMap(view, root.svg);
  renderTranscript(view, root.transcript);
  root.input.disabled = !view.pendingInput || view.complete;
}
