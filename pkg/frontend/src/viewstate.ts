// ViewState: a pure projection of the last state fetch plus every
// DisplayCommand applied since, in order. Reducers never mutate their
// input, so replaying the same command sequence from the same base
// always lands on the identical view.

import type { DisplayCommand, MapGeometry, SessionState } from "./types.js";

export interface TranscriptLine {
  speaker: "USER" | "SYSTEM";
  text: string;
  error?: boolean;
}

export interface EngineMarker {
  id: string;
  at: string;
  route: string[] | null;
}

export interface ViewState {
  map: MapGeometry | null;
  engines: Record<string, EngineMarker>;
  congestion: Record<string, number>;
  transcript: TranscriptLine[];
  goals: string[];
  pendingInput: boolean;
  complete: boolean;
}

export function emptyView(): ViewState {
  return {
    map: null,
    engines: {},
    congestion: {},
    transcript: [],
    goals: [],
    pendingInput: true,
    complete: false,
  };
}

export function viewFromState(state: SessionState): ViewState {
  const engines: Record<string, EngineMarker> = {};
  for (const e of state.engines) {
    engines[e.id] = { id: e.id, at: e.at, route: e.route ? [...e.route] : null };
  }
  const transcript: TranscriptLine[] = [];
  for (const entry of state.transcript) {
    transcript.push({ speaker: "USER", text: entry.user });
    transcript.push({ speaker: "SYSTEM", text: entry.system });
  }
  return {
    map: state.map,
    engines,
    congestion: { ...state.congested },
    transcript,
    goals: [...state.goals],
    pendingInput: !state.complete,
    complete: state.complete,
  };
}

function knownCity(view: ViewState, city: string): boolean {
  return view.map !== null && view.map.cities.some((c) => c.id === city);
}

/** Apply one display command; unknown ids drop the command with a console
 * diagnostic and leave the view untouched. */
export function applyCommand(view: ViewState, cmd: DisplayCommand): ViewState {
  switch (cmd.kind) {
    case "SHOW_MAP":
      return view;
    case "SHOW_ROUTE": {
      const engine = view.engines[cmd.engineId];
      if (!engine || cmd.path.some((c) => !knownCity(view, c))) {
        console.warn("dropping SHOW_ROUTE with unknown ids", cmd);
        return view;
      }
      const moved: EngineMarker = {
        ...engine,
        route: [...cmd.path],
        at: cmd.path[cmd.path.length - 1],
      };
      return { ...view, engines: { ...view.engines, [cmd.engineId]: moved } };
    }
    case "CLEAR_ROUTE": {
      const engine = view.engines[cmd.engineId];
      if (!engine) {
        console.warn("dropping CLEAR_ROUTE for unknown engine", cmd);
        return view;
      }
      const back: EngineMarker = {
        ...engine,
        at: engine.route ? engine.route[0] : engine.at,
        route: null,
      };
      return { ...view, engines: { ...view.engines, [cmd.engineId]: back } };
    }
    case "MARK_CONGESTION": {
      if (!knownCity(view, cmd.city)) {
        console.warn("dropping MARK_CONGESTION for unknown city", cmd);
        return view;
      }
      return { ...view, congestion: { ...view.congestion, [cmd.city]: cmd.hours } };
    }
    case "HIGHLIGHT_CITY":
      if (!knownCity(view, cmd.city)) {
        console.warn("dropping HIGHLIGHT_CITY for unknown city", cmd);
        return view;
      }
      return view;
    case "UTTERANCE": {
      const line: TranscriptLine = {
        speaker: cmd.speaker === "USER" ? "USER" : "SYSTEM",
        text: cmd.text,
      };
      return { ...view, transcript: [...view.transcript, line] };
    }
    default:
      console.warn("dropping unknown display command", cmd);
      return view;
  }
}

export function applyCommands(view: ViewState, cmds: DisplayCommand[]): ViewState {
  let out = view;
  for (const cmd of cmds) {
    out = applyCommand(out, cmd);
  }
  return out;
}

export function appendUserLine(view: ViewState, text: string): ViewState {
  return {
    ...view,
    transcript: [...view.transcript, { speaker: "USER", text }],
  };
}

export function markTransportFailure(view: ViewState, note: string): ViewState {
  return {
    ...view,
    transcript: [...view.transcript, { speaker: "SYSTEM", text: note, error: true }],
  };
}
