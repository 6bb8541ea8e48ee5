// Wire protocol payloads (version 1), mirroring the session service schemas.

export interface CityGeom {
  id: string;
  name: string;
  x: number;
  y: number;
}

export interface EdgeGeom {
  a: string;
  b: string;
  hours: number;
}

export interface MapGeometry {
  cities: CityGeom[];
  edges: EdgeGeom[];
}

export interface EngineState {
  id: string;
  at: string;
  home: string;
  route: string[] | null;
}

export interface TranscriptEntry {
  turn: number;
  user: string;
  corrected: string;
  system: string;
}

export interface SessionState {
  version: number;
  sessionId: string;
  complete: boolean;
  map: MapGeometry;
  engines: EngineState[];
  congested: Record<string, number>;
  goals: string[];
  transcript: TranscriptEntry[];
  eventCursor: number;
  worldHash: string;
}

export interface CreateSessionResponse {
  version: number;
  sessionId: string;
  scenario: string;
  channel: string;
  greeting: string;
}

export interface TurnResponse {
  version: number;
  turnIndex: number;
  responseText: string;
  displayCommands: DisplayCommand[];
  complete: boolean;
  worldHash: string;
}

export interface ReportResponse {
  version: number;
  turnsToCompletion: number;
  solutionHours: number;
  goalsMet: boolean;
  solutionMarker: string | null;
  wer: number | null;
}

export type DisplayCommand =
  | { kind: "SHOW_MAP" }
  | { kind: "SHOW_ROUTE"; engineId: string; path: string[] }
  | { kind: "CLEAR_ROUTE"; engineId: string }
  | { kind: "MARK_CONGESTION"; city: string; hours: number }
  | { kind: "HIGHLIGHT_CITY"; city: string }
  | { kind: "UTTERANCE"; speaker: string; text: string };
