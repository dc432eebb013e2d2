// ViewState: the single client-side store. Rendering is a pure function of
// this state; stale payloads (lower revision) are discarded.

import type { DiagnosticItem, StatePayload } from "./protocol.js";

export type ToolMode =
  | "run"
  | "inspect"
  | "edit-wall"
  | "edit-beacon"
  | "edit-area"
  | "edit-robot"
  | "edit-win";

export interface ViewState {
  latest: StatePayload | null;
  selectedRobot: string | null;
  tool: ToolMode;
  editorDiagnostics: DiagnosticItem[];
  programAccepted: boolean | null; // null = nothing submitted yet
  running: boolean;
  connection: "connected" | "disconnected" | "reconnecting";
  lastError: string | null;
}

export function initialViewState(): ViewState {
  return {
    latest: null,
    selectedRobot: null,
    tool: "run",
    editorDiagnostics: [],
    programAccepted: null,
    running: false,
    connection: "disconnected",
    lastError: null,
  };
}

/** Apply a state payload; returns true when the view must re-render.
 * Payloads older than the one on screen are dropped. */
export function applyStatePayload(view: ViewState, payload: StatePayload): boolean {
  if (view.latest !== null && payload.revision < view.latest.revision) {
    return false;
  }
  view.latest = payload;
  if (view.selectedRobot !== null && !payload.robots.some((r) => r.name === view.selectedRobot)) {
    view.selectedRobot = null;
  }
  if (payload.status !== "running") {
    view.running = false;
  }
  return true;
}
