// Wire types mirroring docs/protocol.md (the bridge is the single source of
// truth; the cockpit never simulates locally).

export interface RadarRayPayload {
  angle: number;
  distance: number;
  object: "beacon" | "wall" | "robot" | "none";
  label: string;
  hit: [number, number];
}

export interface RobotPayload {
  name: string;
  x: number;
  y: number;
  heading: number;
  desire: Record<string, unknown>;
  memory: unknown;
  error?: string;
  warning?: string;
}

export interface AreaPayload {
  id: string;
  center: [number, number];
  radius: number;
  state: "accessible" | "restricted";
  color: string;
  trigger_beacon: string;
}

export interface StatePayload {
  revision: number;
  step: number;
  status: string;
  win: boolean;
  win_step: number | null;
  bounds: { width: number; height: number };
  walls: [[number, number], [number, number]][];
  beacons: { label: string; x: number; y: number }[];
  areas: AreaPayload[];
  win_zones: { center: [number, number]; radius: number; robots: string[] | "all" }[];
  robots: RobotPayload[];
  radar: Record<string, RadarRayPayload[]>;
  sensor: { ray_count: number; range: number; beacon_radius: number };
  robot_radius: number;
}

export interface DiagnosticItem {
  severity: string;
  message: string;
  line: number;
  column: number;
}

export type ServerMessage =
  | { type: "state"; payload: StatePayload }
  | { type: "diagnostics"; items: DiagnosticItem[] }
  | { type: "inspect_result"; robot: string; predicate: string; rows: Record<string, unknown>[] }
  | { type: "win"; step: number }
  | { type: "error"; stage: string; message: string; line?: number; column?: number };

export type EditOp = Record<string, unknown> & {
  target: "wall" | "beacon" | "robot" | "area" | "win";
  action: "add" | "remove" | "move";
};

export type ClientMessage =
  | { type: "load_level"; name: string }
  | { type: "set_program"; source: string }
  | { type: "step"; count?: number }
  | { type: "run"; interval_ms: number }
  | { type: "pause" }
  | { type: "reset" }
  | { type: "edit"; op: EditOp }
  | { type: "inspect"; robot: string; predicate: string };
