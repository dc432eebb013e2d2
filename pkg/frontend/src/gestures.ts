// Pointer gestures -> edit operations, as pure data. One gesture emits one
// op; the server revalidates and either broadcasts the new state or rejects.

import type { EditOp, StatePayload } from "./protocol.js";
import type { ToolMode } from "./state.js";

export interface Gesture {
  // World coordinates of pointer down/up; `alt` marks a remove gesture.
  down: [number, number];
  up: [number, number];
  alt: boolean;
}

const DRAG_EPS = 0.15;

function dist(a: [number, number], b: [number, number]): number {
  return Math.hypot(a[0] - b[0], a[1] - b[1]);
}

function pointSegmentDistance(
  p: [number, number],
  a: [number, number],
  b: [number, number],
): number {
  const ex = b[0] - a[0];
  const ey = b[1] - a[1];
  const lengthSq = ex * ex + ey * ey;
  if (lengthSq === 0) return dist(p, a);
  let t = ((p[0] - a[0]) * ex + (p[1] - a[1]) * ey) / lengthSq;
  t = Math.min(1, Math.max(0, t));
  return dist(p, [a[0] + t * ex, a[1] + t * ey]);
}

export function nearestWallIndex(payload: StatePayload, p: [number, number]): number | null {
  let best: number | null = null;
  let bestDist = 0.5;
  payload.walls.forEach((wall, i) => {
    const d = pointSegmentDistance(p, wall[0], wall[1]);
    if (d < bestDist) {
      best = i;
      bestDist = d;
    }
  });
  return best;
}

function nearestByCenter<T>(
  items: T[],
  centerOf: (item: T) => [number, number],
  p: [number, number],
  threshold: number,
): T | null {
  let best: T | null = null;
  let bestDist = threshold;
  for (const item of items) {
    const d = dist(centerOf(item), p);
    if (d < bestDist) {
      best = item;
      bestDist = d;
    }
  }
  return best;
}

let counter = 0;

function freshName(prefix: string, taken: Set<string>): string {
  for (;;) {
    counter += 1;
    const name = `${prefix}${counter}`;
    if (!taken.has(name)) return name;
  }
}

/** Translate a finished pointer gesture into an edit op, or null when the
 * gesture means nothing in the current tool mode. */
export function gestureToEditOp(
  tool: ToolMode,
  gesture: Gesture,
  payload: StatePayload,
): EditOp | null {
  const { down, up, alt } = gesture;
  const dragged = dist(down, up) > DRAG_EPS;

  if (tool === "edit-wall") {
    if (alt) {
      const index = nearestWallIndex(payload, down);
      return index === null ? null : { target: "wall", action: "remove", index };
    }
    if (!dragged) return null;
    return { target: "wall", action: "add", segment: [down, up] };
  }

  if (tool === "edit-beacon") {
    const hit = nearestByCenter(payload.beacons, (b) => [b.x, b.y], down, 0.6);
    if (alt) {
      return hit === null ? null : { target: "beacon", action: "remove", label: hit.label };
    }
    if (hit !== null && dragged) {
      return { target: "beacon", action: "move", label: hit.label, x: up[0], y: up[1] };
    }
    if (hit === null) {
      const taken = new Set(payload.beacons.map((b) => b.label));
      return {
        target: "beacon",
        action: "add",
        label: freshName("B", taken),
        x: up[0],
        y: up[1],
      };
    }
    return null;
  }

  if (tool === "edit-robot") {
    const hit = nearestByCenter(payload.robots, (r) => [r.x, r.y], down, 0.6);
    if (alt) {
      return hit === null ? null : { target: "robot", action: "remove", name: hit.name };
    }
    if (hit !== null && dragged) {
      return { target: "robot", action: "move", name: hit.name, x: up[0], y: up[1] };
    }
    if (hit === null) {
      const taken = new Set(payload.robots.map((r) => r.name));
      return {
        target: "robot",
        action: "add",
        name: freshName("bot", taken),
        x: up[0],
        y: up[1],
        heading: 0,
      };
    }
    return null;
  }

  if (tool === "edit-area") {
    const hit = nearestByCenter(payload.areas, (a) => a.center, down, 1.0);
    if (alt) {
      return hit === null ? null : { target: "area", action: "remove", id: hit.id };
    }
    if (hit !== null && dragged) {
      return { target: "area", action: "move", id: hit.id, center: up };
    }
    if (hit === null) {
      if (payload.beacons.length === 0) return null; // areas need a trigger beacon
      const taken = new Set(payload.areas.map((a) => a.id));
      return {
        target: "area",
        action: "add",
        id: freshName("area", taken),
        center: up,
        radius: 1.5,
        trigger_beacon: payload.beacons[0].label,
      };
    }
    return null;
  }

  if (tool === "edit-win") {
    const zones = payload.win_zones;
    const hitIndex = zones.findIndex((z) => dist(z.center, down) < Math.max(1.0, z.radius));
    if (alt) {
      return hitIndex < 0 ? null : { target: "win", action: "remove", index: hitIndex };
    }
    if (hitIndex >= 0 && dragged) {
      return {
        target: "win",
        action: "move",
        index: hitIndex,
        zone: { center: up, radius: zones[hitIndex].radius },
      };
    }
    if (hitIndex < 0) {
      return {
        target: "win",
        action: "add",
        zone: { center: up, radius: 2.0 },
        robots: "all",
      };
    }
    return null;
  }

  return null;
}
