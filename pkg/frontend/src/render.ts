// Pure renderer: a state payload becomes a draw list; painting the list onto
// a canvas is a thin loop in paint(). Keeping the list pure makes the visual
// conventions (ray endpoint colors, restricted-vs-accessible fills, the win
// banner) unit-testable without a DOM.

import type { StatePayload } from "./protocol.js";

export const RAY_COLORS: Record<string, string> = {
  wall: "#e23b3b", // red endpoints: wall
  beacon: "#2ecc40", // green endpoints: beacon
  robot: "#ff9f1a", // orange endpoints: robot
  none: "rgba(160,160,160,0.25)", // faint full-range ray
};

const ROBOT_COLORS = ["#3b6fe2", "#9b59b6", "#16a085", "#d35400", "#2c3e50", "#c0392b"];

export type DrawOp =
  | { kind: "clear"; width: number; height: number }
  | { kind: "line"; from: [number, number]; to: [number, number]; color: string; width: number }
  | {
      kind: "circle";
      center: [number, number];
      radius: number;
      stroke: string;
      fill: string | null;
      dash?: number[];
    }
  | { kind: "dot"; center: [number, number]; radius: number; color: string }
  | {
      kind: "square";
      center: [number, number];
      size: number;
      angle: number;
      color: string;
      outline: string | null;
    }
  | { kind: "label"; at: [number, number]; text: string; color: string; size: number }
  | { kind: "banner"; text: string };

export function robotColor(index: number): string {
  return ROBOT_COLORS[index % ROBOT_COLORS.length];
}

export function buildDrawList(payload: StatePayload, selectedRobot: string | null): DrawOp[] {
  const ops: DrawOp[] = [];
  const { width, height } = payload.bounds;
  ops.push({ kind: "clear", width, height });

  // Arena edge.
  ops.push({
    kind: "line",
    from: [0, 0],
    to: [width, 0],
    color: "#444",
    width: 0.06,
  });
  ops.push({ kind: "line", from: [width, 0], to: [width, height], color: "#444", width: 0.06 });
  ops.push({ kind: "line", from: [width, height], to: [0, height], color: "#444", width: 0.06 });
  ops.push({ kind: "line", from: [0, height], to: [0, 0], color: "#444", width: 0.06 });

  // Win zones first: outlines under everything else.
  for (const zone of payload.win_zones) {
    ops.push({
      kind: "circle",
      center: zone.center,
      radius: zone.radius,
      stroke: "#d4af37",
      fill: null,
      dash: [0.3, 0.2],
    });
  }

  // Areas: restricted filled, accessible outline only.
  for (const area of payload.areas) {
    const restricted = area.state === "restricted";
    ops.push({
      kind: "circle",
      center: area.center,
      radius: area.radius,
      stroke: area.color,
      fill: restricted ? withalpha(area.color, 0.35) : null,
    });
    ops.push({
      kind: "label",
      at: [area.center[0], area.center[1] + area.radius + 0.3],
      text: `${area.id} (${area.state})`,
      color: area.color,
      size: 0.35,
    });
  }

  // Radar rays: one line per ray from robot to hit point, endpoint colored.
  for (const robot of payload.robots) {
    const rays = payload.radar[robot.name] ?? [];
    for (const ray of rays) {
      const color = RAY_COLORS[ray.object] ?? RAY_COLORS.none;
      ops.push({
        kind: "line",
        from: [robot.x, robot.y],
        to: ray.hit,
        color: ray.object === "none" ? RAY_COLORS.none : withalpha(color, 0.35),
        width: 0.02,
      });
      if (ray.object !== "none") {
        ops.push({ kind: "dot", center: ray.hit, radius: 0.07, color });
      }
    }
  }

  // Walls above rays so they stay crisp.
  for (const [a, b] of payload.walls) {
    ops.push({ kind: "line", from: a, to: b, color: "#222", width: 0.1 });
  }

  // Beacons: labeled green discs.
  for (const beacon of payload.beacons) {
    ops.push({
      kind: "circle",
      center: [beacon.x, beacon.y],
      radius: payload.sensor.beacon_radius,
      stroke: "#1d7a30",
      fill: "#2ecc40",
    });
    ops.push({
      kind: "label",
      at: [beacon.x, beacon.y - payload.sensor.beacon_radius - 0.15],
      text: beacon.label,
      color: "#1d7a30",
      size: 0.4,
    });
  }

  // Robots: colored squares with a heading tick.
  payload.robots.forEach((robot, i) => {
    const size = payload.robot_radius * 2;
    ops.push({
      kind: "square",
      center: [robot.x, robot.y],
      size,
      angle: robot.heading,
      color: robot.error ? "#888" : robotColor(i),
      outline: robot.name === selectedRobot ? "#ffd700" : null,
    });
    const tip: [number, number] = [
      robot.x + Math.cos(robot.heading) * size * 0.8,
      robot.y + Math.sin(robot.heading) * size * 0.8,
    ];
    ops.push({ kind: "line", from: [robot.x, robot.y], to: tip, color: "#111", width: 0.05 });
    ops.push({
      kind: "label",
      at: [robot.x, robot.y - size * 0.8],
      text: robot.name,
      color: "#111",
      size: 0.35,
    });
  });

  if (payload.win) {
    ops.push({ kind: "banner", text: `WIN at step ${payload.win_step}` });
  }
  return ops;
}

function withalpha(color: string, alpha: number): string {
  // Known palette colors are hex; fall back to the raw color otherwise.
  if (color.startsWith("#") && color.length === 7) {
    const r = parseInt(color.slice(1, 3), 16);
    const g = parseInt(color.slice(3, 5), 16);
    const b = parseInt(color.slice(5, 7), 16);
    return `rgba(${r},${g},${b},${alpha})`;
  }
  const named: Record<string, string> = {
    red: `rgba(226,59,59,${alpha})`,
    blue: `rgba(59,111,226,${alpha})`,
    green: `rgba(46,204,64,${alpha})`,
  };
  return named[color] ?? color;
}

export interface Camera {
  scale: number;
  offsetX: number;
  offsetY: number;
}

export function fitCamera(
  bounds: { width: number; height: number },
  canvasWidth: number,
  canvasHeight: number,
): Camera {
  const margin = 20;
  const scale = Math.min(
    (canvasWidth - 2 * margin) / bounds.width,
    (canvasHeight - 2 * margin) / bounds.height,
  );
  return {
    scale,
    offsetX: (canvasWidth - bounds.width * scale) / 2,
    // Canvas y grows downward; world y grows upward.
    offsetY: (canvasHeight + bounds.height * scale) / 2,
  };
}

export function worldToScreen(camera: Camera, x: number, y: number): [number, number] {
  return [camera.offsetX + x * camera.scale, camera.offsetY - y * camera.scale];
}

export function screenToWorld(camera: Camera, px: number, py: number): [number, number] {
  return [(px - camera.offsetX) / camera.scale, (camera.offsetY - py) / camera.scale];
}

export function paint(ctx: CanvasRenderingContext2D, ops: DrawOp[], camera: Camera): void {
  for (const op of ops) {
    switch (op.kind) {
      case "clear": {
        ctx.fillStyle = "#fafaf7";
        ctx.fillRect(0, 0, ctx.canvas.width, ctx.canvas.height);
        break;
      }
      case "line": {
        const [x1, y1] = worldToScreen(camera, op.from[0], op.from[1]);
        const [x2, y2] = worldToScreen(camera, op.to[0], op.to[1]);
        ctx.strokeStyle = op.color;
        ctx.lineWidth = Math.max(1, op.width * camera.scale);
        ctx.beginPath();
        ctx.moveTo(x1, y1);
        ctx.lineTo(x2, y2);
        ctx.stroke();
        break;
      }
      case "circle": {
        const [cx, cy] = worldToScreen(camera, op.center[0], op.center[1]);
        ctx.beginPath();
        ctx.setLineDash((op.dash ?? []).map((d) => d * camera.scale));
        ctx.arc(cx, cy, op.radius * camera.scale, 0, Math.PI * 2);
        if (op.fill) {
          ctx.fillStyle = op.fill;
          ctx.fill();
        }
        ctx.strokeStyle = op.stroke;
        ctx.lineWidth = 1.5;
        ctx.stroke();
        ctx.setLineDash([]);
        break;
      }
      case "dot": {
        const [cx, cy] = worldToScreen(camera, op.center[0], op.center[1]);
        ctx.beginPath();
        ctx.arc(cx, cy, Math.max(2, op.radius * camera.scale), 0, Math.PI * 2);
        ctx.fillStyle = op.color;
        ctx.fill();
        break;
      }
      case "square": {
        const [cx, cy] = worldToScreen(camera, op.center[0], op.center[1]);
        const s = op.size * camera.scale;
        ctx.save();
        ctx.translate(cx, cy);
        ctx.rotate(-op.angle);
        ctx.fillStyle = op.color;
        ctx.fillRect(-s / 2, -s / 2, s, s);
        if (op.outline) {
          ctx.strokeStyle = op.outline;
          ctx.lineWidth = 3;
          ctx.strokeRect(-s / 2, -s / 2, s, s);
        }
        ctx.restore();
        break;
      }
      case "label": {
        const [x, y] = worldToScreen(camera, op.at[0], op.at[1]);
        ctx.fillStyle = op.color;
        ctx.font = `${Math.max(10, op.size * camera.scale)}px sans-serif`;
        ctx.textAlign = "center";
        ctx.fillText(op.text, x, y);
        break;
      }
      case "banner": {
        ctx.fillStyle = "rgba(212,175,55,0.92)";
        ctx.fillRect(0, 0, ctx.canvas.width, 44);
        ctx.fillStyle = "#222";
        ctx.font = "bold 22px sans-serif";
        ctx.textAlign = "center";
        ctx.fillText(op.text, ctx.canvas.width / 2, 30);
        break;
      }
    }
  }
}
