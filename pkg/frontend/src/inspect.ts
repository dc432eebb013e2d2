// Inspect panel content: memory value tree, derived relation rows, and the
// last desire for the selected robot. Pure string builders (HTML).

import type { RobotPayload } from "./protocol.js";

function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

export function valueTree(value: unknown, depth = 0): string {
  if (value === null) return `<span class="v-null">null</span>`;
  if (typeof value === "boolean" || typeof value === "number") {
    return `<span class="v-num">${String(value)}</span>`;
  }
  if (typeof value === "string") {
    return `<span class="v-str">"${escapeHtml(value)}"</span>`;
  }
  if (Array.isArray(value)) {
    if (value.length === 0) return "[]";
    const items = value.map((v) => `<li>${valueTree(v, depth + 1)}</li>`).join("");
    return `<ul class="v-list">${items}</ul>`;
  }
  const entries = Object.entries(value as Record<string, unknown>)
    .sort(([a], [b]) => (a < b ? -1 : 1))
    .map(([k, v]) => `<li><span class="v-key">${escapeHtml(k)}</span>: ${valueTree(v, depth + 1)}</li>`)
    .join("");
  return `<ul class="v-rec">${entries}</ul>`;
}

export function robotPanel(robot: RobotPayload): string {
  const err = robot.error
    ? `<div class="insp-error">${escapeHtml(robot.error)}</div>`
    : "";
  return (
    `<h3>${escapeHtml(robot.name)}</h3>` +
    err +
    `<div>pose: (${robot.x.toFixed(2)}, ${robot.y.toFixed(2)}) @ ${robot.heading.toFixed(2)}</div>` +
    `<div class="insp-section">last desire</div>${valueTree(robot.desire)}` +
    `<div class="insp-section">memory</div>${valueTree(robot.memory)}`
  );
}

export function relationRows(predicate: string, rows: Record<string, unknown>[]): string {
  if (rows.length === 0) {
    return `<div class="insp-section">${escapeHtml(predicate)}</div><div>(no rows)</div>`;
  }
  const body = rows.map((row) => `<li>${valueTree(row)}</li>`).join("");
  return (
    `<div class="insp-section">${escapeHtml(predicate)} (${rows.length} rows)</div>` +
    `<ol class="rows">${body}</ol>`
  );
}
