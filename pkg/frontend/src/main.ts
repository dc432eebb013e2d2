// Cockpit wiring: socket, canvas, toolbar, editor, inspect panel. Every
// displayed fact originates from a server payload; the cockpit never
// simulates locally.

import { diagnosticsToMarkers, markerSummary } from "./editor.js";
import { gestureToEditOp } from "./gestures.js";
import { relationRows, robotPanel } from "./inspect.js";
import type { ServerMessage, StatePayload } from "./protocol.js";
import {
  buildDrawList,
  fitCamera,
  paint,
  screenToWorld,
  type Camera,
} from "./render.js";
import { CockpitSocket } from "./socket.js";
import { applyStatePayload, initialViewState, type ToolMode } from "./state.js";

const view = initialViewState();

const canvas = document.getElementById("world") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const statusBar = document.getElementById("status")!;
const banner = document.getElementById("connection-banner")!;
const editor = document.getElementById("program") as HTMLTextAreaElement;
const diagnosticsList = document.getElementById("diagnostics")!;
const inspectPanel = document.getElementById("inspect-panel")!;
const relationsPanel = document.getElementById("relations-panel")!;
const levelSelect = document.getElementById("level-select") as HTMLSelectElement;
const predicateInput = document.getElementById("predicate") as HTMLInputElement;
const toastBox = document.getElementById("toast")!;

let camera: Camera = { scale: 20, offsetX: 0, offsetY: 0 };

function render(): void {
  if (view.latest === null) return;
  camera = fitCamera(view.latest.bounds, canvas.width, canvas.height);
  paint(ctx, buildDrawList(view.latest, view.selectedRobot), camera);
  const p = view.latest;
  statusBar.textContent =
    `step ${p.step} | ${p.status} | revision ${p.revision}` +
    (view.running ? " | running" : " | paused") +
    (view.selectedRobot ? ` | selected: ${view.selectedRobot}` : "");
  if (view.selectedRobot !== null) {
    const robot = p.robots.find((r) => r.name === view.selectedRobot);
    if (robot) inspectPanel.innerHTML = robotPanel(robot);
  }
}

function toast(message: string): void {
  toastBox.textContent = message;
  toastBox.classList.add("visible");
  setTimeout(() => toastBox.classList.remove("visible"), 3500);
}

function onServerMessage(msg: ServerMessage): void {
  switch (msg.type) {
    case "state": {
      if (applyStatePayload(view, msg.payload)) render();
      break;
    }
    case "diagnostics": {
      view.editorDiagnostics = msg.items;
      view.programAccepted = msg.items.length === 0;
      renderDiagnostics();
      break;
    }
    case "inspect_result": {
      relationsPanel.innerHTML = relationRows(msg.predicate, msg.rows);
      break;
    }
    case "win": {
      toast(`Win at step ${msg.step}`);
      view.running = false;
      break;
    }
    case "error": {
      view.lastError = msg.message;
      if (msg.stage === "parse") {
        view.programAccepted = false;
        view.editorDiagnostics = [
          {
            severity: "error",
            message: msg.message,
            line: msg.line ?? 1,
            column: msg.column ?? 1,
          },
        ];
        renderDiagnostics();
      } else {
        toast(`${msg.stage}: ${msg.message}`);
      }
      break;
    }
  }
}

function renderDiagnostics(): void {
  diagnosticsList.innerHTML = "";
  const badge = document.getElementById("program-badge")!;
  if (view.programAccepted === true) {
    badge.textContent = "accepted";
    badge.className = "badge ok";
  } else if (view.programAccepted === false) {
    badge.textContent = "rejected";
    badge.className = "badge bad";
  }
  const markers = diagnosticsToMarkers(editor.value, view.editorDiagnostics);
  for (const marker of markers) {
    const li = document.createElement("li");
    li.textContent = markerSummary(marker);
    li.onclick = () => {
      editor.focus();
      editor.setSelectionRange(marker.offset, marker.offset);
    };
    diagnosticsList.appendChild(li);
  }
}

const socket = new CockpitSocket(
  `${location.protocol === "https:" ? "wss" : "ws"}://${location.host}/ws`,
  {
    onMessage: onServerMessage,
    onStateChange: (state) => {
      view.connection = state;
      banner.className = state === "connected" ? "hidden" : "";
      banner.textContent = state === "reconnecting" ? "connection lost - reconnecting..." : "";
      if (state === "connected") void bootstrap();
    },
  },
);

async function bootstrap(): Promise<void> {
  // On (re)connect, pull the snapshot over HTTP and the level catalog.
  try {
    const res = await fetch("/state");
    if (res.ok) {
      const payload = (await res.json()) as StatePayload;
      if (applyStatePayload(view, payload)) render();
    }
    const levels = (await (await fetch("/levels")).json()) as { levels: string[] };
    levelSelect.innerHTML = "";
    for (const name of levels.levels) {
      const option = document.createElement("option");
      option.value = name;
      option.textContent = name;
      levelSelect.appendChild(option);
    }
  } catch {
    // the banner already reflects connection trouble
  }
}

// --- toolbar -----------------------------------------------------------------

for (const button of document.querySelectorAll<HTMLButtonElement>("[data-tool]")) {
  button.onclick = () => {
    view.tool = button.dataset.tool as ToolMode;
    for (const b of document.querySelectorAll("[data-tool]")) b.classList.remove("active");
    button.classList.add("active");
    if (view.tool !== "run" && view.running) {
      socket.send({ type: "pause" });
      view.running = false;
    }
  };
}

(document.getElementById("btn-step") as HTMLButtonElement).onclick = () => {
  socket.send({ type: "step", count: 1 });
};
(document.getElementById("btn-run") as HTMLButtonElement).onclick = toggleRun;
(document.getElementById("btn-reset") as HTMLButtonElement).onclick = () => {
  socket.send({ type: "reset" });
  view.running = false;
};
(document.getElementById("btn-load") as HTMLButtonElement).onclick = () => {
  socket.send({ type: "load_level", name: levelSelect.value });
  view.running = false;
};
(document.getElementById("btn-submit") as HTMLButtonElement).onclick = submitProgram;
(document.getElementById("btn-inspect") as HTMLButtonElement).onclick = () => {
  if (view.selectedRobot !== null && predicateInput.value) {
    socket.send({
      type: "inspect",
      robot: view.selectedRobot,
      predicate: predicateInput.value,
    });
  }
};

function toggleRun(): void {
  if (view.running) {
    socket.send({ type: "pause" });
    view.running = false;
  } else if (socket.send({ type: "run", interval_ms: 100 })) {
    view.running = true;
  }
  render();
}

function submitProgram(): void {
  socket.send({ type: "set_program", source: editor.value });
}

// --- keyboard: space = step, enter = run/pause ------------------------------------

document.addEventListener("keydown", (event) => {
  const target = event.target as HTMLElement | null;
  if (target && (target.tagName === "TEXTAREA" || target.tagName === "INPUT")) return;
  if (event.code === "Space") {
    event.preventDefault();
    socket.send({ type: "step", count: 1 });
  } else if (event.code === "Enter") {
    event.preventDefault();
    toggleRun();
  }
});

// --- canvas pointer handling -------------------------------------------------------

let pointerDown: [number, number] | null = null;

canvas.addEventListener("pointerdown", (event) => {
  const rect = canvas.getBoundingClientRect();
  pointerDown = screenToWorld(camera, event.clientX - rect.left, event.clientY - rect.top);
});

canvas.addEventListener("pointerup", (event) => {
  if (pointerDown === null || view.latest === null) return;
  const rect = canvas.getBoundingClientRect();
  const up = screenToWorld(camera, event.clientX - rect.left, event.clientY - rect.top);
  const down = pointerDown;
  pointerDown = null;

  if (view.tool === "run" || view.tool === "inspect") {
    // Click selects the nearest robot.
    let best: string | null = null;
    let bestDist = 1.0;
    for (const robot of view.latest.robots) {
      const d = Math.hypot(robot.x - up[0], robot.y - up[1]);
      if (d < bestDist) {
        best = robot.name;
        bestDist = d;
      }
    }
    view.selectedRobot = best;
    render();
    return;
  }

  const op = gestureToEditOp(view.tool, { down, up, alt: event.altKey }, view.latest);
  if (op !== null) {
    socket.send({ type: "edit", op });
  }
});

canvas.addEventListener("contextmenu", (event) => event.preventDefault());

socket.connect();
