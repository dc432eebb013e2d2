import { describe, expect, it } from "vitest";

import type { StatePayload } from "../src/protocol.js";
import { applyStatePayload, initialViewState } from "../src/state.js";

function payload(revision: number, step: number): StatePayload {
  return {
    revision,
    step,
    status: "running",
    win: false,
    win_step: null,
    bounds: { width: 10, height: 10 },
    walls: [],
    beacons: [],
    areas: [],
    win_zones: [],
    robots: [
      {
        name: "r1",
        x: 5,
        y: 5,
        heading: 0,
        desire: {},
        memory: null,
      },
    ],
    radar: { r1: [] },
    sensor: { ray_count: 4, range: 6, beacon_radius: 0.2 },
    robot_radius: 0.25,
  };
}

describe("applyStatePayload", () => {
  it("applies fresh payloads and discards stale revisions", () => {
    const view = initialViewState();
    expect(applyStatePayload(view, payload(5, 3))).toBe(true);
    expect(view.latest?.step).toBe(3);
    // Stale: lower revision arrives late and must be discarded.
    expect(applyStatePayload(view, payload(4, 2))).toBe(false);
    expect(view.latest?.revision).toBe(5);
    expect(applyStatePayload(view, payload(6, 4))).toBe(true);
    expect(view.latest?.step).toBe(4);
  });

  it("clears the selection when the robot disappears", () => {
    const view = initialViewState();
    applyStatePayload(view, payload(1, 0));
    view.selectedRobot = "r1";
    const next = payload(2, 1);
    next.robots = [];
    applyStatePayload(view, next);
    expect(view.selectedRobot).toBeNull();
  });

  it("drops the running flag when the simulation ends", () => {
    const view = initialViewState();
    view.running = true;
    const done = payload(1, 10);
    done.status = "won";
    applyStatePayload(view, done);
    expect(view.running).toBe(false);
  });
});
