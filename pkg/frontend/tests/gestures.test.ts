import { describe, expect, it } from "vitest";

import { gestureToEditOp, nearestWallIndex } from "../src/gestures.js";
import type { StatePayload } from "../src/protocol.js";

function payload(): StatePayload {
  return {
    revision: 1,
    step: 0,
    status: "running",
    win: false,
    win_step: null,
    bounds: { width: 20, height: 20 },
    walls: [
      [
        [5, 5],
        [9, 5],
      ],
    ],
    beacons: [{ label: "A", x: 3, y: 4 }],
    areas: [],
    win_zones: [{ center: [18, 18], radius: 2, robots: "all" }],
    robots: [
      { name: "r1", x: 6, y: 6, heading: 0, desire: {}, memory: null },
    ],
    radar: {},
    sensor: { ray_count: 4, range: 6, beacon_radius: 0.2 },
    robot_radius: 0.25,
  };
}

describe("gestureToEditOp", () => {
  it("drag in wall mode adds a wall segment", () => {
    const op = gestureToEditOp("edit-wall", { down: [1, 2], up: [3, 4], alt: false }, payload());
    expect(op).toEqual({ target: "wall", action: "add", segment: [[1, 2], [3, 4]] });
  });

  it("alt-click near a wall removes it by index", () => {
    const op = gestureToEditOp(
      "edit-wall",
      { down: [7, 5.1], up: [7, 5.1], alt: true },
      payload(),
    );
    expect(op).toEqual({ target: "wall", action: "remove", index: 0 });
  });

  it("a bare click in wall mode does nothing", () => {
    expect(
      gestureToEditOp("edit-wall", { down: [1, 1], up: [1.01, 1], alt: false }, payload()),
    ).toBeNull();
  });

  it("click on empty space in beacon mode adds a fresh-labeled beacon", () => {
    const op = gestureToEditOp(
      "edit-beacon",
      { down: [10, 10], up: [10, 10], alt: false },
      payload(),
    );
    expect(op?.target).toBe("beacon");
    expect(op?.action).toBe("add");
    expect(op?.label).not.toBe("A");
  });

  it("drag from a beacon moves it", () => {
    const op = gestureToEditOp(
      "edit-beacon",
      { down: [3.1, 4.0], up: [8, 9], alt: false },
      payload(),
    );
    expect(op).toEqual({ target: "beacon", action: "move", label: "A", x: 8, y: 9 });
  });

  it("drag from a robot moves it", () => {
    const op = gestureToEditOp(
      "edit-robot",
      { down: [6, 6], up: [7, 7], alt: false },
      payload(),
    );
    expect(op).toEqual({ target: "robot", action: "move", name: "r1", x: 7, y: 7 });
  });

  it("area add requires an existing trigger beacon and uses the first one", () => {
    const op = gestureToEditOp(
      "edit-area",
      { down: [12, 12], up: [12, 12], alt: false },
      payload(),
    );
    expect(op?.target).toBe("area");
    expect(op?.trigger_beacon).toBe("A");
    const bare = payload();
    bare.beacons = [];
    expect(
      gestureToEditOp("edit-area", { down: [12, 12], up: [12, 12], alt: false }, bare),
    ).toBeNull();
  });

  it("drag inside a win zone moves it keeping its radius", () => {
    const op = gestureToEditOp(
      "edit-win",
      { down: [18, 18], up: [15, 15], alt: false },
      payload(),
    );
    expect(op).toEqual({
      target: "win",
      action: "move",
      index: 0,
      zone: { center: [15, 15], radius: 2 },
    });
  });

  it("nearestWallIndex ignores far-away points", () => {
    expect(nearestWallIndex(payload(), [1, 15])).toBeNull();
  });
});
