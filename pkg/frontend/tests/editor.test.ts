import { describe, expect, it } from "vitest";

import { diagnosticsToMarkers, markerSummary } from "../src/editor.js";

const SOURCE = "FreedomMotion(radar) = 1;\nRobot(robot_name:) :-\n  Sensor(robot_name:);\n";

describe("diagnosticsToMarkers", () => {
  it("maps a diagnostic to its line, column, and character offset", () => {
    const markers = diagnosticsToMarkers(SOURCE, [
      { severity: "error", message: "boom", line: 2, column: 7 },
    ]);
    expect(markers).toHaveLength(1);
    expect(markers[0].line).toBe(2);
    expect(markers[0].column).toBe(7);
    // Offset points into line 2: length of line 1 plus newline plus col-1.
    expect(markers[0].offset).toBe("FreedomMotion(radar) = 1;\n".length + 6);
    expect(markerSummary(markers[0])).toBe("line 2, col 7: boom");
  });

  it("clamps out-of-range locations into the buffer", () => {
    const markers = diagnosticsToMarkers("ab\ncd", [
      { severity: "error", message: "late", line: 99, column: 99 },
    ]);
    expect(markers[0].line).toBe(2);
    expect(markers[0].offset).toBeLessThanOrEqual("ab\ncd".length);
  });

  it("a parse error at line 1, column 5 lands at offset 4", () => {
    const markers = diagnosticsToMarkers("P(x:", [
      { severity: "error", message: "expected an expression", line: 1, column: 5 },
    ]);
    expect(markers[0].offset).toBe(4);
  });
});
