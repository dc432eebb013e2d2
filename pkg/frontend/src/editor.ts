// Program editor helpers: diagnostics map to editor line/column markers.

import type { DiagnosticItem } from "./protocol.js";

export interface EditorMarker {
  line: number; // 1-based
  column: number; // 1-based
  message: string;
  /** Character offset into the editor text, for cursor placement. */
  offset: number;
}

export function diagnosticsToMarkers(source: string, items: DiagnosticItem[]): EditorMarker[] {
  const lines = source.split("\n");
  return items.map((d) => {
    const line = Math.min(Math.max(d.line, 1), lines.length);
    const lineText = lines[line - 1] ?? "";
    const column = Math.min(Math.max(d.column, 1), lineText.length + 1);
    let offset = 0;
    for (let i = 0; i < line - 1; i += 1) {
      offset += lines[i].length + 1;
    }
    offset += column - 1;
    return { line, column, message: d.message, offset };
  });
}

export function markerSummary(marker: EditorMarker): string {
  return `line ${marker.line}, col ${marker.column}: ${marker.message}`;
}
