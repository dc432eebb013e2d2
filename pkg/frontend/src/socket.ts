// WebSocket transport with an automatic reconnect loop (1s -> 10s backoff).

import type { ClientMessage, ServerMessage } from "./protocol.js";

export interface SocketHooks {
  onMessage: (msg: ServerMessage) => void;
  onStateChange: (state: "connected" | "disconnected" | "reconnecting") => void;
}

export class CockpitSocket {
  private ws: WebSocket | null = null;
  private backoffMs = 1000;
  private closed = false;

  constructor(
    private url: string,
    private hooks: SocketHooks,
  ) {}

  connect(): void {
    this.closed = false;
    this.open();
  }

  private open(): void {
    const ws = new WebSocket(this.url);
    this.ws = ws;
    ws.onopen = () => {
      this.backoffMs = 1000;
      this.hooks.onStateChange("connected");
    };
    ws.onmessage = (event) => {
      let parsed: ServerMessage;
      try {
        parsed = JSON.parse(event.data as string) as ServerMessage;
      } catch {
        return; // malformed frame: log-and-skip, never crash the frame loop
      }
      this.hooks.onMessage(parsed);
    };
    ws.onclose = () => {
      this.ws = null;
      if (this.closed) {
        this.hooks.onStateChange("disconnected");
        return;
      }
      this.hooks.onStateChange("reconnecting");
      setTimeout(() => this.open(), this.backoffMs);
      this.backoffMs = Math.min(this.backoffMs * 2, 10000);
    };
    ws.onerror = () => {
      ws.close();
    };
  }

  send(msg: ClientMessage): boolean {
    if (this.ws === null || this.ws.readyState !== WebSocket.OPEN) {
      return false;
    }
    this.ws.send(JSON.stringify(msg));
    return true;
  }

  close(): void {
    this.closed = true;
    this.ws?.close();
  }
}
