/**
 * Browser entry point: binds a SessionView to a WebSocket transport and
 * paints panels onto canvases. Everything testable lives in the DOM-free
 * modules; this file is wiring only.
 */

import { Transport } from "./protocol.js";
import { cellAtPixel } from "./render.js";
import { SessionView } from "./session.js";

const CELL_SIZE = 12;

class WebSocketTransport implements Transport {
  private readonly socket: WebSocket;
  private handler: ((frame: string) => void) | null = null;

  constructor(url: string) {
    this.socket = new WebSocket(url);
    this.socket.onmessage = (msg) => {
      if (this.handler) {
        this.handler(String(msg.data));
      }
    };
  }

  ready(): Promise<void> {
    return new Promise((resolve, reject) => {
      this.socket.onopen = () => resolve();
      this.socket.onerror = () => reject(new Error("connection failed"));
    });
  }

  send(frame: string): void {
    this.socket.send(frame);
  }

  onFrame(handler: (frame: string) => void): void {
    this.handler = handler;
  }
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing #${id}`);
  }
  return node as T;
}

function paint(session: SessionView): void {
  const container = el<HTMLDivElement>("panels");
  for (const [pov, panel] of session.panels) {
    let canvas = document.getElementById(`pov-${pov}`) as HTMLCanvasElement;
    if (!canvas) {
      canvas = document.createElement("canvas");
      canvas.id = `pov-${pov}`;
      canvas.width = panel.buffer.width;
      canvas.height = panel.buffer.height;
      canvas.addEventListener("click", (ev) => {
        const rect = canvas.getBoundingClientRect();
        const { row, col } = cellAtPixel(
          ev.clientX - rect.left,
          ev.clientY - rect.top,
          CELL_SIZE,
        );
        session.inspect({ kind: "patch", index: row * session.gridWidth + col });
      });
      container.appendChild(canvas);
    }
    const ctx = canvas.getContext("2d");
    if (ctx) {
      ctx.putImageData(
        new ImageData(panel.buffer.data, panel.buffer.width, panel.buffer.height),
        0,
        0,
      );
    }
  }
  const tick = session.displayedTick();
  el("tick-label").textContent = tick === null ? "-" : String(tick);
  el("play-label").textContent = session.playing ? "playing" : "paused";
  const banner = el("error-banner");
  banner.textContent = session.errorBanner
    ? `${session.errorBanner.code}: ${session.errorBanner.message}`
    : "";
  const scrub = el<HTMLInputElement>("scrubber");
  if (session.timeline) {
    scrub.max = String(session.timeline.max);
    scrub.value = String(session.timeline.current);
  }
  const inspector = el("inspector");
  inspector.textContent = session.inspector
    ? JSON.stringify(session.inspector.attrs, null, 1)
    : "";
}

export async function start(serverUrl: string): Promise<SessionView> {
  const transport = new WebSocketTransport(serverUrl);
  await transport.ready();
  const session = new SessionView(transport, CELL_SIZE);
  session.onEvent(() => paint(session));

  el<HTMLButtonElement>("btn-step").onclick = () => session.step(1);
  el<HTMLButtonElement>("btn-play").onclick = () => session.play(10);
  el<HTMLButtonElement>("btn-pause").onclick = () => session.pause();
  el<HTMLInputElement>("scrubber").onchange = (ev) =>
    session.scrubTo(Number((ev.target as HTMLInputElement).value));
  el<HTMLFormElement>("load-form").onsubmit = (ev) => {
    ev.preventDefault();
    const model = el<HTMLInputElement>("model-name").value;
    const seed = Number(el<HTMLInputElement>("seed").value || "0");
    const povs = el<HTMLInputElement>("povs").value.split(",").filter(Boolean);
    session.connectAndLoad(model, {}, seed, povs);
  };
  return session;
}
