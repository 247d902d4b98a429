/**
 * Client-side session state machine. All server events funnel through
 * handleFrame in arrival order; rendering is tick-coherent: the panels
 * for every subscribed point of view repaint together from one tick
 * event, or not at all.
 *
 * The client holds no simulation truth of its own — everything shown is
 * reconstructed from server events, so resubscribing after a reload
 * reproduces the view.
 */

import { ProbeChart } from "./chart.js";
import {
  Command,
  EntityRef,
  ErrorEvent,
  InspectionEvent,
  ServerEvent,
  TickEvent,
  Transport,
  decodeEvent,
  encodeCommand,
} from "./protocol.js";
import { PixelBuffer, renderFrame } from "./render.js";

export interface Panel {
  pov: string;
  tick: number;
  buffer: PixelBuffer;
}

export interface TimelineView {
  current: number;
  max: number;
  branchCount: number;
}

export class SessionView {
  readonly chart: ProbeChart;
  readonly cellSize: number;

  gridWidth = 0;
  gridHeight = 0;
  availablePovs: string[] = [];
  probeNames: string[] = [];
  subscribedPovs: string[] = [];

  /** One panel per subscribed PoV; all always show the same tick. */
  panels = new Map<string, Panel>();
  timeline: TimelineView | null = null;
  playing = false;
  inspector: InspectionEvent | null = null;
  errorBanner: ErrorEvent | null = null;
  loaded = false;

  private readonly transport: Transport;
  private listeners: Array<(ev: ServerEvent) => void> = [];

  constructor(transport: Transport, cellSize = 1, chartWindow = 500) {
    this.transport = transport;
    this.cellSize = cellSize;
    this.chart = new ProbeChart(chartWindow);
    transport.onFrame((frame) => this.handleFrame(frame));
  }

  onEvent(listener: (ev: ServerEvent) => void): void {
    this.listeners.push(listener);
  }

  // -- commands ----------------------------------------------------------

  send(cmd: Command): void {
    this.transport.send(encodeCommand(cmd));
  }

  connectAndLoad(
    model: string,
    params: Record<string, unknown>,
    seed: number,
    povs: string[],
    probes = true,
  ): void {
    this.send({ type: "load", model, params, seed });
    this.subscribedPovs = [...povs];
    this.send({ type: "subscribe", povs, probes });
  }

  step(count = 1): void {
    this.send({ type: "step", count });
  }

  play(tps = 10): void {
    this.send({ type: "play", tps });
  }

  pause(): void {
    this.send({ type: "pause" });
  }

  /** Timeline scrub: request the state at `target`; panels repaint when
   * the server answers with the rewound tick event. */
  scrubTo(target: number): void {
    this.send({ type: "rewind", tick: target });
  }

  inspect(entity: EntityRef): void {
    this.send({ type: "inspect", entity });
  }

  /** Commit an inspector edit. The server auto-pauses; `playing` flips
   * when its ack arrives. */
  commitEdit(entity: EntityRef, attr: string, value: unknown): void {
    this.send({ type: "edit", entity, attr, value });
  }

  // -- event handling ------------------------------------------------------

  handleFrame(frame: string): void {
    const event = decodeEvent(frame);
    this.handleEvent(event);
    for (const listener of this.listeners) {
      listener(event);
    }
  }

  private handleEvent(event: ServerEvent): void {
    switch (event.type) {
      case "loaded":
        this.loaded = true;
        this.gridWidth = event.width;
        this.gridHeight = event.height;
        this.availablePovs = event.povs;
        this.probeNames = event.probes;
        this.panels.clear();
        this.chart.clear();
        this.inspector = null;
        this.playing = false;
        this.errorBanner = null;
        break;
      case "tick":
        this.applyTick(event);
        break;
      case "timeline":
        this.timeline = {
          current: event.current,
          max: event.max,
          branchCount: event.branch_count,
        };
        break;
      case "inspection":
        this.inspector = event;
        break;
      case "ack":
        if (event.of === "play") {
          this.playing = true;
        } else if (event.of === "pause" || event.of === "edit") {
          // edits auto-pause on the server; reflect it in the controls
          this.playing = false;
        }
        break;
      case "error":
        this.errorBanner = event;
        break;
    }
  }

  /** Render barrier: rasterize every subscribed frame first, then swap
   * all panels at once, so no render instant mixes ticks. */
  private applyTick(event: TickEvent): void {
    const next = new Map<string, Panel>();
    try {
      for (const pov of this.subscribedPovs) {
        const frame = event.frames[pov];
        if (!frame) {
          continue; // rewinds before subscribe carry no frames
        }
        const buffer = renderFrame(
          frame,
          this.gridWidth,
          this.gridHeight,
          this.cellSize,
        );
        next.set(pov, { pov, tick: event.tick, buffer });
      }
    } catch (exc) {
      this.errorBanner = {
        type: "error",
        code: "E_CLIENT_RENDER",
        message: String(exc),
      };
      return; // no partial paint
    }
    for (const [pov, panel] of next) {
      this.panels.set(pov, panel);
    }
    // probes of {} means "not subscribed", not "no data"
    if (Object.keys(event.probes).length > 0) {
      this.chart.append(event.tick, event.probes);
    }
  }

  /** The single tick all panels currently display, or null before the
   * first frame. Throws if coherence is ever violated. */
  displayedTick(): number | null {
    let tick: number | null = null;
    for (const panel of this.panels.values()) {
      if (tick === null) {
        tick = panel.tick;
      } else if (tick !== panel.tick) {
        throw new Error(
          `panel tick mismatch: ${tick} vs ${panel.tick} (${panel.pov})`,
        );
      }
    }
    return tick;
  }
}
