/**
 * Wire protocol: one JSON message per text frame, canonically encoded
 * (sorted keys, compact separators) so transcripts are byte-stable.
 */

export type RGB = [number, number, number];

export interface EntityRef {
  kind: string;
  index: number;
}

export interface WireAgent {
  id: EntityRef;
  row: number;
  col: number;
  color: number[];
  shape: "cell-fill" | "circle";
  size: number;
}

/** Flat row-major RGB cells plus agent overlays, as sent in tick events. */
export interface WireFrame {
  cells: number[];
  agents: WireAgent[];
}

export type Command =
  | { type: "load"; model: string; params?: Record<string, unknown>; seed?: number }
  | { type: "step"; count?: number }
  | { type: "play"; tps?: number }
  | { type: "pause" }
  | { type: "rewind"; tick: number }
  | { type: "edit"; entity: EntityRef; attr: string; value: unknown }
  | { type: "inspect"; entity: EntityRef }
  | { type: "subscribe"; povs: string[]; probes?: boolean };

export interface LoadedEvent {
  type: "loaded";
  tick: number;
  width: number;
  height: number;
  povs: string[];
  probes: string[];
}

export interface TickEvent {
  type: "tick";
  tick: number;
  frames: Record<string, WireFrame>;
  probes: Record<string, number>;
}

export interface TimelineEvent {
  type: "timeline";
  current: number;
  max: number;
  branch_count: number;
}

export interface InspectionEvent {
  type: "inspection";
  entity: EntityRef;
  row: number;
  col: number;
  attrs: Record<string, unknown>;
}

export interface AckEvent {
  type: "ack";
  of: string;
}

export interface ErrorEvent {
  type: "error";
  code: string;
  message: string;
}

export type ServerEvent =
  | LoadedEvent
  | TickEvent
  | TimelineEvent
  | InspectionEvent
  | AckEvent
  | ErrorEvent;

const EVENT_TYPES = new Set([
  "loaded",
  "tick",
  "timeline",
  "inspection",
  "ack",
  "error",
]);

/** JSON.stringify with object keys sorted at every depth. */
export function canonicalStringify(value: unknown): string {
  if (value === null || typeof value !== "object") {
    return JSON.stringify(value);
  }
  if (Array.isArray(value)) {
    return `[${value.map(canonicalStringify).join(",")}]`;
  }
  const obj = value as Record<string, unknown>;
  const body = Object.keys(obj)
    .sort()
    .map((k) => `${JSON.stringify(k)}:${canonicalStringify(obj[k])}`)
    .join(",");
  return `{${body}}`;
}

export function encodeCommand(cmd: Command): string {
  return canonicalStringify(cmd);
}

export class ProtocolFormatError extends Error {}

export function decodeEvent(frame: string): ServerEvent {
  let parsed: unknown;
  try {
    parsed = JSON.parse(frame);
  } catch (exc) {
    throw new ProtocolFormatError(`unparseable frame: ${exc}`);
  }
  if (
    typeof parsed !== "object" ||
    parsed === null ||
    Array.isArray(parsed) ||
    typeof (parsed as { type?: unknown }).type !== "string"
  ) {
    throw new ProtocolFormatError("frame must be an object with a string 'type'");
  }
  const type = (parsed as { type: string }).type;
  if (!EVENT_TYPES.has(type)) {
    throw new ProtocolFormatError(`unknown event type ${JSON.stringify(type)}`);
  }
  return parsed as ServerEvent;
}

/** Transport abstraction: a WebSocket in the browser, a mock in tests. */
export interface Transport {
  send(frame: string): void;
  onFrame(handler: (frame: string) => void): void;
}
