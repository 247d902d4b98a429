import { describe, expect, it } from "vitest";

import {
  ProtocolFormatError,
  canonicalStringify,
  decodeEvent,
  encodeCommand,
} from "../src/protocol.js";

describe("canonical encoding", () => {
  it("sorts object keys at every depth", () => {
    expect(canonicalStringify({ b: 1, a: { d: 2, c: [3, { z: 1, y: 0 }] } })).toBe(
      '{"a":{"c":[3,{"y":0,"z":1}],"d":2},"b":1}',
    );
  });

  it("matches the server's compact separators", () => {
    expect(encodeCommand({ type: "step", count: 2 })).toBe(
      '{"count":2,"type":"step"}',
    );
  });

  it("handles null and primitives", () => {
    expect(canonicalStringify(null)).toBe("null");
    expect(canonicalStringify("x")).toBe('"x"');
    expect(canonicalStringify([true, 1.5])).toBe("[true,1.5]");
  });
});

describe("event decoding", () => {
  it("round-trips a tick event", () => {
    const frame = JSON.stringify({
      type: "tick",
      tick: 3,
      frames: {},
      probes: { alive: 5 },
    });
    const event = decodeEvent(frame);
    expect(event.type).toBe("tick");
    if (event.type === "tick") {
      expect(event.probes.alive).toBe(5);
    }
  });

  it("rejects non-JSON", () => {
    expect(() => decodeEvent("not json")).toThrow(ProtocolFormatError);
  });

  it("rejects frames without a string type", () => {
    expect(() => decodeEvent("[1,2]")).toThrow(ProtocolFormatError);
    expect(() => decodeEvent('{"type":7}')).toThrow(ProtocolFormatError);
  });

  it("rejects unknown event types", () => {
    expect(() => decodeEvent('{"type":"dance"}')).toThrow(ProtocolFormatError);
  });
});
