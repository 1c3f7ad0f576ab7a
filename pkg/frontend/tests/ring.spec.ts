/**
 * Conformance: the UI-local ring machine accepts exactly the event
 * sequences the gateway accepts. Both sides run the same shared fixture.
 */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { RingMachine, RingProtocolError, type RingKind } from "../src/ring.js";

interface Case {
  name: string;
  events: { kind: RingKind; t: number }[];
  legal: boolean;
  snapshots: number | null;
}

const here = dirname(fileURLToPath(import.meta.url));
const fixture = JSON.parse(
  readFileSync(join(here, "../../fixtures/ring_conformance.json"), "utf-8"),
) as { cases: Case[] };

describe("ring machine conformance", () => {
  for (const testCase of fixture.cases) {
    it(testCase.name, () => {
      const machine = new RingMachine();
      const run = () => {
        for (const event of testCase.events) machine.apply(event.kind, event.t);
      };
      if (testCase.legal) {
        run();
        if (testCase.snapshots !== null) {
          expect(machine.captures).toBe(testCase.snapshots);
        }
      } else {
        expect(run).toThrow(RingProtocolError);
      }
    });
  }

  it("retry keeps the monotone clock", () => {
    const machine = new RingMachine();
    machine.apply("touch", 0);
    machine.apply("release", 100);
    machine.resetForRetry();
    expect(() => machine.apply("touch", 50)).toThrow(RingProtocolError);
    machine.apply("touch", 150);
    expect(machine.phase).toBe("recording");
  });
});
