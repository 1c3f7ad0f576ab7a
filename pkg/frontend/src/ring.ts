/**
 * UI-local ring machine. Mirrors the gateway machine exactly: the shared
 * conformance fixture (fixtures/ring_conformance.json) runs against both.
 *
 * touch opens a hold, press captures (repeatable without lifting), release
 * dispatches; a tap-free release still counts one capture. Timestamps are
 * monotone for the life of the session, across retries.
 */

export type RingKind = "touch" | "press" | "release";

export type RingPhase = "idle" | "recording" | "dispatched";

export class RingProtocolError extends Error {}

export class RingMachine {
  phase: RingPhase = "idle";
  presses = 0;
  captures = 0;
  touchT: number | null = null;
  releaseT: number | null = null;
  private lastT: number | null = null;

  apply(kind: RingKind, t: number): void {
    if (this.lastT !== null && t < this.lastT) {
      throw new RingProtocolError(`event time ${t} precedes ${this.lastT}`);
    }
    switch (kind) {
      case "touch":
        if (this.phase !== "idle") {
          throw new RingProtocolError(`touch rejected in phase ${this.phase}`);
        }
        this.phase = "recording";
        this.touchT = t;
        break;
      case "press":
        if (this.phase !== "recording") {
          throw new RingProtocolError(`press rejected in phase ${this.phase}`);
        }
        this.presses += 1;
        this.captures += 1;
        break;
      case "release":
        if (this.phase !== "recording") {
          throw new RingProtocolError(`release rejected in phase ${this.phase}`);
        }
        if (this.captures === 0) this.captures = 1;
        this.phase = "dispatched";
        this.releaseT = t;
        break;
    }
    this.lastT = t;
  }

  /** Back to idle for the next attempt; the monotone clock carries over. */
  resetForRetry(): void {
    this.phase = "idle";
    this.presses = 0;
    this.captures = 0;
    this.touchT = null;
    this.releaseT = null;
  }
}
