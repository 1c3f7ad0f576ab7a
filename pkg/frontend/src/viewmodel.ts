/**
 * Session controller: owns the view state (camera, finger gizmos, ring,
 * candidate pages) and turns user interactions into the gateway call
 * sequence. The gaze ray follows the camera center; finger rays are
 * draggable offsets from it, honest stand-ins for hand tracking.
 */

import {
  ApiError,
  CandidatePage,
  GatewayClient,
  RayJson,
  ScenePayload,
  SnapshotEvent,
} from "./api.js";
import { Camera, Vec3, angularOffsetDeg, dirFromYawPitch, vec3 } from "./geometry.js";
import { RingMachine } from "./ring.js";

export const FINGER_KINDS = ["thumb_left", "thumb_right", "index_left", "index_right"] as const;
export type FingerKind = (typeof FINGER_KINDS)[number];

export interface FingerGizmo {
  enabled: boolean;
  yawOffsetDeg: number;
  pitchOffsetDeg: number;
}

export interface AngleRanges {
  gazeRange: number;
  pointRange: number;
  gazeHigh: number;
  pointHigh: number;
}

export const DEFAULT_RANGES: AngleRanges = {
  gazeRange: 14,
  pointRange: 11,
  gazeHigh: 2.8,
  pointHigh: 8,
};

export type Highlight = "high" | "low" | null;

export interface ViewEvents {
  onStateChange?: () => void;
  onError?: (message: string) => void;
}

const PAGE_COUNT = 3;

export class PlaygroundViewModel {
  camera: Camera = { position: vec3(1.0, 1.0, 1.5), yawDeg: 0, pitchDeg: 0, focalPx: 420 };
  fingers: Record<FingerKind, FingerGizmo> = {
    thumb_left: { enabled: false, yawOffsetDeg: -6, pitchOffsetDeg: -4 },
    thumb_right: { enabled: false, yawOffsetDeg: 6, pitchOffsetDeg: -4 },
    index_left: { enabled: false, yawOffsetDeg: -3, pitchOffsetDeg: -2 },
    index_right: { enabled: false, yawOffsetDeg: 3, pitchOffsetDeg: -2 },
  };
  ranges: AngleRanges = { ...DEFAULT_RANGES };
  studyMode = false; // hides halos and live highlights, as worn in studies

  ring = new RingMachine();
  scene: ScenePayload | null = null;
  sessionId: string | null = null;
  phase = "idle";
  retriesUsed = 0;
  retriesExhausted = false;
  utterance = "";
  pageIndex = 0;
  pages: (CandidatePage | null)[] = [null, null, null];
  btXml: string | null = null;
  banner: string | null = null;
  private clock = 0;

  constructor(
    private api: GatewayClient,
    private events: ViewEvents = {},
  ) {}

  private changed(): void {
    this.events.onStateChange?.();
  }

  private fail(message: string): void {
    this.banner = message;
    this.events.onError?.(message);
    this.changed();
  }

  private now(): number {
    this.clock += 100;
    return this.clock;
  }

  // --- scene and session lifecycle ------------------------------------------

  async loadSceneDocument(document: string, resolver = ""): Promise<void> {
    this.banner = null;
    try {
      const sceneRef = await this.api.uploadScene(document);
      this.scene = await this.api.getScene(sceneRef);
      if (this.scene.objects.length === 0) {
        this.scene = null;
        this.fail("scene has no objects");
        return;
      }
      const handle = await this.api.createSession(sceneRef, resolver);
      this.sessionId = handle.session_id;
      this.phase = handle.phase;
      this.ring = new RingMachine();
      this.clock = 0;
      this.retriesUsed = 0;
      this.retriesExhausted = false;
      this.pages = [null, null, null];
      this.btXml = null;
      this.changed();
    } catch (err) {
      this.scene = null;
      this.fail(err instanceof Error ? err.message : String(err));
    }
  }

  // --- aiming -----------------------------------------------------------------

  gazeRay(): { origin: Vec3; direction: Vec3 } {
    return { origin: this.camera.position, direction: dirFromYawPitch(this.camera.yawDeg, this.camera.pitchDeg) };
  }

  fingerRay(kind: FingerKind): { origin: Vec3; direction: Vec3 } {
    const gizmo = this.fingers[kind];
    const origin = vec3(
      this.camera.position.x,
      this.camera.position.y,
      this.camera.position.z - 0.3,
    );
    return {
      origin,
      direction: dirFromYawPitch(
        this.camera.yawDeg + gizmo.yawOffsetDeg,
        this.camera.pitchDeg + gizmo.pitchOffsetDeg,
      ),
    };
  }

  /** Live tier highlight for one object under the current aim. */
  highlightFor(position: Vec3): Highlight {
    if (this.studyMode || !this.scene) return null;
    const gaze = this.gazeRay();
    let best: Highlight = null;
    const consider = (offset: number, range: number, high: number) => {
      if (offset > range) return;
      if (offset <= high) best = "high";
      else if (best === null) best = "low";
    };
    consider(
      angularOffsetDeg(gaze.origin, gaze.direction, position),
      this.ranges.gazeRange,
      this.ranges.gazeHigh,
    );
    for (const kind of FINGER_KINDS) {
      if (!this.fingers[kind].enabled) continue;
      const ray = this.fingerRay(kind);
      consider(
        angularOffsetDeg(ray.origin, ray.direction, position),
        this.ranges.pointRange,
        this.ranges.pointHigh,
      );
    }
    return best;
  }

  highlightedIds(): { high: string[]; low: string[] } {
    const high: string[] = [];
    const low: string[] = [];
    if (!this.scene) return { high, low };
    for (const obj of this.scene.objects) {
      const tier = this.highlightFor(vec3(...obj.position));
      if (tier === "high") high.push(obj.id);
      else if (tier === "low") low.push(obj.id);
    }
    return { high, low };
  }

  private toRayJson(ray: { origin: Vec3; direction: Vec3 }): RayJson {
    return {
      origin: [ray.origin.x, ray.origin.y, ray.origin.z],
      direction: [ray.direction.x, ray.direction.y, ray.direction.z],
    };
  }

  private snapshotEvent(t: number): SnapshotEvent {
    const gaze = this.gazeRay();
    const fingers: Record<string, RayJson> = {};
    for (const kind of FINGER_KINDS) {
      if (this.fingers[kind].enabled) fingers[kind] = this.toRayJson(this.fingerRay(kind));
    }
    return {
      type: "snapshot",
      t,
      gaze: this.toRayJson(gaze),
      ...(Object.keys(fingers).length ? { fingers } : {}),
      head: {
        position: [this.camera.position.x, this.camera.position.y, this.camera.position.z],
        facing: this.toRayJson(gaze).direction,
      },
    };
  }

  // --- the ring loop -------------------------------------------------------------

  get canHold(): boolean {
    return this.sessionId !== null && this.ring.phase === "idle" && !this.retriesExhausted;
  }

  get canPress(): boolean {
    return this.ring.phase === "recording";
  }

  async holdStart(): Promise<void> {
    if (!this.sessionId) return this.fail("load a scene first");
    if (!this.canHold) return this.fail("ring is not idle");
    const t = this.now();
    const reply = await this.post({ type: "ring", kind: "touch", t });
    if (reply) {
      this.ring.apply("touch", t); // local mirror follows the server
      this.changed();
    }
  }

  async press(): Promise<void> {
    if (!this.canPress) return this.fail("press requires holding the ring");
    const t = this.now();
    if (!(await this.post(this.snapshotEvent(t)))) return;
    const reply = await this.post({ type: "ring", kind: "press", t });
    if (reply) {
      this.ring.apply("press", t);
      this.changed();
    }
  }

  async release(): Promise<void> {
    if (!this.sessionId || this.ring.phase !== "recording") {
      return this.fail("release requires holding the ring");
    }
    const t = this.now();
    if (this.ring.presses === 0) {
      if (!(await this.post(this.snapshotEvent(t)))) return;
    }
    if (!(await this.post({ type: "transcript", text: this.utterance }))) return;
    const reply = await this.post({ type: "ring", kind: "release", t });
    if (!reply) return;
    this.ring.apply("release", t);
    this.phase = reply.phase;
    this.pageIndex = 0;
    await this.fetchPage(0);
    this.changed();
  }

  private async post(event: object): Promise<{ phase: string; snapshots: number } | null> {
    if (!this.sessionId) return null;
    try {
      const reply = await this.api.postEvent(this.sessionId, event);
      this.phase = reply.phase;
      this.banner = null;
      this.changed();
      return reply;
    } catch (err) {
      if (err instanceof ApiError) this.fail(`${err.status}: ${err.message}`);
      else this.fail(err instanceof Error ? err.message : String(err));
      return null;
    }
  }

  // --- candidates ------------------------------------------------------------------

  async fetchPage(index: number): Promise<void> {
    if (!this.sessionId) return;
    try {
      const page = await this.api.getCandidates(this.sessionId, index);
      this.pages[index] = page;
      // The first fetch after release performs the resolution server-side.
      if (page.phase) this.phase = page.phase;
      this.changed();
    } catch (err) {
      if (err instanceof ApiError) this.fail(`${err.status}: ${err.message}`);
    }
  }

  currentPage(): CandidatePage | null {
    return this.pages[this.pageIndex];
  }

  async nextPage(): Promise<void> {
    if (this.pageIndex < PAGE_COUNT - 1) {
      this.pageIndex += 1;
      if (!this.pages[this.pageIndex]) await this.fetchPage(this.pageIndex);
      this.changed();
    }
  }

  async prevPage(): Promise<void> {
    if (this.pageIndex > 0) {
      this.pageIndex -= 1;
      if (!this.pages[this.pageIndex]) await this.fetchPage(this.pageIndex);
      this.changed();
    }
  }

  async confirm(rank: number): Promise<void> {
    if (!this.sessionId) return;
    try {
      const reply = await this.api.confirm(this.sessionId, rank);
      this.phase = reply.phase;
      this.btXml = reply.bt_xml;
      this.banner = null;
      this.changed();
    } catch (err) {
      if (err instanceof ApiError) this.fail(`${err.status}: ${err.message}`);
    }
  }

  get canRetry(): boolean {
    return this.phase === "presenting" && !this.retriesExhausted;
  }

  async retry(): Promise<void> {
    if (!this.sessionId) return;
    try {
      const reply = await this.api.retry(this.sessionId);
      this.phase = reply.phase;
      this.retriesUsed = reply.retries_used;
      this.ring.resetForRetry();
      this.pages = [null, null, null];
      this.pageIndex = 0;
      this.utterance = "";
      this.banner = null;
      // Two retries per session: the button goes dead once both are spent.
      this.retriesExhausted = this.retriesUsed >= 2;
      this.changed();
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        this.retriesExhausted = true;
        this.phase = "abandoned";
        this.fail("retries exhausted");
      }
    }
  }
}
