/** View model against a scripted in-memory gateway. */

import { beforeEach, describe, expect, it } from "vitest";

import type { Candidate, CandidatePage, GatewayClient, ScenePayload } from "../src/api.js";
import { ApiError } from "../src/api.js";
import { vec3 } from "../src/geometry.js";
import { PlaygroundViewModel } from "../src/viewmodel.js";

const SCENE: ScenePayload = {
  scene_ref: "scene-test",
  rooms: [{ id: "r", label: "Room", centroid: [0, 0, 0] }],
  objects: [
    {
      id: "tv", label: "TV", category: "electronics", position: [10, 0, 1.5],
      bounding_radius: 0.5, room: "r", affordances: ["toggleable"], state: { power: "on" },
    },
    {
      id: "mug", label: "mug", category: "kitchenware", position: [0, 40, 1.5],
      bounding_radius: 0.05, room: "r", affordances: ["portable"], state: {},
    },
  ],
};

function nineCandidates(): Candidate[] {
  return Array.from({ length: 9 }, (_, i) => ({
    rank: i + 1,
    task: "Fetch",
    targets: [i % 2 ? "tv" : "mug"],
    destination: null,
    attribute: null,
    display_text: `candidate ${i + 1}`,
    explanation: "scripted",
  }));
}

class FakeGateway {
  events: object[] = [];
  phase = "idle";
  retries = 0;
  confirmCalls: number[] = [];

  async uploadScene(_doc: string): Promise<string> {
    return "scene-test";
  }
  async getScene(_ref: string): Promise<ScenePayload> {
    return SCENE;
  }
  async createSession(sceneRef: string): Promise<{ session_id: string; scene_ref: string; phase: string; retries_used: number }> {
    return { session_id: "s1", scene_ref: sceneRef, phase: "idle", retries_used: 0 };
  }
  async postEvent(_sid: string, event: { type: string; kind?: string }): Promise<{ phase: string; snapshots: number }> {
    this.events.push(event);
    if (event.type === "ring" && event.kind === "touch") this.phase = "recording";
    if (event.type === "ring" && event.kind === "release") this.phase = "presenting";
    return { phase: this.phase, snapshots: 0 };
  }
  async getCandidates(_sid: string, page: number): Promise<CandidatePage> {
    if (page > 2) throw new ApiError(400, "page index must be 0..2");
    const all = nineCandidates();
    return {
      page,
      total: 9,
      repaired: false,
      resolver_id: "mock",
      candidates: all.slice(page * 3, page * 3 + 3),
    };
  }
  async confirm(_sid: string, rank: number): Promise<{ phase: string; bt_xml: string }> {
    this.confirmCalls.push(rank);
    return { phase: "confirmed", bt_xml: '<?xml version="1.0"?><root bt_format="4"/>' };
  }
  async retry(_sid: string): Promise<{ phase: string; retries_used: number }> {
    this.retries += 1;
    if (this.retries > 2) throw new ApiError(409, "retries exhausted");
    return { phase: "idle", retries_used: this.retries };
  }
}

function makeVm(): { vm: PlaygroundViewModel; fake: FakeGateway } {
  const fake = new FakeGateway();
  const vm = new PlaygroundViewModel(fake as unknown as GatewayClient);
  return { vm, fake };
}

describe("playground view model", () => {
  let vm: PlaygroundViewModel;
  let fake: FakeGateway;

  beforeEach(async () => {
    ({ vm, fake } = makeVm());
    await vm.loadSceneDocument("{}");
  });

  it("loads a scene and opens a session", () => {
    expect(vm.scene?.objects.length).toBe(2);
    expect(vm.sessionId).toBe("s1");
  });

  it("posts snapshot before each press, transcript before release", async () => {
    await vm.holdStart();
    await vm.press();
    await vm.press();
    vm.utterance = "Is TV on?";
    await vm.release();
    const kinds = fake.events.map((e) => {
      const ev = e as { type: string; kind?: string };
      return ev.type === "ring" ? `ring:${ev.kind}` : ev.type;
    });
    expect(kinds).toEqual([
      "ring:touch",
      "snapshot", "ring:press",
      "snapshot", "ring:press",
      "transcript", "ring:release",
    ]);
  });

  it("tap-free release still sends one snapshot", async () => {
    await vm.holdStart();
    await vm.release();
    const kinds = fake.events.map((e) => (e as { type: string }).type);
    expect(kinds).toEqual(["ring", "snapshot", "transcript", "ring"]);
  });

  it("press without hold is refused locally", async () => {
    await vm.press();
    expect(vm.banner).toContain("press requires holding");
    expect(fake.events.length).toBe(0);
  });

  it("pages show exactly three candidates across three pages", async () => {
    await vm.holdStart();
    await vm.release();
    expect(vm.currentPage()?.candidates.length).toBe(3);
    const seen = [...(vm.currentPage()?.candidates ?? [])];
    await vm.nextPage();
    seen.push(...(vm.currentPage()?.candidates ?? []));
    await vm.nextPage();
    seen.push(...(vm.currentPage()?.candidates ?? []));
    expect(seen.map((c) => c.rank)).toEqual([1, 2, 3, 4, 5, 6, 7, 8, 9]);
    await vm.nextPage(); // clamped at the last page
    expect(vm.pageIndex).toBe(2);
  });

  it("confirm stores the behavior tree xml", async () => {
    await vm.holdStart();
    await vm.release();
    await vm.confirm(1);
    expect(fake.confirmCalls).toEqual([1]);
    expect(vm.btXml).toContain("bt_format");
    expect(vm.phase).toBe("confirmed");
  });

  it("retry twice then exhaustion disables further retries", async () => {
    await vm.holdStart();
    await vm.release();
    await vm.retry();
    expect(vm.retriesUsed).toBe(1);
    expect(vm.canRetry).toBe(false); // back to idle until next presenting
    vm.phase = "presenting";
    await vm.retry();
    expect(vm.retriesUsed).toBe(2);
    expect(vm.retriesExhausted).toBe(true);
    vm.phase = "presenting";
    await vm.retry();
    expect(vm.phase).toBe("abandoned");
    expect(vm.banner).toContain("retries exhausted");
  });

  it("highlights follow the current angle ranges monotonically", () => {
    // Camera at origin looking +x; TV sits dead ahead, mug far off axis.
    vm.camera.position = vec3(0, 0, 1.5);
    vm.camera.yawDeg = 0;
    vm.camera.pitchDeg = 0;
    const narrow = { ...vm.ranges, gazeRange: 2.8, gazeHigh: 2.8 };
    const wide = { ...vm.ranges, gazeRange: 14, gazeHigh: 2.8 };
    vm.ranges = narrow;
    const narrowSet = vm.highlightedIds();
    vm.ranges = wide;
    const wideSet = vm.highlightedIds();
    const narrowAll = [...narrowSet.high, ...narrowSet.low];
    const wideAll = [...wideSet.high, ...wideSet.low];
    for (const id of narrowAll) expect(wideAll).toContain(id);
    expect(wideAll).toContain("tv");
    expect(wideAll).not.toContain("mug");
  });

  it("study mode hides highlights", () => {
    vm.camera.position = vec3(0, 0, 1.5);
    vm.studyMode = true;
    const sets = vm.highlightedIds();
    expect(sets.high.length + sets.low.length).toBe(0);
  });

  it("empty scene payload raises a banner, no crash", async () => {
    const { vm: fresh, fake: fakeEmpty } = makeVm();
    fakeEmpty.getScene = async () => ({ ...SCENE, objects: [] });
    await fresh.loadSceneDocument("{}");
    expect(fresh.scene).toBeNull();
    expect(fresh.banner).toContain("no objects");
  });
});
