/** Thin typed client for the gateway HTTP API. */

export interface ScenePayload {
  scene_ref: string;
  rooms: { id: string; label: string; centroid: [number, number, number] }[];
  objects: {
    id: string;
    label: string;
    category: string;
    position: [number, number, number];
    bounding_radius: number;
    room: string;
    affordances: string[];
    state: Record<string, string>;
  }[];
}

export interface Candidate {
  rank: number;
  task: string;
  targets: string[];
  destination: string | null;
  attribute: string | null;
  display_text: string;
  explanation: string;
}

export interface CandidatePage {
  page: number;
  phase?: string;
  total: number;
  repaired: boolean;
  resolver_id: string;
  candidates: Candidate[];
}

export interface SessionHandle {
  session_id: string;
  scene_ref: string;
  phase: string;
  retries_used: number;
}

export interface RayJson {
  origin: [number, number, number];
  direction: [number, number, number];
}

export interface SnapshotEvent {
  type: "snapshot";
  t: number;
  gaze: RayJson;
  fingers?: Record<string, RayJson>;
  head: { position: [number, number, number]; facing: [number, number, number] };
}

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
  }
}

async function parseOrThrow<T>(response: Response): Promise<T> {
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    const message = (body as { error?: string }).error ?? `HTTP ${response.status}`;
    throw new ApiError(response.status, message);
  }
  return body as T;
}

export class GatewayClient {
  constructor(private baseUrl: string = "") {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  async health(): Promise<boolean> {
    try {
      const r = await fetch(this.url("/healthz"));
      return r.ok;
    } catch {
      return false;
    }
  }

  async uploadScene(document: string): Promise<string> {
    const r = await fetch(this.url("/scenes"), { method: "POST", body: document });
    const body = await parseOrThrow<{ scene_ref: string }>(r);
    return body.scene_ref;
  }

  async getScene(sceneRef: string): Promise<ScenePayload> {
    return parseOrThrow(await fetch(this.url(`/scenes/${sceneRef}`)));
  }

  async createSession(sceneRef: string, resolver = ""): Promise<SessionHandle> {
    const r = await fetch(this.url("/sessions"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ scene_ref: sceneRef, resolver }),
    });
    return parseOrThrow(r);
  }

  async postEvent(sessionId: string, event: object): Promise<{ phase: string; snapshots: number }> {
    const r = await fetch(this.url(`/sessions/${sessionId}/events`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(event),
    });
    return parseOrThrow(r);
  }

  async getCandidates(sessionId: string, page: number): Promise<CandidatePage> {
    return parseOrThrow(await fetch(this.url(`/sessions/${sessionId}/candidates?page=${page}`)));
  }

  async confirm(sessionId: string, rank: number): Promise<{ phase: string; bt_xml: string }> {
    const r = await fetch(this.url(`/sessions/${sessionId}/confirm`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ rank }),
    });
    return parseOrThrow(r);
  }

  async retry(sessionId: string): Promise<{ phase: string; retries_used: number }> {
    const r = await fetch(this.url(`/sessions/${sessionId}/retry`), { method: "POST" });
    return parseOrThrow(r);
  }
}
