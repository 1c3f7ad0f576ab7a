import json
import threading

import pytest
from fastapi.testclient import TestClient

from intenbot.config import EngineConfig
from intenbot.server import create_app

from genutil import REPO


@pytest.fixture()
def client():
    app = create_app(EngineConfig())
    with TestClient(app) as c:
        yield c


@pytest.fixture()
def scene_ref(client):
    body = (REPO / "scenes/meeting.json").read_bytes()
    r = client.post("/scenes", content=body)
    assert r.status_code == 200
    return r.json()["scene_ref"]


def new_session(client, scene_ref, resolver="baseline"):
    r = client.post("/sessions", json={"scene_ref": scene_ref, "resolver": resolver})
    assert r.status_code == 200
    return r.json()["session_id"]


def aim_snapshot(t=50):
    demo = json.loads((REPO / "scenarios/demo_tv_state.json").read_text())
    snap = next(e for e in demo["events"] if e["type"] == "snapshot")
    return {**snap, "t": t}


def drive_to_presenting(client, sid, transcript="Is TV on?", t0=0):
    # The canonical chain: the transcript arrives after release (speech
    # transcription finishes while the loading indicator shows) and the
    # first candidates fetch performs the resolution.
    # Timestamps are monotone for the whole session, across retries too.
    assert client.post(f"/sessions/{sid}/events", json={"type": "ring", "kind": "touch", "t": t0}).status_code == 200
    assert client.post(f"/sessions/{sid}/events", json=aim_snapshot(t0 + 50)).status_code == 200
    assert client.post(f"/sessions/{sid}/events", json={"type": "ring", "kind": "press", "t": t0 + 50}).status_code == 200
    r = client.post(f"/sessions/{sid}/events", json={"type": "ring", "kind": "release", "t": t0 + 100})
    assert r.status_code == 200
    assert r.json()["phase"] == "dispatched"
    assert client.post(f"/sessions/{sid}/events", json={"type": "transcript", "text": transcript}).status_code == 200
    first = client.get(f"/sessions/{sid}/candidates", params={"page": 0})
    assert first.status_code == 200
    assert first.json()["phase"] == "presenting"


def test_healthz(client):
    assert client.get("/healthz").json() == {"status": "ok"}


def test_scene_upload_rejects_bad_document(client):
    assert client.post("/scenes", content=b"{broken").status_code == 400
    assert client.post("/scenes", content=json.dumps({"version": "9"}).encode()).status_code == 400


def test_full_happy_path(client, scene_ref):
    sid = new_session(client, scene_ref)
    drive_to_presenting(client, sid)
    pages = [client.get(f"/sessions/{sid}/candidates", params={"page": k}).json() for k in range(3)]
    assert all(len(p["candidates"]) == 3 for p in pages)
    assert pages[0]["total"] == 9
    assert pages[0]["candidates"][0]["task"] == "CheckState"
    r = client.post(f"/sessions/{sid}/confirm", json={"rank": 1})
    assert r.status_code == 200
    body = r.json()
    assert body["phase"] == "confirmed"
    assert body["bt_xml"].startswith("<?xml")
    assert "CheckState" in body["bt_xml"]


def test_confirm_before_candidates_is_409(client, scene_ref):
    sid = new_session(client, scene_ref)
    assert client.post(f"/sessions/{sid}/confirm", json={"rank": 1}).status_code == 409


def test_page_three_is_400(client, scene_ref):
    sid = new_session(client, scene_ref)
    drive_to_presenting(client, sid)
    assert client.get(f"/sessions/{sid}/candidates", params={"page": 3}).status_code == 400


def test_unknown_ids_are_404(client, scene_ref):
    assert client.post("/sessions", json={"scene_ref": "missing"}).status_code == 404
    assert client.get("/sessions/missing/candidates").status_code == 404
    assert client.post("/sessions/missing/retry").status_code == 404


def test_protocol_violations_are_409(client, scene_ref):
    sid = new_session(client, scene_ref)
    r = client.post(f"/sessions/{sid}/events", json={"type": "ring", "kind": "press", "t": 0})
    assert r.status_code == 409
    r = client.post(f"/sessions/{sid}/events", json={"type": "ring", "kind": "release", "t": 0})
    assert r.status_code == 409


def test_press_without_snapshot_is_409(client, scene_ref):
    sid = new_session(client, scene_ref)
    client.post(f"/sessions/{sid}/events", json={"type": "ring", "kind": "touch", "t": 0})
    r = client.post(f"/sessions/{sid}/events", json={"type": "ring", "kind": "press", "t": 10})
    assert r.status_code == 409


def test_bad_rank_is_400(client, scene_ref):
    sid = new_session(client, scene_ref)
    drive_to_presenting(client, sid)
    assert client.post(f"/sessions/{sid}/confirm", json={"rank": 10}).status_code == 400
    assert client.post(f"/sessions/{sid}/confirm", json={"rank": "one"}).status_code == 400


def test_retry_cycle_and_exhaustion(client, scene_ref):
    sid = new_session(client, scene_ref)
    for expected in (1, 2):
        drive_to_presenting(client, sid, t0=expected * 1000)
        r = client.post(f"/sessions/{sid}/retry")
        assert r.status_code == 200
        assert r.json() == {"phase": "idle", "retries_used": expected}
    drive_to_presenting(client, sid, t0=5000)
    r = client.post(f"/sessions/{sid}/retry")
    assert r.status_code == 409
    assert client.get(f"/sessions/{sid}").json()["phase"] == "abandoned"


def test_mock_resolver_session(client, scene_ref):
    sid = new_session(client, scene_ref, resolver="mock")
    drive_to_presenting(client, sid, transcript="")
    page0 = client.get(f"/sessions/{sid}/candidates", params={"page": 0}).json()
    assert page0["resolver_id"] == "mock"


def test_sessions_are_isolated(client, scene_ref):
    a = new_session(client, scene_ref)
    b = new_session(client, scene_ref)
    client.post(f"/sessions/{a}/events", json={"type": "ring", "kind": "touch", "t": 0})
    ra = client.get(f"/sessions/{a}").json()
    rb = client.get(f"/sessions/{b}").json()
    assert ra["phase"] == "recording" and rb["phase"] == "idle"


def test_interleaved_sessions_no_cross_contamination(client, scene_ref):
    sessions = [new_session(client, scene_ref) for _ in range(4)]
    for sid in sessions:
        client.post(f"/sessions/{sid}/events", json={"type": "ring", "kind": "touch", "t": 0})
    for sid in sessions:
        client.post(f"/sessions/{sid}/events", json=aim_snapshot(50))
        client.post(f"/sessions/{sid}/events", json={"type": "ring", "kind": "press", "t": 50})
    for sid in sessions:
        r = client.post(f"/sessions/{sid}/events", json={"type": "ring", "kind": "release", "t": 100})
        assert r.json()["phase"] == "dispatched"
        client.post(f"/sessions/{sid}/events", json={"type": "transcript", "text": "Is TV on?"})
    for sid in sessions:
        page0 = client.get(f"/sessions/{sid}/candidates", params={"page": 0}).json()
        assert page0["phase"] == "presenting"
        assert page0["candidates"][0]["task"] == "CheckState"


def test_sessions_expire_after_ttl(client, scene_ref, monkeypatch):
    import intenbot.server as server_mod

    sid = new_session(client, scene_ref)
    assert client.get(f"/sessions/{sid}").status_code == 200
    monkeypatch.setattr(server_mod, "SESSION_TTL_S", -1.0)
    assert client.get(f"/sessions/{sid}").status_code == 404


def test_concurrent_sessions_threads(client, scene_ref):
    errors = []

    def worker(i):
        try:
            sid = new_session(client, scene_ref)
            drive_to_presenting(client, sid)
            r = client.post(f"/sessions/{sid}/confirm", json={"rank": 1})
            assert r.status_code == 200
        except Exception as exc:  # pragma: no cover - diagnostic
            errors.append(exc)

    threads = [threading.Thread(target=worker, args=(i,)) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert errors == []
