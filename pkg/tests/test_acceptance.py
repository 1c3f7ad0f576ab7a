"""Acceptance suite: one test per release criterion, each printing a
PASS line with its measured numbers when it holds."""

import json
import random
import threading
import time

import mpmath
import pytest
from fastapi.testclient import TestClient

from intenbot.baseline import baseline_rank
from intenbot.candidates import validate_candidate_set
from intenbot.config import EngineConfig
from intenbot.geometry import Ray, Vec3, angular_offset
from intenbot.harness import (
    ErrorClass,
    SceneCache,
    SweepSpec,
    load_corpus,
    replay,
    sweep,
)
from intenbot.planner import build_plan, parse_xml, simulate, to_xml, validate_bt
from intenbot.resolvers import BaselineResolver
from intenbot.scene import load_scene
from intenbot.server import create_app
from intenbot.session import ProtocolError, RingEvent, RingKind, SessionState, handle_event
from intenbot.targeting import AngleConfig, ModalityKind, Tier, brute_force_resolve, resolve_ray

from genutil import (
    REPO,
    make_command,
    rand_unit,
    random_command,
    random_scene,
    ray_near_object,
)
from test_planner import random_instruction
from test_session import capture as stub_capture


def ok(name: str, detail: str = "") -> None:
    print(f"[ACCEPT] {name}: PASS {detail}".rstrip())


# 1 -------------------------------------------------------------------------------


def test_geometry_oracle():
    """resolve_ray == brute force on 1,000 random scene/ray pairs; angular
    offsets within 1e-6 deg of a 50-digit reference on 10,000 pairs; <10 s."""
    started = time.perf_counter()
    rng = random.Random(1001)
    for _ in range(1_000):
        scene = random_scene(rng, n_objects=rng.randint(1, 200))
        ray = Ray(
            Vec3(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(0, 2)), rand_unit(rng)
        )
        kind = rng.choice(list(ModalityKind))
        cfg = AngleConfig.with_ranges(rng.uniform(2, 32), rng.uniform(2, 32))
        assert resolve_ray(ray, kind, scene, cfg) == brute_force_resolve(ray, kind, scene, cfg)

    mpmath.mp.dps = 50
    for _ in range(10_000):
        origin = Vec3(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5))
        direction = rand_unit(rng)
        point = Vec3(rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10))
        delta = point - origin
        if delta.norm() < 1e-6:
            continue
        got = angular_offset(Ray(origin, direction), point)
        dot = mpmath.mpf(direction.x) * delta.x + mpmath.mpf(direction.y) * delta.y + mpmath.mpf(direction.z) * delta.z
        norm = mpmath.sqrt(mpmath.mpf(delta.x) ** 2 + mpmath.mpf(delta.y) ** 2 + mpmath.mpf(delta.z) ** 2)
        want = mpmath.degrees(mpmath.acos(max(-1, min(1, dot / norm))))
        assert abs(got - float(want)) < 1e-6
    elapsed = time.perf_counter() - started
    assert elapsed < 10.0
    ok("geometry oracle", f"(1000 scans + 10000 offsets in {elapsed:.2f}s)")


# 2 -------------------------------------------------------------------------------


def test_parameter_fidelity():
    """Range boundaries at 14/11 deg and tier boundaries at 2.8/8 deg, exact."""
    cfg = AngleConfig()
    ray = Ray(Vec3(0, 0, 0), Vec3(1, 0, 0))

    def scene_at(theta):
        import math

        from intenbot.scene import ObjectNode, Room, SceneGraph

        pos = Vec3(math.cos(math.radians(theta)) * 5, math.sin(math.radians(theta)) * 5, 0)
        node = ObjectNode(id="probe", label="probe", synonyms=(), category="x", position=pos,
                          bounding_radius=0.0, room="r", affordances=frozenset(), state_attributes={})
        return SceneGraph(rooms=(Room("r", "r", Vec3(0, 0, 0)),), objects=(node,), relations=())

    assert len(resolve_ray(ray, ModalityKind.GAZE, scene_at(13.99), cfg)) == 1
    assert len(resolve_ray(ray, ModalityKind.GAZE, scene_at(14.01), cfg)) == 0
    assert len(resolve_ray(ray, ModalityKind.INDEX_RIGHT, scene_at(10.99), cfg)) == 1
    assert len(resolve_ray(ray, ModalityKind.INDEX_RIGHT, scene_at(11.01), cfg)) == 0
    assert len(resolve_ray(ray, ModalityKind.THUMB_LEFT, scene_at(10.99), cfg)) == 1

    # Tier boundaries probed at the same +/-0.01 deg resolution as the
    # range checks; trig reconstruction of an exactly-2.8 deg point lands
    # within 1e-13 deg of the boundary, far below this resolution.
    assert resolve_ray(ray, ModalityKind.GAZE, scene_at(2.79), cfg)[0].tier is Tier.HIGH
    assert resolve_ray(ray, ModalityKind.GAZE, scene_at(2.81), cfg)[0].tier is Tier.LOW
    assert resolve_ray(ray, ModalityKind.INDEX_LEFT, scene_at(7.99), cfg)[0].tier is Tier.HIGH
    assert resolve_ray(ray, ModalityKind.INDEX_LEFT, scene_at(8.01), cfg)[0].tier is Tier.LOW
    ok("parameter fidelity", "(14/11 ranges, 2.8/8 tier boundaries)")


# 3 -------------------------------------------------------------------------------


def test_state_machine_laws():
    """10,000 random event sequences: press/snapshot law, timestamp
    containment, every illegal transition rejected."""
    rng = random.Random(77)
    sequences = 0
    while sequences < 10_000:
        sequences += 1
        state = SessionState()
        phase = "idle"
        presses = 0
        touch_t = release_t = None
        t = 0.0
        for _ in range(rng.randint(1, 10)):
            kind = rng.choice(["touch", "press", "release"])
            t += rng.uniform(0, 30)
            legal = (phase == "idle" and kind == "touch") or (
                phase == "recording" and kind in ("press", "release")
            )
            event = RingEvent(RingKind(kind), t)
            if legal:
                handle_event(state, event, stub_capture)
                if kind == "touch":
                    phase, touch_t = "recording", t
                elif kind == "press":
                    presses += 1
                else:
                    phase, release_t = "dispatched", t
            else:
                try:
                    handle_event(state, event, stub_capture)
                except ProtocolError:
                    pass
                else:
                    raise AssertionError(f"illegal {kind} accepted in {phase}")
            if phase == "dispatched":
                break
        if phase == "dispatched":
            assert len(state.snapshots) == (presses if presses else 1)
            assert all(touch_t <= s.t <= release_t for s in state.snapshots)
            # Nothing is accepted after dispatch.
            tail_kind = rng.choice(["touch", "press", "release"])
            try:
                handle_event(state, RingEvent(RingKind(tail_kind), t + 1), stub_capture)
            except ProtocolError:
                pass
            else:
                raise AssertionError(f"{tail_kind} accepted after dispatch")
        else:
            assert len(state.snapshots) == presses
    ok("state machine", f"({sequences} random sequences, zero violations)")


# 4 -------------------------------------------------------------------------------


def test_candidate_contract():
    """1,000 random baseline runs all satisfy the nine-candidate contract;
    a voice-named unique target stays in rank 1 under 100 ray perturbations."""
    rng = random.Random(4242)
    for _ in range(1_000):
        scene = random_scene(rng, rich=True)
        command = random_command(rng, scene)
        cset = baseline_rank(command, scene)
        problems = validate_candidate_set(cset, scene)
        assert problems == [], problems

    home = load_scene((REPO / "scenes/home7.json").read_bytes())
    hits = 0
    for trial in range(100):
        target = rng.choice(["wine", "whiskey", "sculpture", "kettle", "teddy_bear", "globe"])
        origin = Vec3(rng.uniform(0, 18), rng.uniform(-3, 10), 1.5)
        distractor = home.objects[rng.randrange(len(home.objects))]
        gaze = ray_near_object(rng, origin, distractor.position, 12.0)
        fingers = {}
        if rng.random() < 0.5:
            other = home.objects[rng.randrange(len(home.objects))]
            fingers[ModalityKind.INDEX_RIGHT] = ray_near_object(rng, origin, other.position, 9.0)
        label = home.object_by_id(target).label
        command = make_command(home, f"Bring me the {label}", gaze, fingers)
        top = baseline_rank(command, home).candidates[0]
        if target in top.targets:
            hits += 1
    assert hits == 100
    ok("candidate contract", "(1000 random sets valid; argmax invariance 100/100)")


# 5 -------------------------------------------------------------------------------


def test_sweep_reproduction():
    """Planted corpus: coarse walk hits exactly 11 joint points and the
    coarse+fine search reports the (14, 11) peak in under 60 s."""
    started = time.perf_counter()
    scenes = SceneCache(REPO)
    corpus = load_corpus(REPO / "fixtures/corpora/planted_sweep.jsonl")
    result = sweep(corpus, BaselineResolver(), SweepSpec(), scenes=scenes)
    elapsed = time.perf_counter() - started
    assert len(result.coarse_points) == 11
    assert result.coarse_points[0] == 2.0 and result.coarse_points[-1] == 32.0
    assert result.best == (14.0, 11.0)
    runner_up = result.grid[(11.0, 14.0)]
    assert result.peaks[0][1] > runner_up
    assert elapsed < 60.0
    ok("sweep reproduction", f"(peak (14,11) at {result.peaks[0][1]:.4f} in {elapsed:.1f}s)")


# 6 -------------------------------------------------------------------------------


def test_demo_scenario_suite():
    """The four meeting-room demos resolve at rank 1 and their plans
    simulate to success on the meeting fixture."""
    scenes = SceneCache(REPO)
    corpus = load_corpus(REPO / "fixtures/corpora/demo_meeting.jsonl")
    resolver = BaselineResolver()
    expectations = {
        "demo_dock": "Dock",
        "demo_check_bag": "CheckPresence",
        "demo_tv_state": "CheckState",
        "demo_come_back": "GoTo",
    }
    for scenario in corpus:
        trial = replay(scenario, AngleConfig(), resolver, scenes)
        assert trial.match_rank == 1, scenario.id
        top = trial.candidate_set.candidates[0]
        assert top.task.value == expectations[scenario.id]
        scene = scenes.get(scenario.scene_ref)
        trace = simulate(build_plan(top, scene), scene)
        assert trace.succeeded, (scenario.id, trace.entries)
    ok("demo scenarios", "(4/4 rank-1, all simulated traces succeed)")


# 7 -------------------------------------------------------------------------------


def test_plan_closure():
    """1,000 random valid instructions: empty validation report and a
    lossless XML round trip."""
    rng = random.Random(300)
    for _ in range(1_000):
        scene = random_scene(rng, n_objects=rng.randint(3, 30))
        instr = random_instruction(rng, scene)
        tree = build_plan(instr, scene)
        xml = to_xml(tree)
        report = validate_bt(xml)
        assert report.ok, report.findings
        assert parse_xml(xml) == tree
    ok("plan closure", "(1000 instructions, all valid, lossless round trip)")


# 8 -------------------------------------------------------------------------------


def test_error_taxonomy():
    """The 25-scenario crafted corpus yields exactly the planted classes."""
    scenes = SceneCache(REPO)
    corpus = load_corpus(REPO / "fixtures/corpora/taxonomy25.jsonl")
    planted = {
        "tax_voice": ErrorClass.VOICE_INPUT,
        "tax_pointing": ErrorClass.POINTING,
        "tax_separation": ErrorClass.SEPARATION,
        "tax_interpretation": ErrorClass.INTERPRETATION,
        "tax_other": ErrorClass.OTHER,
    }
    resolver = BaselineResolver()
    assert len(corpus) == 25
    for scenario in corpus:
        trial = replay(scenario, AngleConfig(), resolver, scenes)
        if scenario.id in planted:
            assert not trial.passed, scenario.id
            assert trial.error_class is planted[scenario.id], (scenario.id, trial.error_class)
        else:
            assert trial.passed, (scenario.id, trial.error_class)
    ok("error taxonomy", "(5 planted failures classified exactly, 20 passes)")


# 9 -------------------------------------------------------------------------------


def test_service_latency_and_soak():
    """Mock-resolver round trip of 6 requests in <300 ms on a 100-object
    scene; 1,000 requests across 20 concurrent sessions with no 500s."""
    rng = random.Random(9000)
    big = random_scene(rng, n_objects=100, rich=True)
    from intenbot.scene import dump_scene

    app = create_app(EngineConfig())
    with TestClient(app) as client:
        scene_ref = client.post("/scenes", content=dump_scene(big)).json()["scene_ref"]

        snapshot = {
            "type": "snapshot",
            "t": 50,
            "gaze": {"origin": [0, 0, 1.5], "direction": [1, 0, 0]},
            "head": {"position": [0, 0, 1.5], "facing": [1, 0, 0]},
        }

        sid = client.post("/sessions", json={"scene_ref": scene_ref, "resolver": "mock"}).json()["session_id"]
        started = time.perf_counter()
        # The canonical six: touch, aim, press, release, transcript, candidates.
        responses = [
            client.post(f"/sessions/{sid}/events", json={"type": "ring", "kind": "touch", "t": 0}),
            client.post(f"/sessions/{sid}/events", json=snapshot),
            client.post(f"/sessions/{sid}/events", json={"type": "ring", "kind": "press", "t": 50}),
            client.post(f"/sessions/{sid}/events", json={"type": "ring", "kind": "release", "t": 100}),
            client.post(f"/sessions/{sid}/events", json={"type": "transcript", "text": "Bring me that"}),
            client.get(f"/sessions/{sid}/candidates", params={"page": 0}),
        ]
        elapsed_ms = (time.perf_counter() - started) * 1000
        assert all(r.status_code == 200 for r in responses)
        assert elapsed_ms < 300.0, f"round trip took {elapsed_ms:.1f} ms"

        statuses = []
        lock = threading.Lock()

        def worker(i: int) -> None:
            # 2 sessions x (create + 3 rounds of 7 + 2 retries + 1 confirm)
            # = 50 requests per worker, 1,000 across 20 workers.
            results = []
            for _ in range(2):
                s = client.post("/sessions", json={"scene_ref": scene_ref, "resolver": "mock"})
                results.append(s.status_code)
                my = s.json()["session_id"]
                t0 = 0
                for round_no in range(3):
                    results.append(client.post(f"/sessions/{my}/events", json={"type": "ring", "kind": "touch", "t": t0}).status_code)
                    results.append(client.post(f"/sessions/{my}/events", json={**snapshot, "t": t0 + 50}).status_code)
                    results.append(client.post(f"/sessions/{my}/events", json={"type": "ring", "kind": "press", "t": t0 + 50}).status_code)
                    results.append(client.post(f"/sessions/{my}/events", json={"type": "ring", "kind": "release", "t": t0 + 100}).status_code)
                    for page in range(3):
                        results.append(client.get(f"/sessions/{my}/candidates", params={"page": page}).status_code)
                    if round_no < 2:
                        results.append(client.post(f"/sessions/{my}/retry").status_code)
                        t0 += 1000
                    else:
                        results.append(client.post(f"/sessions/{my}/confirm", json={"rank": 1}).status_code)
            with lock:
                statuses.extend(results)

        threads = [threading.Thread(target=worker, args=(i,)) for i in range(20)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()

        assert len(statuses) >= 1_000, len(statuses)
        assert all(code < 500 for code in statuses), sorted(set(statuses))
    ok("service latency", f"(6-request round trip {elapsed_ms:.0f} ms; {len(statuses)} concurrent requests, no 5xx)")
