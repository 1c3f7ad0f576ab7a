"""The shared ring-machine fixture: the gateway machine and the browser
playground's local machine must accept exactly the same event sequences."""

import json

import pytest

from intenbot.geometry import Ray, Vec3
from intenbot.session import (
    HeadPose,
    ProtocolError,
    RingEvent,
    RingKind,
    SessionState,
    Snapshot,
    handle_event,
)

from genutil import REPO

CASES = json.loads((REPO / "fixtures/ring_conformance.json").read_text())["cases"]


def capture(t: float) -> Snapshot:
    gaze = Ray(Vec3(0, 0, 1.5), Vec3(1, 0, 0))
    return Snapshot(t=t, gaze=gaze, fingers={}, head=HeadPose(gaze.origin, gaze.direction))


@pytest.mark.parametrize("case", CASES, ids=[c["name"] for c in CASES])
def test_conformance_case(case):
    state = SessionState()
    if case["legal"]:
        for event in case["events"]:
            handle_event(state, RingEvent(RingKind(event["kind"]), event["t"]), capture)
        if case.get("snapshots") is not None:
            assert len(state.snapshots) == case["snapshots"]
    else:
        with pytest.raises(ProtocolError):
            for event in case["events"]:
                handle_event(state, RingEvent(RingKind(event["kind"]), event["t"]), capture)
