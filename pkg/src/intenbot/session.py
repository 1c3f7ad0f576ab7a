"""Ring-driven input session: touch opens voice capture, presses snapshot
the rays, release dispatches the multimodal command.

One session is single-writer; apply events sequentially. Distinct sessions
are independent.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping

from .geometry import Ray, Vec3
from .targeting import AngleConfig, FINGER_KINDS, ModalityKind, PossibleObject, resolve_snapshot
from .scene import SceneGraph

MAX_RETRIES = 2


class ProtocolError(Exception):
    """An event arrived that the ring machine does not accept in this phase."""


class PhaseError(Exception):
    """An operation was invoked outside its legal phase."""


class RetryExhausted(Exception):
    """Both retries are spent; the session is abandoned."""


class EmptySceneError(Exception):
    """Finalize needs at least one object to resolve against."""


class RingKind(enum.Enum):
    TOUCH = "touch"
    PRESS = "press"
    RELEASE = "release"


class SessionPhase(enum.Enum):
    IDLE = "idle"
    RECORDING = "recording"
    DISPATCHED = "dispatched"
    PRESENTING = "presenting"
    CONFIRMED = "confirmed"
    ABANDONED = "abandoned"


@dataclass(frozen=True)
class RingEvent:
    kind: RingKind
    t: float  # milliseconds, monotonic within a session


@dataclass(frozen=True)
class HeadPose:
    position: Vec3
    facing: Vec3


@dataclass(frozen=True)
class Snapshot:
    """Rays captured at one press: gaze always, fingers only when extended."""

    t: float
    gaze: Ray
    fingers: Mapping[ModalityKind, Ray]
    head: HeadPose

    def __post_init__(self) -> None:
        bad = set(self.fingers) - set(FINGER_KINDS)
        if bad:
            raise ValueError(f"snapshot finger keys must be finger modalities, got {sorted(k.value for k in bad)}")


SnapshotProvider = Callable[[float], Snapshot]


@dataclass
class SessionState:
    phase: SessionPhase = SessionPhase.IDLE
    snapshots: list[Snapshot] = field(default_factory=list)
    transcript: str | None = None
    retries_used: int = 0
    touch_t: float | None = None
    release_t: float | None = None
    last_event_t: float | None = None


@dataclass(frozen=True)
class MultimodalCommand:
    """The finalized unit sent to disambiguation."""

    transcript: str
    snapshots: tuple[Snapshot, ...]
    possible_objects: tuple[tuple[PossibleObject, ...], ...]
    user_pose: Vec3
    issued_at: float

    def __post_init__(self) -> None:
        if not self.snapshots:
            raise ValueError("a command carries at least one snapshot")
        if len(self.possible_objects) != len(self.snapshots):
            raise ValueError("possible_objects must align with snapshots")

    @property
    def is_non_voice(self) -> bool:
        return not self.transcript.strip()


def handle_event(state: SessionState, event: RingEvent, capture: SnapshotProvider) -> SessionState:
    """Apply one ring event.

    Accepted transitions: Idle-Touch->Recording, Recording-Press->Recording
    (appending one snapshot), Recording-Release->Dispatched. A release with
    zero presses captures one snapshot so gaze evidence always exists.
    Captured snapshots are stamped with the event time, which keeps every
    snapshot timestamp inside [touch, release].
    """
    if state.last_event_t is not None and event.t < state.last_event_t:
        raise ProtocolError(f"event time {event.t} precedes {state.last_event_t}")

    if event.kind is RingKind.TOUCH:
        if state.phase is not SessionPhase.IDLE:
            raise ProtocolError(f"touch rejected in phase {state.phase.value}")
        state.phase = SessionPhase.RECORDING
        state.touch_t = event.t
    elif event.kind is RingKind.PRESS:
        if state.phase is not SessionPhase.RECORDING:
            raise ProtocolError(f"press rejected in phase {state.phase.value}")
        state.snapshots.append(_captured(capture, event.t))
    elif event.kind is RingKind.RELEASE:
        if state.phase is not SessionPhase.RECORDING:
            raise ProtocolError(f"release rejected in phase {state.phase.value}")
        if not state.snapshots:
            state.snapshots.append(_captured(capture, event.t))
        state.phase = SessionPhase.DISPATCHED
        state.release_t = event.t
    else:  # pragma: no cover - enum is closed
        raise ProtocolError(f"unknown event kind {event.kind!r}")

    state.last_event_t = event.t
    return state


def _captured(capture: SnapshotProvider, t: float) -> Snapshot:
    snap = capture(t)
    if snap.t != t:
        snap = replace(snap, t=t)
    return snap


def attach_transcript(state: SessionState, text: str) -> SessionState:
    """Store the transcript; empty text means non-voice mode downstream."""
    if state.phase not in (SessionPhase.RECORDING, SessionPhase.DISPATCHED):
        raise PhaseError(f"transcript rejected in phase {state.phase.value}")
    state.transcript = text
    return state


def finalize(state: SessionState, scene: SceneGraph, cfg: AngleConfig) -> MultimodalCommand:
    """Resolve every snapshot and assemble the MultimodalCommand."""
    if state.phase is not SessionPhase.DISPATCHED:
        raise PhaseError(f"finalize requires dispatched, got {state.phase.value}")
    if not scene.objects:
        raise EmptySceneError("scene has no objects to resolve against")
    possible = tuple(tuple(resolve_snapshot(s, scene, cfg)) for s in state.snapshots)
    return MultimodalCommand(
        transcript=state.transcript or "",
        snapshots=tuple(state.snapshots),
        possible_objects=possible,
        user_pose=state.snapshots[-1].head.position,
        issued_at=state.release_t if state.release_t is not None else state.snapshots[-1].t,
    )


def mark_presenting(state: SessionState) -> SessionState:
    """Advance to Presenting once a candidate set has arrived."""
    if state.phase is not SessionPhase.DISPATCHED:
        raise PhaseError(f"cannot present from phase {state.phase.value}")
    state.phase = SessionPhase.PRESENTING
    return state


def retry(state: SessionState) -> SessionState:
    """Return to Idle with context for another attempt; capped at two retries.

    The third attempt raises RetryExhausted and leaves the session
    Abandoned.
    """
    if state.phase is not SessionPhase.PRESENTING:
        raise PhaseError(f"retry rejected in phase {state.phase.value}")
    if state.retries_used >= MAX_RETRIES:
        state.phase = SessionPhase.ABANDONED
        raise RetryExhausted("both retries are spent")
    state.retries_used += 1
    state.phase = SessionPhase.IDLE
    state.snapshots = []
    state.transcript = None
    state.touch_t = None
    state.release_t = None
    return state
