"""Candidate instructions: the nine ranked task hypotheses shown for confirmation."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .scene import SceneGraph
from .session import PhaseError, SessionPhase, SessionState

CANDIDATE_COUNT = 9
PAGE_SIZE = 3

USER = "user"  # sentinel destination: the user's own pose


class TaskType(enum.Enum):
    FETCH = "Fetch"
    MOVE = "Move"
    CHECK_PRESENCE = "CheckPresence"
    CHECK_STATE = "CheckState"
    GO_TO = "GoTo"
    DOCK = "Dock"

    @classmethod
    def from_name(cls, name: str) -> "TaskType":
        for member in cls:
            if member.value.lower() == str(name).strip().lower():
                return member
        raise ValueError(f"unknown task type {name!r}")


# Task types whose target list may be empty.
TARGETLESS_OK = frozenset({TaskType.GO_TO, TaskType.DOCK})
# Task types that may carry a destination.
DESTINATION_OK = frozenset({TaskType.MOVE, TaskType.GO_TO})


class RankError(Exception):
    """Rank outside 1..9 or missing from the set."""


class CandidateSetError(Exception):
    """A resolver produced a set violating the candidate contract."""


@dataclass(frozen=True)
class CandidateInstruction:
    rank: int
    task: TaskType
    targets: tuple[str, ...]
    destination: str | None
    display_text: str
    explanation: str
    attribute: str | None = None  # CheckState only: which state attribute to read

    def equivalence_key(self) -> tuple:
        """Same task, same target id set, same destination."""
        return (self.task, frozenset(self.targets), self.destination)


# A confirmed instruction is just the chosen candidate.
ConfirmedInstruction = CandidateInstruction


@dataclass(frozen=True)
class CandidateSet:
    candidates: tuple[CandidateInstruction, ...]
    resolver_id: str
    latency_ms: float = 0.0
    repaired: bool = False

    def by_rank(self, rank: int) -> CandidateInstruction:
        for cand in self.candidates:
            if cand.rank == rank:
                return cand
        raise RankError(f"no candidate at rank {rank}")


def instructions_equivalent(a: CandidateInstruction, b: CandidateInstruction) -> bool:
    return a.equivalence_key() == b.equivalence_key()


def validate_instruction(instr: CandidateInstruction, scene: SceneGraph) -> list[str]:
    """Contract findings for a single instruction; empty when clean."""
    problems: list[str] = []
    if not (1 <= instr.rank <= CANDIDATE_COUNT):
        problems.append(f"rank {instr.rank} outside 1..{CANDIDATE_COUNT}")
    if not instr.targets and instr.task not in TARGETLESS_OK:
        problems.append(f"{instr.task.value} requires at least one target")
    for target in instr.targets:
        if scene.object_by_id(target) is None:
            problems.append(f"target {target!r} not in scene")
    if instr.destination is not None:
        if instr.task not in DESTINATION_OK:
            problems.append(f"{instr.task.value} does not take a destination")
        elif instr.destination != USER:
            if scene.object_by_id(instr.destination) is None and instr.destination not in scene.room_ids:
                problems.append(f"destination {instr.destination!r} not in scene")
    if instr.task is TaskType.MOVE and instr.destination is None:
        problems.append("Move requires a destination")
    if instr.task is TaskType.GO_TO and instr.destination is None and not instr.targets:
        problems.append("GoTo requires a destination")
    if not instr.display_text:
        problems.append("display_text is empty")
    return problems


def validate_candidate_set(cset: CandidateSet, scene: SceneGraph) -> list[str]:
    """Contract findings for a whole set; empty when clean."""
    problems: list[str] = []
    if len(cset.candidates) != CANDIDATE_COUNT:
        problems.append(f"expected {CANDIDATE_COUNT} candidates, got {len(cset.candidates)}")
    ranks = [c.rank for c in cset.candidates]
    if sorted(ranks) != list(range(1, len(cset.candidates) + 1)):
        problems.append(f"ranks must be unique 1..{len(cset.candidates)}, got {ranks}")
    seen: dict[tuple, int] = {}
    for cand in cset.candidates:
        key = cand.equivalence_key()
        if key in seen:
            problems.append(f"rank {cand.rank} duplicates rank {seen[key]} (equivalent instruction)")
        else:
            seen[key] = cand.rank
        problems.extend(validate_instruction(cand, scene))
    return problems


def ensure_valid(cset: CandidateSet, scene: SceneGraph) -> CandidateSet:
    problems = validate_candidate_set(cset, scene)
    if problems:
        raise CandidateSetError("; ".join(problems))
    return cset


def page(cset: CandidateSet, index: int) -> tuple[CandidateInstruction, ...]:
    """Candidates 3i+1 .. 3i+3 by rank; three pages cover the full set."""
    if index not in (0, 1, 2):
        raise IndexError(f"page index must be 0..2, got {index}")
    ranks = range(index * PAGE_SIZE + 1, index * PAGE_SIZE + PAGE_SIZE + 1)
    return tuple(cset.by_rank(r) for r in ranks)


def confirm(state: SessionState, cset: CandidateSet, rank: int) -> ConfirmedInstruction:
    """User picked one instruction; the session is done."""
    if state.phase is not SessionPhase.PRESENTING:
        raise PhaseError(f"confirm rejected in phase {state.phase.value}")
    if not isinstance(rank, int) or not (1 <= rank <= CANDIDATE_COUNT):
        raise RankError(f"rank must be 1..{CANDIDATE_COUNT}, got {rank!r}")
    chosen = cset.by_rank(rank)
    state.phase = SessionPhase.CONFIRMED
    return chosen
