"""Candidate-generation backends behind one interface.

Three implementations: a scripted mock for tests and demos, the
deterministic baseline, and a remote chat-completion endpoint. Whatever the
backend, the returned set satisfies the candidate contract: exactly nine
entries, unique ranks, no equivalent duplicates, every id scene-valid.
Remote replies that break the contract are repaired (bad entries dropped,
the set re-padded with baseline rules) and flagged.
"""

from __future__ import annotations

import json
import os
import time
from typing import Callable, Protocol

import httpx

from .baseline import BASELINE_RESOLVER_ID, baseline_rank, padding_protos, _display_text
from .candidates import (
    CANDIDATE_COUNT,
    CandidateInstruction,
    CandidateSet,
    TaskType,
    USER,
    ensure_valid,
    validate_instruction,
)
from .prompting import assemble_prompt
from .scene import SceneGraph
from .session import MultimodalCommand

DEFAULT_TIMEOUT_MS = 30_000  # generation is observed to take ~15 s; double it

ENV_ENDPOINT = "INTENBOT_LLM_ENDPOINT"
ENV_MODE = "INTENBOT_LLM_MODE"
ENV_TIMEOUT = "INTENBOT_LLM_TIMEOUT_MS"


class ResolverError(Exception):
    pass


class ResolverTimeout(ResolverError):
    """The backend did not answer within the configured budget."""


class ResolverProtocolError(ResolverError):
    """The backend answered with something that cannot be salvaged."""


class Resolver(Protocol):
    resolver_id: str

    def resolve(self, command: MultimodalCommand, scene: SceneGraph) -> CandidateSet: ...


class BaselineResolver:
    resolver_id = BASELINE_RESOLVER_ID

    def __init__(self, extra_verbs: dict[TaskType, frozenset[str]] | None = None):
        self.extra_verbs = extra_verbs

    def resolve(self, command: MultimodalCommand, scene: SceneGraph) -> CandidateSet:
        return baseline_rank(command, scene, extra_verbs=self.extra_verbs)


ScriptFn = Callable[[MultimodalCommand, SceneGraph], CandidateSet]


class MockResolver:
    """Scripted resolver.

    Pops queued sets first, then defers to ``script`` when given, and
    otherwise builds a deterministic canned set from the scene so the mock
    works against any scene without configuration.
    """

    resolver_id = "mock"

    def __init__(self, script: ScriptFn | None = None, queue: list[CandidateSet] | None = None):
        self._script = script
        self._queue = list(queue or [])

    def resolve(self, command: MultimodalCommand, scene: SceneGraph) -> CandidateSet:
        if self._queue:
            return self._queue.pop(0)
        if self._script is not None:
            return self._script(command, scene)
        return canned_set(scene, command, resolver_id=self.resolver_id)


def canned_set(scene: SceneGraph, command: MultimodalCommand, resolver_id: str = "mock") -> CandidateSet:
    """Nine deterministic instructions built from scene affordances alone."""
    protos = padding_protos(scene, command.user_pose)[:CANDIDATE_COUNT]
    if len(protos) < CANDIDATE_COUNT:
        raise ResolverProtocolError("scene too small for a canned candidate set")
    candidates = tuple(
        CandidateInstruction(
            rank=i + 1,
            task=p.task,
            targets=p.targets,
            destination=p.destination,
            display_text=_display_text(scene, p),
            explanation=p.explanation,
            attribute=p.attribute,
        )
        for i, p in enumerate(protos)
    )
    return CandidateSet(candidates=candidates, resolver_id=resolver_id, latency_ms=0.0)


class RemoteResolver:
    """Chat-completion endpoint speaking JSON.

    The request is a standard chat payload whose system text is the static
    prompt sections and whose user text is the rendered input data. The
    reply must contain a JSON array of nine
    {task, targets, destination?, attribute?, display_text, explanation}
    objects; anything less is repaired against the baseline rules.
    """

    resolver_id = "remote"

    def __init__(
        self,
        endpoint: str,
        timeout_ms: int = DEFAULT_TIMEOUT_MS,
        model: str = "gpt-4o",
        transport: httpx.BaseTransport | None = None,
    ):
        self.endpoint = endpoint
        self.timeout_ms = timeout_ms
        self.model = model
        self._client = httpx.Client(
            timeout=timeout_ms / 1000.0,
            transport=transport,
        )

    def build_request(self, command: MultimodalCommand, scene: SceneGraph) -> dict:
        bundle = assemble_prompt(command, scene)
        return {
            "model": self.model,
            "temperature": 0,
            "messages": [
                {"role": "system", "content": bundle.as_system_text()},
                {"role": "user", "content": bundle.as_user_text()},
            ],
        }

    def resolve(self, command: MultimodalCommand, scene: SceneGraph) -> CandidateSet:
        payload = self.build_request(command, scene)
        started = time.perf_counter()
        try:
            response = self._client.post(self.endpoint, json=payload)
        except httpx.TimeoutException as exc:
            raise ResolverTimeout(f"no reply within {self.timeout_ms} ms") from exc
        except httpx.HTTPError as exc:
            raise ResolverTimeout(f"endpoint unreachable: {exc}") from exc
        latency_ms = (time.perf_counter() - started) * 1000.0
        if response.status_code != 200:
            raise ResolverProtocolError(f"endpoint returned HTTP {response.status_code}")
        entries = _extract_entries(response)
        candidates, dropped = _parse_entries(entries, scene)
        if not candidates:
            raise ResolverProtocolError("no usable instruction in reply")
        repaired = dropped or len(candidates) != CANDIDATE_COUNT
        candidates = _repair(candidates, scene, command)
        ranked = tuple(
            CandidateInstruction(
                rank=i + 1,
                task=c.task,
                targets=c.targets,
                destination=c.destination,
                display_text=c.display_text,
                explanation=c.explanation,
                attribute=c.attribute,
            )
            for i, c in enumerate(candidates)
        )
        return CandidateSet(
            candidates=ranked,
            resolver_id=self.resolver_id,
            latency_ms=latency_ms,
            repaired=repaired,
        )


def _extract_entries(response: httpx.Response) -> list:
    try:
        body = response.json()
    except (json.JSONDecodeError, ValueError) as exc:
        raise ResolverProtocolError(f"reply is not JSON: {exc}") from exc
    if isinstance(body, list):
        return body
    if isinstance(body, dict):
        if isinstance(body.get("candidates"), list):
            return body["candidates"]
        choices = body.get("choices")
        if isinstance(choices, list) and choices:
            content = choices[0].get("message", {}).get("content", "")
            return _array_from_text(content)
    raise ResolverProtocolError("reply carries no instruction array")


def _array_from_text(content: str) -> list:
    text = content.strip()
    if text.startswith("```"):
        text = text.strip("`")
        if text.startswith("json"):
            text = text[4:]
    start, end = text.find("["), text.rfind("]")
    if start == -1 or end == -1 or end <= start:
        raise ResolverProtocolError("reply content carries no JSON array")
    try:
        parsed = json.loads(text[start : end + 1])
    except json.JSONDecodeError as exc:
        raise ResolverProtocolError(f"reply array is not valid JSON: {exc}") from exc
    if not isinstance(parsed, list):
        raise ResolverProtocolError("reply JSON is not an array")
    return parsed


def _parse_entries(entries: list, scene: SceneGraph) -> tuple[list[CandidateInstruction], bool]:
    kept: list[CandidateInstruction] = []
    seen: set[tuple] = set()
    dropped = False
    for entry in entries:
        instr = _parse_entry(entry, scene, rank=len(kept) + 1)
        if instr is None or instr.equivalence_key() in seen:
            dropped = True
            continue
        seen.add(instr.equivalence_key())
        kept.append(instr)
        if len(kept) == CANDIDATE_COUNT:
            break
    if len(entries) > CANDIDATE_COUNT:
        dropped = True
    return kept, dropped


def _parse_entry(entry, scene: SceneGraph, rank: int) -> CandidateInstruction | None:
    if not isinstance(entry, dict):
        return None
    try:
        task = TaskType.from_name(entry.get("task", ""))
    except ValueError:
        return None
    targets = entry.get("targets", [])
    if not isinstance(targets, list) or not all(isinstance(t, str) for t in targets):
        return None
    destination = entry.get("destination")
    if destination is not None and not isinstance(destination, str):
        return None
    attribute = entry.get("attribute")
    display = entry.get("display_text") or ""
    explanation = entry.get("explanation") or ""
    instr = CandidateInstruction(
        rank=rank,
        task=task,
        targets=tuple(targets),
        destination=destination or None,
        display_text=str(display),
        explanation=str(explanation),
        attribute=str(attribute) if attribute else None,
    )
    if validate_instruction(instr, scene):
        return None
    return instr


def _repair(
    kept: list[CandidateInstruction], scene: SceneGraph, command: MultimodalCommand
) -> list[CandidateInstruction]:
    if len(kept) >= CANDIDATE_COUNT:
        return kept[:CANDIDATE_COUNT]
    seen = {c.equivalence_key() for c in kept}
    for proto in padding_protos(scene, command.user_pose):
        if len(kept) == CANDIDATE_COUNT:
            break
        key = (proto.task, frozenset(proto.targets), proto.destination)
        if key in seen:
            continue
        seen.add(key)
        kept.append(
            CandidateInstruction(
                rank=len(kept) + 1,
                task=proto.task,
                targets=proto.targets,
                destination=proto.destination,
                display_text=_display_text(scene, proto),
                explanation=proto.explanation + " (repair)",
                attribute=proto.attribute,
            )
        )
    if len(kept) < CANDIDATE_COUNT:
        raise ResolverProtocolError("could not repair reply to nine instructions")
    return kept


def generate_candidates(
    command: MultimodalCommand, scene: SceneGraph, resolver: Resolver
) -> CandidateSet:
    """Run a resolver and enforce the candidate contract on whatever it returns."""
    cset = resolver.resolve(command, scene)
    return ensure_valid(cset, scene)


def resolver_from_env(mode: str | None = None) -> Resolver:
    """Build a resolver from INTENBOT_LLM_* environment configuration."""
    mode = (mode or os.environ.get(ENV_MODE) or "baseline").lower()
    if mode == "baseline":
        return BaselineResolver()
    if mode == "mock":
        return MockResolver()
    if mode == "remote":
        endpoint = os.environ.get(ENV_ENDPOINT)
        if not endpoint:
            raise ResolverError(f"remote mode requires {ENV_ENDPOINT}")
        timeout_ms = int(os.environ.get(ENV_TIMEOUT, DEFAULT_TIMEOUT_MS))
        return RemoteResolver(endpoint, timeout_ms=timeout_ms)
    raise ResolverError(f"unknown resolver mode {mode!r}")
