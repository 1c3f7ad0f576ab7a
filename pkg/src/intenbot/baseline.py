"""Deterministic rule-based candidate ranking.

This is both a runnable resolver and the test oracle the remote path is
repaired against. The ranking procedure, in order:

1. extract the task verb and object noun phrases from the transcript;
2. ground names against the scene (exact label, synonym, token subset,
   fuzzy), letting pointing evidence disambiguate among same-name matches;
3. voice-named targets outrank everything spatial (voice has the highest
   priority);
4. among spatial candidates, high tier before low, gaze and fingers
   weighted equally, smaller offset first;
5. with several snapshots, snapshot k supplies the evidence for slot k
   (targets in order, then the destination for Move);
6. without voice, tasks are generated per pointed object from its
   affordances (dock, portable, inspectable, toggleable, destination);
7. the set is padded to exactly nine with alternate-object and
   alternate-task variants, never repeating an equivalent instruction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .candidates import (
    CANDIDATE_COUNT,
    CandidateInstruction,
    CandidateSet,
    TaskType,
    USER,
)
from .scene import ObjectNode, SceneGraph, match_by_name_scored
from .session import MultimodalCommand
from .targeting import PossibleObject, Tier, merge_best
from .transcript import ParsedUtterance, parse_transcript

BASELINE_RESOLVER_ID = "baseline"

# Affordance-to-task generation order for non-voice and padding candidates.
AFFORDANCE_TASKS: tuple[tuple[str, TaskType], ...] = (
    ("dock", TaskType.DOCK),
    ("portable", TaskType.FETCH),
    ("inspectable", TaskType.CHECK_PRESENCE),
    ("toggleable", TaskType.CHECK_STATE),
    ("destination", TaskType.GO_TO),
)


class SceneTooSmallError(Exception):
    """Fewer than nine non-equivalent instructions are constructible."""


@dataclass
class _Proto:
    """An instruction before rank assignment."""

    task: TaskType
    targets: tuple[str, ...]
    destination: str | None
    explanation: str
    attribute: str | None = None

    def key(self) -> tuple:
        return (self.task, frozenset(self.targets), self.destination)


@dataclass
class _Slot:
    alternatives: list[str]
    evidence: dict[str, PossibleObject]
    phrase: str | None = None


def _default_attribute(obj: ObjectNode, parsed_attr: str | None) -> str:
    if parsed_attr:
        return parsed_attr
    if obj.state_attributes:
        return sorted(obj.state_attributes)[0]
    return "power"


def _evidence_for_slot(command: MultimodalCommand, slot_index: int) -> list[PossibleObject]:
    snapshots = command.possible_objects
    if not snapshots:
        return []
    return list(snapshots[min(slot_index, len(snapshots) - 1)])


def _named_slot(scene: SceneGraph, phrase: str, evidence: list[PossibleObject]) -> _Slot:
    # Pointing disambiguates among equal-quality matches but never promotes
    # a weaker match over an exact one: voice keeps the highest priority.
    rank_of = {po.object_id: i for i, po in enumerate(evidence)}
    scored = match_by_name_scored(scene, phrase)
    ordered = sorted(
        scored,
        key=lambda t: (
            t[1],
            t[2],
            0 if t[0].id in rank_of else 1,
            rank_of.get(t[0].id, 0),
            t[0].id,
        ),
    )
    return _Slot(
        alternatives=[obj.id for obj, _, _ in ordered],
        evidence={po.object_id: po for po in evidence},
        phrase=phrase,
    )


def _spatial_slot(evidence: list[PossibleObject]) -> _Slot:
    return _Slot(
        alternatives=[po.object_id for po in evidence],
        evidence={po.object_id: po for po in evidence},
    )


class _Builder:
    """Accumulates non-equivalent instructions in generation order."""

    def __init__(self, scene: SceneGraph, command: MultimodalCommand):
        self.scene = scene
        self.command = command
        self.protos: list[_Proto] = []
        self._keys: set[tuple] = set()

    def add(self, proto: _Proto) -> bool:
        if len(proto.targets) != len(set(proto.targets)):
            return False
        if proto.destination is not None and proto.destination in proto.targets:
            return False
        key = proto.key()
        if key in self._keys:
            return False
        self._keys.add(key)
        self.protos.append(proto)
        return True

    @property
    def full(self) -> bool:
        return len(self.protos) >= CANDIDATE_COUNT


def _slot_reason(slot: _Slot, object_id: str) -> str:
    po = slot.evidence.get(object_id)
    if slot.phrase is not None:
        reason = f"voice names '{slot.phrase}'"
        if po is not None:
            reason += f", corroborated by {po.modality.value} at {po.offset_deg:.1f} deg"
        return reason
    if po is not None:
        return f"{po.modality.value} at {po.offset_deg:.1f} deg ({po.tier.value} priority)"
    return f"selected {object_id}"


def baseline_rank(
    command: MultimodalCommand,
    scene: SceneGraph,
    extra_verbs: dict[TaskType, frozenset[str]] | None = None,
) -> CandidateSet:
    """Produce the nine ranked candidate instructions for a command.

    ``extra_verbs`` extends the built-in verb lexicon per task type
    (deployments add their own trigger words through the engine config).
    """
    parsed = parse_transcript(command.transcript, extra_verbs)
    builder = _Builder(scene, command)

    if command.is_non_voice:
        _generate_non_voice(builder)
    else:
        _generate_voice(builder, parsed)

    _generate_padding(builder)

    if len(builder.protos) < CANDIDATE_COUNT:
        raise SceneTooSmallError(
            f"only {len(builder.protos)} non-equivalent instructions constructible, need {CANDIDATE_COUNT}"
        )

    chosen = builder.protos[:CANDIDATE_COUNT]
    instructions = tuple(
        CandidateInstruction(
            rank=i + 1,
            task=p.task,
            targets=p.targets,
            destination=p.destination,
            display_text=_display_text(scene, p),
            explanation=p.explanation,
            attribute=p.attribute,
        )
        for i, p in enumerate(chosen)
    )
    return CandidateSet(candidates=instructions, resolver_id=BASELINE_RESOLVER_ID, latency_ms=0.0)


# --- non-voice mode ---------------------------------------------------------


def _merged_evidence(command: MultimodalCommand) -> list[PossibleObject]:
    flat: list[PossibleObject] = []
    for snapshot_list in command.possible_objects:
        flat.extend(snapshot_list)
    return merge_best(flat)


def _affordance_protos(scene: SceneGraph, obj: ObjectNode, reason: str, parsed_attr: str | None) -> list[_Proto]:
    protos = []
    for affordance, task in AFFORDANCE_TASKS:
        if affordance not in obj.affordances:
            continue
        if task is TaskType.GO_TO:
            protos.append(_Proto(task, (), obj.id, reason))
        elif task is TaskType.CHECK_STATE:
            protos.append(_Proto(task, (obj.id,), None, reason, _default_attribute(obj, parsed_attr)))
        else:
            protos.append(_Proto(task, (obj.id,), None, reason))
    return protos


def _generate_non_voice(builder: _Builder) -> None:
    for po in _merged_evidence(builder.command):
        obj = builder.scene.object_by_id(po.object_id)
        if obj is None:
            continue
        reason = f"non-voice: {po.modality.value} at {po.offset_deg:.1f} deg ({po.tier.value} priority)"
        for proto in _affordance_protos(builder.scene, obj, reason, None):
            builder.add(proto)


# --- voice mode -------------------------------------------------------------


def _generate_voice(builder: _Builder, parsed: ParsedUtterance) -> None:
    scene, command = builder.scene, builder.command
    task = parsed.task or TaskType.FETCH

    if task is TaskType.DOCK:
        _generate_dock(builder, parsed)
        return

    target_slots: list[_Slot] = []
    for i, phrase in enumerate(parsed.target_phrases):
        target_slots.append(_named_slot(scene, phrase, _evidence_for_slot(command, i)))
    base = len(target_slots)
    for j in range(parsed.pronoun_count):
        target_slots.append(_spatial_slot(_evidence_for_slot(command, base + j)))
    if not target_slots and task not in (TaskType.GO_TO, TaskType.DOCK):
        target_slots.append(_spatial_slot(_evidence_for_slot(command, 0)))

    dest_slot: _Slot | None = None
    if task in (TaskType.MOVE, TaskType.GO_TO):
        dest_index = len(target_slots)
        dest_evidence = _evidence_for_slot(command, dest_index)
        if parsed.destination_phrase:
            dest_slot = _destination_slot(scene, parsed.destination_phrase, dest_evidence)
        elif parsed.destination_is_user:
            dest_slot = _Slot(alternatives=[USER], evidence={})
        else:
            dest_slot = _spatial_slot(dest_evidence)
            if task is TaskType.GO_TO:
                dest_slot.alternatives.append(USER)

    slots = list(target_slots)
    if dest_slot is not None:
        slots.append(dest_slot)

    primary = _fill(slots)
    if primary is not None:
        _emit(builder, task, parsed, slots, primary, note=None)
        # Single-slot substitutions, slot-major, alternative order.
        for k, slot in enumerate(slots):
            for alt in slot.alternatives:
                if builder.full:
                    break
                if alt == primary[k] or alt in primary[:k] + primary[k + 1 :]:
                    continue
                values = list(primary)
                values[k] = alt
                _emit(builder, task, parsed, slots, values, note=f"alternative for slot {k + 1}")
            if builder.full:
                break
        # Multi-target extension: one spatial slot with several pointed objects.
        if (
            not builder.full
            and task is TaskType.FETCH
            and len(target_slots) == 1
            and target_slots[0].phrase is None
            and len(target_slots[0].alternatives) >= 2
        ):
            pair = tuple(target_slots[0].alternatives[:2])
            _emit_values(builder, task, parsed, list(pair), None, "both pointed objects together")

    # Alternate tasks over the evidence, voice priority already spent.
    for po in _merged_evidence(command):
        if builder.full:
            break
        obj = scene.object_by_id(po.object_id)
        if obj is None:
            continue
        reason = f"alternate task for {po.modality.value} target ({po.tier.value} priority)"
        for proto in _affordance_protos(scene, obj, reason, parsed.attribute):
            if proto.task is task:
                continue
            builder.add(proto)


def _generate_dock(builder: _Builder, parsed: ParsedUtterance) -> None:
    scene, command = builder.scene, builder.command
    docks = [
        po.object_id
        for po in _merged_evidence(command)
        if (obj := scene.object_by_id(po.object_id)) is not None and "dock" in obj.affordances
    ]
    if not docks:
        fallback = sorted(
            (o for o in scene.objects if "dock" in o.affordances),
            key=lambda o: (o.position.distance_to(command.user_pose), o.id),
        )
        docks = [o.id for o in fallback]
    if docks:
        builder.add(_Proto(TaskType.DOCK, (docks[0],), None, "voice asks for docking"))
    else:
        builder.add(_Proto(TaskType.DOCK, (), None, "voice asks for docking; no dock object known"))


def _destination_slot(scene: SceneGraph, phrase: str, evidence: list[PossibleObject]) -> _Slot:
    alternatives: list[str] = []
    lowered = phrase.strip().lower()
    for room in sorted(scene.rooms, key=lambda r: r.id):
        if lowered in (room.id.lower(), room.label.lower()):
            alternatives.append(room.id)
    named = _named_slot(scene, phrase, evidence)
    alternatives.extend(a for a in named.alternatives if a not in alternatives)
    return _Slot(alternatives=alternatives, evidence=named.evidence, phrase=phrase)


def _fill(slots: list[_Slot]) -> list[str] | None:
    values: list[str] = []
    for slot in slots:
        pick = next((a for a in slot.alternatives if a not in values), None)
        if pick is None:
            return None
        values.append(pick)
    return values


def _emit(builder, task, parsed, slots, values, note):
    n_targets = len(slots) - (1 if task in (TaskType.MOVE, TaskType.GO_TO) else 0)
    targets = tuple(values[:n_targets])
    destination = values[n_targets] if task in (TaskType.MOVE, TaskType.GO_TO) and len(values) > n_targets else None
    reasons = [_slot_reason(slot, value) for slot, value in zip(slots, values)]
    if note:
        reasons.append(note)
    _emit_values(builder, task, parsed, list(targets), destination, "; ".join(reasons))


def _emit_values(builder, task, parsed, targets, destination, explanation):
    attr = None
    if task is TaskType.CHECK_STATE and targets:
        obj = builder.scene.object_by_id(targets[0])
        if obj is not None:
            attr = _default_attribute(obj, parsed.attribute)
    builder.add(_Proto(task, tuple(targets), destination, explanation, attr))


# --- padding ----------------------------------------------------------------


def padding_protos(scene: SceneGraph, user_pose) -> list[_Proto]:
    """Affordance-driven instructions over objects nearest the user, then
    whole-scene fallbacks. Used for set padding and the canned mock resolver."""
    protos: list[_Proto] = []
    ranked = sorted(scene.objects, key=lambda o: (o.position.distance_to(user_pose), o.id))
    for obj in ranked:
        reason = f"(padding) {obj.label} is near the user"
        protos.extend(_affordance_protos(scene, obj, reason, None))
    protos.append(_Proto(TaskType.GO_TO, (), USER, "(padding) return to the user"))
    for room in sorted(scene.rooms, key=lambda r: r.id):
        protos.append(_Proto(TaskType.GO_TO, (), room.id, f"(padding) go to {room.label}"))
    return protos


def _generate_padding(builder: _Builder) -> None:
    if builder.full:
        return
    for proto in padding_protos(builder.scene, builder.command.user_pose):
        builder.add(proto)
        if builder.full:
            return


# --- display text -----------------------------------------------------------


def _label(scene: SceneGraph, ident: str | None) -> str:
    if ident is None:
        return "?"
    if ident == USER:
        return "you"
    obj = scene.object_by_id(ident)
    if obj is not None:
        return obj.label
    room = scene.room_by_id(ident)
    if room is not None:
        return room.label
    return ident


def _display_text(scene: SceneGraph, proto: _Proto) -> str:
    labels = " and ".join(_label(scene, t) for t in proto.targets)
    if proto.task is TaskType.FETCH:
        return f"Bring {labels} to you"
    if proto.task is TaskType.MOVE:
        return f"Move {labels} to {_label(scene, proto.destination)}"
    if proto.task is TaskType.CHECK_PRESENCE:
        return f"Check that {labels} {'is' if len(proto.targets) == 1 else 'are'} there"
    if proto.task is TaskType.CHECK_STATE:
        return f"Check the '{proto.attribute}' state of {labels}"
    if proto.task is TaskType.GO_TO:
        return f"Go to {_label(scene, proto.destination)}"
    if proto.task is TaskType.DOCK:
        return f"Dock at {labels}" if proto.targets else "Return to the charging dock"
    return f"{proto.task.value} {labels}"  # pragma: no cover - enum closed
