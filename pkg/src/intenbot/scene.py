"""Scene graph model: loading, validation, lookup, name matching, and prompt text.

Scenes arrive as JSON documents (schema below) and are immutable after
load, so a single graph can be shared by any number of readers.

Document schema (version "1")::

    {
      "version": "1",
      "rooms":   [{"id", "label", "centroid": [x, y, z]}],
      "objects": [{"id", "label", "synonyms"?, "category", "position": [x, y, z],
                   "bounding_radius"?, "room", "affordances"?, "state"?}],
      "relations": [{"kind", "subject", "object"}]
    }

Positions are meters in the world frame.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .geometry import Vec3

SCHEMA_VERSION = "1"

AFFORDANCES = frozenset(
    {"portable", "container", "surface", "inspectable", "toggleable", "dock", "destination"}
)
RELATION_KINDS = frozenset({"in_room", "on", "inside", "near"})

# Normalized edit distance above which a fuzzy name match is rejected.
FUZZY_THRESHOLD = 0.34


class SceneError(Exception):
    """Base class for scene document problems."""


class SchemaError(SceneError):
    """The document is not valid JSON or violates the field schema."""


class VersionError(SceneError):
    """The document declares an unsupported format version."""


class IntegrityError(SceneError):
    """Ids dangle, containment cycles, or other referential breakage."""


@dataclass(frozen=True)
class Room:
    id: str
    label: str
    centroid: Vec3


@dataclass(frozen=True)
class ObjectNode:
    id: str
    label: str
    synonyms: tuple[str, ...]
    category: str
    position: Vec3
    bounding_radius: float
    room: str
    affordances: frozenset[str]
    state_attributes: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.label:
            raise SchemaError(f"object {self.id!r} has an empty label")
        if self.bounding_radius < 0:
            raise SchemaError(f"object {self.id!r} has negative bounding_radius")


@dataclass(frozen=True)
class Relation:
    kind: str
    subject: str
    object: str


@dataclass(frozen=True)
class SceneGraph:
    rooms: tuple[Room, ...]
    objects: tuple[ObjectNode, ...]
    relations: tuple[Relation, ...]
    version: str = SCHEMA_VERSION
    _by_id: dict = field(init=False, repr=False, compare=False, default_factory=dict)
    _room_by_id: dict = field(init=False, repr=False, compare=False, default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_by_id", {o.id: o for o in self.objects})
        object.__setattr__(self, "_room_by_id", {r.id: r for r in self.rooms})

    def object_by_id(self, object_id: str) -> ObjectNode | None:
        return self._by_id.get(object_id)

    def room_by_id(self, room_id: str) -> Room | None:
        return self._room_by_id.get(room_id)

    @property
    def room_ids(self) -> frozenset[str]:
        return frozenset(self._room_by_id)

    def containment_parent(self, object_id: str) -> str | None:
        """Id of the ``inside``/``on`` parent of an object, if any."""
        for rel in self.relations:
            if rel.subject == object_id and rel.kind in ("inside", "on"):
                return rel.object
        return None


def object_by_id(scene: SceneGraph, object_id: str) -> ObjectNode | None:
    """Exact, case-sensitive id lookup; None when unknown."""
    return scene.object_by_id(object_id)


def load_scene(document: bytes | str) -> SceneGraph:
    """Parse and validate a scene document. Pure: same bytes, same graph."""
    if isinstance(document, bytes):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SchemaError(f"document is not UTF-8: {exc}") from exc
    try:
        raw = json.loads(document)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"document is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise SchemaError("top-level document must be a JSON object")

    version = raw.get("version")
    if version != SCHEMA_VERSION:
        raise VersionError(f"unsupported scene version {version!r}, expected {SCHEMA_VERSION!r}")

    rooms = tuple(_parse_room(r, i) for i, r in enumerate(_require_list(raw, "rooms")))
    objects = tuple(_parse_object(o, i) for i, o in enumerate(_require_list(raw, "objects")))
    relations = tuple(_parse_relation(r, i) for i, r in enumerate(raw.get("relations", [])))

    scene = SceneGraph(rooms=rooms, objects=objects, relations=relations, version=version)
    validate_scene(scene)
    return scene


def validate_scene(scene: SceneGraph) -> None:
    """Enforce graph invariants; raises IntegrityError on the first breakage found."""
    if not scene.rooms:
        raise IntegrityError("scene declares no rooms")
    if not scene.objects:
        raise IntegrityError("scene declares no objects")

    room_ids = set()
    for room in scene.rooms:
        if room.id in room_ids:
            raise IntegrityError(f"duplicate room id {room.id!r}")
        room_ids.add(room.id)

    object_ids = set()
    for obj in scene.objects:
        if obj.id in object_ids:
            raise IntegrityError(f"duplicate object id {obj.id!r}")
        object_ids.add(obj.id)
        if obj.room not in room_ids:
            raise IntegrityError(f"object {obj.id!r} names unknown room {obj.room!r}")

    inside_parent: dict[str, str] = {}
    containment_edges: list[tuple[str, str]] = []
    for rel in scene.relations:
        if rel.subject not in object_ids:
            raise IntegrityError(f"relation subject {rel.subject!r} does not exist")
        if rel.object not in object_ids and rel.object not in room_ids:
            raise IntegrityError(f"relation object {rel.object!r} does not exist")
        if rel.kind == "inside":
            if rel.subject in inside_parent:
                raise IntegrityError(f"object {rel.subject!r} has more than one inside parent")
            inside_parent[rel.subject] = rel.object
        if rel.kind in ("inside", "on") and rel.object in object_ids:
            containment_edges.append((rel.subject, rel.object))

    _check_acyclic(containment_edges)


def _check_acyclic(edges: list[tuple[str, str]]) -> None:
    parents: dict[str, list[str]] = {}
    for child, parent in edges:
        parents.setdefault(child, []).append(parent)
    for start in parents:
        # A cycle exists iff start can reach itself; revisiting other nodes
        # is legal (two containment paths may share an ancestor).
        visited: set[str] = set()
        frontier = list(parents.get(start, ()))
        while frontier:
            node = frontier.pop()
            if node == start:
                raise IntegrityError(f"containment cycle through {start!r}")
            if node in visited:
                continue
            visited.add(node)
            frontier.extend(parents.get(node, ()))


def dump_scene(scene: SceneGraph) -> bytes:
    """Serialize back to the document schema; load_scene(dump_scene(g)) == g."""
    doc = {
        "version": scene.version,
        "rooms": [
            {"id": r.id, "label": r.label, "centroid": r.centroid.as_list()} for r in scene.rooms
        ],
        "objects": [
            {
                "id": o.id,
                "label": o.label,
                "synonyms": list(o.synonyms),
                "category": o.category,
                "position": o.position.as_list(),
                "bounding_radius": o.bounding_radius,
                "room": o.room,
                "affordances": sorted(o.affordances),
                "state": dict(o.state_attributes),
            }
            for o in scene.objects
        ],
        "relations": [
            {"kind": r.kind, "subject": r.subject, "object": r.object} for r in scene.relations
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=False).encode("utf-8")


# --- name matching ---------------------------------------------------------


def _normalize(text: str) -> str:
    return " ".join("".join(c if c.isalnum() else " " for c in text.lower()).split())


def _edit_distance(a: str, b: str) -> int:
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def _fuzzy_distance(a: str, b: str) -> float:
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return _edit_distance(a, b) / longest


def match_by_name_scored(scene: SceneGraph, phrase: str) -> list[tuple[ObjectNode, int, float]]:
    """Matches with their quality: (node, tier, fuzzy distance).

    Tiers: 0 exact label, 1 exact synonym, 2 token subset of a name,
    3 fuzzy (normalized edit distance <= FUZZY_THRESHOLD). Sorted by
    (tier, distance, id).
    """
    norm = _normalize(phrase)
    if not norm:
        return []
    tokens = set(norm.split())

    scored: list[tuple[int, float, str, ObjectNode]] = []
    for obj in scene.objects:
        label = _normalize(obj.label)
        synonyms = [_normalize(s) for s in obj.synonyms]
        if norm == label:
            scored.append((0, 0.0, obj.id, obj))
            continue
        if any(norm == s for s in synonyms):
            scored.append((1, 0.0, obj.id, obj))
            continue
        names = [label, *synonyms]
        if any(tokens <= set(name.split()) for name in names if name):
            scored.append((2, 0.0, obj.id, obj))
            continue
        dist = min((_fuzzy_distance(norm, name) for name in names if name), default=1.0)
        if dist <= FUZZY_THRESHOLD:
            scored.append((3, dist, obj.id, obj))

    scored.sort(key=lambda item: (item[0], item[1], item[2]))
    return [(obj, tier, dist) for tier, dist, _, obj in scored]


def match_by_name(scene: SceneGraph, phrase: str) -> list[ObjectNode]:
    """Rank objects against a spoken name.

    Quality tiers: exact label, exact synonym, token subset of a name,
    then fuzzy (normalized edit distance <= FUZZY_THRESHOLD). Ids are
    case-sensitive identity; matching is case-insensitive language.
    """
    return [obj for obj, _, _ in match_by_name_scored(scene, phrase)]


# --- prompt serialization --------------------------------------------------


def serialize_for_prompt(scene: SceneGraph) -> str:
    """Deterministic text block describing every object, grouped by room.

    Includes objects outside any viewpoint so downstream reasoning can
    reach targets the user never looked at. Ordering is (room id, object
    id); serializing the same graph twice yields identical bytes.
    """
    lines: list[str] = []
    objects_by_room: dict[str, list[ObjectNode]] = {}
    for obj in scene.objects:
        objects_by_room.setdefault(obj.room, []).append(obj)

    for room in sorted(scene.rooms, key=lambda r: r.id):
        c = room.centroid
        lines.append(f"room {room.id} ({room.label}) center=({c.x:.2f}, {c.y:.2f}, {c.z:.2f})")
        for obj in sorted(objects_by_room.get(room.id, []), key=lambda o: o.id):
            p = obj.position
            parts = [
                f"- {obj.id}: {obj.label}",
                f"category={obj.category}",
                f"room={obj.room}",
                f"pos=({p.x:.2f}, {p.y:.2f}, {p.z:.2f})",
                f"affordances={','.join(sorted(obj.affordances)) or '-'}",
            ]
            parent = scene.containment_parent(obj.id)
            if parent is not None:
                parts.append(f"within={parent}")
            if obj.state_attributes:
                state = ",".join(f"{k}={v}" for k, v in sorted(obj.state_attributes.items()))
                parts.append(f"state={state}")
            lines.append("  " + " | ".join(parts))
    return "\n".join(lines) + "\n"


# --- document field parsing -------------------------------------------------


def _require_list(raw: dict, key: str) -> list:
    value = raw.get(key)
    if not isinstance(value, list):
        raise SchemaError(f"field {key!r} must be a list")
    return value


def _require_str(raw: dict, key: str, ctx: str) -> str:
    value = raw.get(key)
    if not isinstance(value, str) or not value:
        raise SchemaError(f"{ctx}: field {key!r} must be a non-empty string")
    return value


def _parse_vec(raw, ctx: str) -> Vec3:
    if not isinstance(raw, (list, tuple)) or len(raw) != 3:
        raise SchemaError(f"{ctx}: expected [x, y, z]")
    try:
        return Vec3(float(raw[0]), float(raw[1]), float(raw[2]))
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{ctx}: bad coordinates {raw!r}") from exc


def _parse_room(raw, index: int) -> Room:
    if not isinstance(raw, dict):
        raise SchemaError(f"rooms[{index}] must be an object")
    ctx = f"rooms[{index}]"
    return Room(
        id=_require_str(raw, "id", ctx),
        label=_require_str(raw, "label", ctx),
        centroid=_parse_vec(raw.get("centroid", [0, 0, 0]), ctx),
    )


def _parse_object(raw, index: int) -> ObjectNode:
    if not isinstance(raw, dict):
        raise SchemaError(f"objects[{index}] must be an object")
    ctx = f"objects[{index}]"
    affordances = raw.get("affordances", [])
    if not isinstance(affordances, list):
        raise SchemaError(f"{ctx}: affordances must be a list")
    unknown = set(affordances) - AFFORDANCES
    if unknown:
        raise SchemaError(f"{ctx}: unknown affordances {sorted(unknown)}")
    synonyms = raw.get("synonyms", [])
    if not isinstance(synonyms, list) or not all(isinstance(s, str) for s in synonyms):
        raise SchemaError(f"{ctx}: synonyms must be a list of strings")
    state = raw.get("state", {})
    if not isinstance(state, dict):
        raise SchemaError(f"{ctx}: state must be an object")
    try:
        radius = float(raw.get("bounding_radius", 0.0))
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{ctx}: bad bounding_radius") from exc
    return ObjectNode(
        id=_require_str(raw, "id", ctx),
        label=_require_str(raw, "label", ctx),
        synonyms=tuple(synonyms),
        category=_require_str(raw, "category", ctx),
        position=_parse_vec(raw.get("position"), ctx),
        bounding_radius=radius,
        room=_require_str(raw, "room", ctx),
        affordances=frozenset(affordances),
        state_attributes={str(k): str(v) for k, v in state.items()},
    )


def _parse_relation(raw, index: int) -> Relation:
    if not isinstance(raw, dict):
        raise SchemaError(f"relations[{index}] must be an object")
    ctx = f"relations[{index}]"
    kind = _require_str(raw, "kind", ctx)
    if kind not in RELATION_KINDS:
        raise SchemaError(f"{ctx}: unknown relation kind {kind!r}")
    return Relation(
        kind=kind,
        subject=_require_str(raw, "subject", ctx),
        object=_require_str(raw, "object", ctx),
    )
