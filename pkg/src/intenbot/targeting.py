"""Angular target resolution: cone membership with two priority tiers.

A pointing modality selects every object whose centroid lies within its
configured angle range of the ray (closed interval). Objects inside the
tighter "high" band are precise selections; the rest of the cone is the
casual band. All operations here are pure and safe under unrestricted
parallelism.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

from .geometry import DEGENERATE_EPS, Ray, Vec3, angular_offset
from .scene import SceneGraph


class ModalityKind(enum.Enum):
    GAZE = "gaze"
    THUMB_LEFT = "thumb_left"
    THUMB_RIGHT = "thumb_right"
    INDEX_LEFT = "index_left"
    INDEX_RIGHT = "index_right"


FINGER_KINDS: tuple[ModalityKind, ...] = (
    ModalityKind.THUMB_LEFT,
    ModalityKind.THUMB_RIGHT,
    ModalityKind.INDEX_LEFT,
    ModalityKind.INDEX_RIGHT,
)

_MODALITY_ORDER = {kind: i for i, kind in enumerate(ModalityKind)}


class Tier(enum.Enum):
    HIGH = "high"
    LOW = "low"


@dataclass(frozen=True)
class AngleConfig:
    """Angle ranges in degrees per modality.

    ``gaze_range``/``point_range`` bound the selection cone; ``gaze_high``/
    ``point_high`` bound the precise band inside it. ``use_extent`` makes an
    object's bounding radius shrink its effective offset by the subtended
    half-angle (off by default; centroid matching is what the default
    parameters were tuned against).
    """

    gaze_range: float = 14.0
    point_range: float = 11.0
    gaze_high: float = 2.8
    point_high: float = 8.0
    use_extent: bool = False

    def __post_init__(self) -> None:
        if not (0 < self.gaze_high <= self.gaze_range):
            raise ValueError(f"need 0 < gaze_high <= gaze_range, got {self}")
        if not (0 < self.point_high <= self.point_range):
            raise ValueError(f"need 0 < point_high <= point_range, got {self}")

    def range_for(self, kind: ModalityKind) -> float:
        return self.gaze_range if kind is ModalityKind.GAZE else self.point_range

    def high_for(self, kind: ModalityKind) -> float:
        return self.gaze_high if kind is ModalityKind.GAZE else self.point_high

    @classmethod
    def with_ranges(cls, gaze_range: float, point_range: float, base: "AngleConfig | None" = None) -> "AngleConfig":
        """Config with new ranges, clamping the high bands so invariants hold at small ranges."""
        base = base or cls()
        return cls(
            gaze_range=gaze_range,
            point_range=point_range,
            gaze_high=min(base.gaze_high, gaze_range),
            point_high=min(base.point_high, point_range),
            use_extent=base.use_extent,
        )

    def to_dict(self) -> dict:
        return {
            "gaze_range": self.gaze_range,
            "point_range": self.point_range,
            "gaze_high": self.gaze_high,
            "point_high": self.point_high,
            "use_extent": self.use_extent,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "AngleConfig":
        known = {f: raw[f] for f in ("gaze_range", "point_range", "gaze_high", "point_high", "use_extent") if f in raw}
        return cls(**known)


@dataclass(frozen=True)
class PossibleObject:
    """One object falling inside a modality's cone, with its priority tier."""

    object_id: str
    modality: ModalityKind
    offset_deg: float
    tier: Tier
    distance_m: float

    def sort_key(self) -> tuple:
        return (0 if self.tier is Tier.HIGH else 1, self.offset_deg, self.distance_m, self.object_id)


def _effective_offset(offset: float, radius: float, distance: float, use_extent: bool) -> float:
    if not use_extent or radius <= 0.0:
        return offset
    half_angle = math.degrees(math.asin(min(1.0, radius / distance)))
    return max(0.0, offset - half_angle)


def resolve_ray(
    ray: Ray, modality: ModalityKind, scene: SceneGraph, cfg: AngleConfig
) -> list[PossibleObject]:
    """All objects within the modality's cone, best first.

    Inclusion is a closed interval at the range boundary. Ordering is
    (tier, offset ascending, distance ascending, id); an empty list is a
    valid result. Objects sitting exactly on the ray origin are skipped:
    no direction toward them exists.
    """
    angle_range = cfg.range_for(modality)
    high = cfg.high_for(modality)
    hits: list[PossibleObject] = []
    for obj in scene.objects:
        distance = obj.position.distance_to(ray.origin)
        if distance < DEGENERATE_EPS:
            continue
        offset = angular_offset(ray, obj.position)
        offset = _effective_offset(offset, obj.bounding_radius, distance, cfg.use_extent)
        if offset > angle_range:
            continue
        tier = Tier.HIGH if offset <= high else Tier.LOW
        hits.append(
            PossibleObject(
                object_id=obj.id,
                modality=modality,
                offset_deg=offset,
                tier=tier,
                distance_m=distance,
            )
        )
    hits.sort(key=PossibleObject.sort_key)
    return hits


def merge_best(entries: list[PossibleObject]) -> list[PossibleObject]:
    """Deduplicate by object id, keeping each object's single best entry.

    Best means high tier before low, then smaller offset; remaining ties
    resolve by modality declaration order so output is deterministic.
    """
    best: dict[str, PossibleObject] = {}
    for entry in entries:
        cur = best.get(entry.object_id)
        if cur is None:
            best[entry.object_id] = entry
            continue
        key_new = (0 if entry.tier is Tier.HIGH else 1, entry.offset_deg, _MODALITY_ORDER[entry.modality])
        key_cur = (0 if cur.tier is Tier.HIGH else 1, cur.offset_deg, _MODALITY_ORDER[cur.modality])
        if key_new < key_cur:
            best[entry.object_id] = entry
    merged = list(best.values())
    merged.sort(key=PossibleObject.sort_key)
    return merged


def resolve_snapshot(snapshot, scene: SceneGraph, cfg: AngleConfig) -> list[PossibleObject]:
    """Union of per-ray resolutions for one capture, one entry per object.

    The gaze ray is always evaluated; finger rays only when present in the
    snapshot. An object hit by several modalities keeps its best entry.
    """
    entries: list[PossibleObject] = []
    entries.extend(resolve_ray(snapshot.gaze, ModalityKind.GAZE, scene, cfg))
    for kind in FINGER_KINDS:
        ray = snapshot.fingers.get(kind)
        if ray is not None:
            entries.extend(resolve_ray(ray, kind, scene, cfg))
    return merge_best(entries)


def brute_force_resolve(
    ray: Ray, modality: ModalityKind, scene: SceneGraph, cfg: AngleConfig
) -> list[PossibleObject]:
    """Independent reference scan used by the equivalence oracle in tests.

    Kept elementary on purpose: recompute everything per object and sort at
    the end with the documented key.
    """
    out = []
    for obj in scene.objects:
        ex = obj.position.x - ray.origin.x
        ey = obj.position.y - ray.origin.y
        ez = obj.position.z - ray.origin.z
        # Plain multiplies: x**2 goes through libm pow, which can be an ulp
        # off the IEEE product and would break bit-exact comparison.
        d = math.sqrt(ex * ex + ey * ey + ez * ez)
        if d < DEGENERATE_EPS:
            continue
        dot = ray.direction.x * ex + ray.direction.y * ey + ray.direction.z * ez
        offset = math.degrees(math.acos(max(-1.0, min(1.0, dot / d))))
        if cfg.use_extent and obj.bounding_radius > 0:
            offset = max(0.0, offset - math.degrees(math.asin(min(1.0, obj.bounding_radius / d))))
        if offset > cfg.range_for(modality):
            continue
        out.append(
            PossibleObject(
                object_id=obj.id,
                modality=modality,
                offset_deg=offset,
                tier=Tier.HIGH if offset <= cfg.high_for(modality) else Tier.LOW,
                distance_m=d,
            )
        )
    out.sort(key=lambda p: (0 if p.tier is Tier.HIGH else 1, p.offset_deg, p.distance_m, p.object_id))
    return out
