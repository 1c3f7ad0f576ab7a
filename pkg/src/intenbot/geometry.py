"""Vector and ray primitives in a fixed right-handed world frame (+z up).

Angles are degrees at every API boundary; radians appear only inside
formulas. Distances are meters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

DEGENERATE_EPS = 1e-9
UNIT_EPS = 1e-6


class DegenerateError(ValueError):
    """A geometric query collapsed, e.g. a zero-length vector where a direction is needed."""


@dataclass(frozen=True)
class Vec3:
    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        for c in (self.x, self.y, self.z):
            if not math.isfinite(c):
                raise ValueError(f"non-finite vector component: {(self.x, self.y, self.z)}")

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def scaled(self, k: float) -> "Vec3":
        return Vec3(self.x * k, self.y * k, self.z * k)

    def dot(self, other: "Vec3") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "Vec3") -> "Vec3":
        return Vec3(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def norm(self) -> float:
        return math.sqrt(self.dot(self))

    def distance_to(self, other: "Vec3") -> float:
        return (self - other).norm()

    def normalized(self) -> "Vec3":
        n = self.norm()
        if n < DEGENERATE_EPS:
            raise DegenerateError("cannot normalize a near-zero vector")
        return Vec3(self.x / n, self.y / n, self.z / n)

    def rotated_about(self, axis: "Vec3", degrees: float) -> "Vec3":
        """Rodrigues rotation of this vector about ``axis`` by ``degrees``."""
        k = axis.normalized()
        theta = math.radians(degrees)
        cos_t, sin_t = math.cos(theta), math.sin(theta)
        return (
            self.scaled(cos_t)
            + k.cross(self).scaled(sin_t)
            + k.scaled(k.dot(self) * (1.0 - cos_t))
        )

    def as_list(self) -> list[float]:
        return [self.x, self.y, self.z]

    @classmethod
    def from_seq(cls, seq) -> "Vec3":
        if len(seq) != 3:
            raise ValueError(f"expected 3 components, got {len(seq)}")
        return cls(float(seq[0]), float(seq[1]), float(seq[2]))


@dataclass(frozen=True)
class Ray:
    """A half-line: ``origin`` is the eye midpoint for gaze or the fingertip for fingers."""

    origin: Vec3
    direction: Vec3

    def __post_init__(self) -> None:
        if abs(self.direction.norm() - 1.0) > UNIT_EPS:
            raise ValueError(f"ray direction must be unit length, |d|={self.direction.norm()!r}")

    @classmethod
    def aimed_at(cls, origin: Vec3, target: Vec3) -> "Ray":
        return cls(origin, (target - origin).normalized())


def angular_offset(ray: Ray, point: Vec3) -> float:
    """Angle in degrees between the ray direction and the direction from its origin to ``point``.

    Result lies in [0, 180]. Raises DegenerateError when the point sits on
    the ray origin (closer than 1e-9 m), where no direction exists.
    """
    delta = point - ray.origin
    n = delta.norm()
    if n < DEGENERATE_EPS:
        raise DegenerateError("point coincides with ray origin")
    cos_a = ray.direction.dot(delta) / n
    cos_a = max(-1.0, min(1.0, cos_a))
    return math.degrees(math.acos(cos_a))


def perpendicular_to(direction: Vec3) -> Vec3:
    """Any unit vector orthogonal to ``direction``; used to construct rays at exact offsets."""
    probe = Vec3(0.0, 0.0, 1.0) if abs(direction.z) < 0.9 else Vec3(1.0, 0.0, 0.0)
    return direction.cross(probe).normalized()
