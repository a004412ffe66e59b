"""Closed arcs of the unit circle in angle coordinates."""
from __future__ import annotations

import math
from dataclasses import dataclass

from ._validation import TWO_PI, check_angle
from .errors import InvalidParameter

#: Arc-arithmetic tolerance on the unit circle (radians).
EPS_ARC = 1e-10


def wrap(theta: float) -> float:
    return theta % TWO_PI


def ccw_distance(frm: float, to: float) -> float:
    """Counter-clockwise angular distance from ``frm`` to ``to`` in [0, 2 pi)."""
    return (to - frm) % TWO_PI


def angle_gap(s: float, t: float) -> float:
    """Unsigned angular distance between two boundary points."""
    d = ccw_distance(s, t)
    return min(d, TWO_PI - d)


@dataclass(frozen=True)
class Arc:
    """The closed arc swept counter-clockwise from ``start`` through ``length`` radians."""

    start: float
    length: float

    def __post_init__(self):
        if not (0.0 <= self.length <= TWO_PI) or not math.isfinite(self.length):
            raise InvalidParameter(f"arc length must lie in [0, 2 pi], got {self.length}")
        object.__setattr__(self, "start", check_angle(self.start, "start"))

    @classmethod
    def between(cls, start: float, end: float) -> "Arc":
        """Counter-clockwise arc from ``start`` to ``end``."""
        return cls(start, ccw_distance(start, end))

    @classmethod
    def centered(cls, mid: float, half_width: float) -> "Arc":
        return cls(mid - half_width, 2.0 * half_width)

    @property
    def end(self) -> float:
        return wrap(self.start + self.length)

    @property
    def midpoint(self) -> float:
        return wrap(self.start + 0.5 * self.length)

    @property
    def endpoints(self):
        return (self.start, self.end)

    def contains(self, theta: float, tol: float = 0.0) -> bool:
        if self.length >= TWO_PI - tol:
            return True
        off = ccw_distance(self.start, theta)
        return off <= self.length + tol or off >= TWO_PI - tol

    def interior_contains(self, theta: float, tol: float = 0.0) -> bool:
        off = ccw_distance(self.start, theta)
        return tol < off < self.length - tol

    def distance_to_endpoints(self, theta: float) -> float:
        return min(angle_gap(theta, self.start), angle_gap(theta, self.end))

    def intersects(self, other: "Arc", tol: float = 0.0) -> bool:
        return self.contains(other.start, tol) or other.contains(self.start, tol)

    def contains_arc(self, other: "Arc", tol: float = EPS_ARC) -> bool:
        if self.length >= TWO_PI - tol:
            return True
        off = ccw_distance(self.start, other.start)
        if off > TWO_PI - tol:
            off -= TWO_PI
        return off >= -tol and off + other.length <= self.length + tol

    def complement(self) -> "Arc":
        return Arc(self.end, TWO_PI - self.length)

    def to_json(self):
        return [self.start, self.start + self.length]

    @classmethod
    def from_json(cls, pair):
        a, b = (float(x) for x in pair)
        if b < a:
            b += TWO_PI * math.ceil((a - b) / TWO_PI)
        return cls(a, b - a)


def gaps_of(arcs, tol: float = EPS_ARC):
    """Complementary arcs of a family of pairwise disjoint closed arcs.

    Zero-length gaps (arcs that touch) are reported with length 0 so callers
    can tell touching arcs from overlapping ones.  An empty family has the
    whole circle as its single gap, reported with length ``2 pi``.
    """
    if not arcs:
        return [Arc(0.0, TWO_PI)]
    ordered = sorted(arcs, key=lambda a: a.start)
    out = []
    for i, arc in enumerate(ordered):
        nxt = ordered[(i + 1) % len(ordered)]
        length = ccw_distance(arc.end, nxt.start)
        if length > TWO_PI - tol:
            length = 0.0 if len(ordered) > 1 or arc.length > tol else TWO_PI
        out.append(Arc(arc.end, length))
    return out
