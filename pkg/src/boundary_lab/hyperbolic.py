"""Hyperbolic geometry of the unit disk with density ``2|dz| / (1 - |z|^2)``.

Geodesics are kept in two explicit shapes, diameters and circles orthogonal
to the unit circle, so no radius ever has to go to infinity.  Crosscuts are
restricted to geodesic arcs and horocycles, which is all the boundary
constructions elsewhere in the package need.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from ._validation import TWO_PI, as_complex, check_angle, check_disk_point, check_positive
from .arcs import Arc, angle_gap, ccw_distance
from .errors import InvalidParameter

EPS_CURVE = 1e-9


def hyp_distance(z, w) -> float:
    """Hyperbolic distance between two points of the disk."""
    z = check_disk_point(z, "z")
    w = check_disk_point(w, "w")
    num = abs(z - w)
    if num == 0.0:
        return 0.0
    den = math.sqrt((1.0 - abs(z) ** 2) * (1.0 - abs(w) ** 2))
    return 2.0 * math.asinh(num / den)


def hyp_distance_array(z, w):
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    den = np.sqrt((1.0 - np.abs(z) ** 2) * (1.0 - np.abs(w) ** 2))
    return 2.0 * np.arcsinh(np.abs(z - w) / den)


# --------------------------------------------------------------------------- geodesics


@dataclass(frozen=True)
class Geodesic:
    """A complete geodesic: a diameter or an arc of a circle orthogonal to the unit circle.

    ``endpoints`` are the two boundary angles.  For a diameter ``direction``
    is the angle of the first endpoint; for an orthocircle ``center`` and
    ``radius`` describe the Euclidean circle.
    """

    kind: str
    endpoints: tuple
    direction: float = 0.0
    center: complex = 0j
    radius: float = math.inf

    @property
    def is_diameter(self) -> bool:
        return self.kind == "diameter"

    def orthogonality_defect(self) -> float:
        """Relative defect of ``|center|^2 = 1 + radius^2``.

        Relative, because nearly straight geodesics have huge circles and the
        absolute defect then only resolves ``eps * |center|^2``.
        """
        if self.is_diameter:
            return 0.0
        return abs(abs(self.center) ** 2 / (1.0 + self.radius ** 2) - 1.0)

    def contains(self, z, tol=EPS_CURVE) -> bool:
        z = as_complex(z)
        if abs(z) >= 1.0:
            return False
        if self.is_diameter:
            return abs((z * cmath.exp(-1j * self.direction)).imag) <= tol
        # |z - c| - r to first order, written so that huge circles stay exact
        gap = (1.0 + abs(z) ** 2) / (2.0 * self.radius) - (z * (self.center / self.radius).conjugate()).real
        return abs(gap) <= tol

    def sample(self, n=32, margin=1e-3) -> np.ndarray:
        """``n`` points along the geodesic, staying ``margin`` (in parameter) off the ends."""
        s = np.linspace(margin, 1.0 - margin, n)
        p1, p2 = (cmath.exp(1j * t) for t in self.endpoints)
        if self.is_diameter:
            return p1 + s * (p2 - p1)
        return _normalizer(self).inverse().apply_array(2.0 * s - 1.0)

    def same_set(self, other: "Geodesic", tol=1e-9) -> bool:
        a = sorted(self.endpoints)
        b = sorted(other.endpoints)
        direct = angle_gap(a[0], b[0]) <= tol and angle_gap(a[1], b[1]) <= tol
        swapped = angle_gap(a[0], b[1]) <= tol and angle_gap(a[1], b[0]) <= tol
        return direct or swapped

    def distance_to(self, z) -> float:
        """Hyperbolic distance from ``z`` to the geodesic."""
        z = check_disk_point(z)
        h = _normalizer(self)
        w = h(z)
        return math.asinh(2.0 * abs(w.imag) / (1.0 - abs(w) ** 2))

    def to_json(self):
        out = {"kind": self.kind, "endpoints": list(self.endpoints)}
        if self.is_diameter:
            out["direction"] = self.direction
        else:
            out["center"] = [self.center.real, self.center.imag]
            out["radius"] = self.radius
        return out

    @classmethod
    def from_json(cls, data):
        return geodesic_between(*data["endpoints"])


def _normalizer(g: Geodesic):
    """A disk automorphism sending ``g`` onto the real diameter."""
    from .moebius import from_three_points

    p1, p2 = (cmath.exp(1j * t) for t in g.endpoints)
    mid = cmath.exp(1j * (g.endpoints[0] + 0.5 * ccw_distance(*g.endpoints)))
    return from_three_points((p1, mid, p2), (-1.0, -1j, 1.0))


def geodesic_between(theta1, theta2) -> Geodesic:
    """The geodesic with boundary endpoints ``e^{i theta1}`` and ``e^{i theta2}``."""
    t1 = check_angle(theta1, "theta1")
    t2 = check_angle(theta2, "theta2")
    sep = ccw_distance(t1, t2)
    if sep < 1e-15 or sep > TWO_PI - 1e-15:
        raise InvalidParameter("geodesic endpoints must be distinct")
    if abs(sep - math.pi) <= 1e-12:
        return Geodesic("diameter", (t1, t2), direction=t1)
    half = 0.5 * sep
    # Center direction bisects the shorter arc between the endpoints.
    mid = t1 + half if sep < math.pi else t1 + half + math.pi
    c = cmath.exp(1j * mid) / abs(math.cos(half))
    r = abs(math.tan(half))
    return Geodesic("orthocircle", (t1, t2), center=c, radius=r)


def geodesic_through(z, w) -> Geodesic:
    """The unique geodesic through two distinct points of the disk."""
    z = check_disk_point(z, "z")
    w = check_disk_point(w, "w")
    if abs(z - w) <= 1e-15:
        raise InvalidParameter("points must be distinct")
    # Move z to 0 with the involution u -> (z - u)/(1 - conj(z) u); the
    # geodesic becomes a diameter there, and its endpoints map back exactly.
    # Solving for the centre directly is ill conditioned for near-diameters.
    flip = lambda u: (z - u) / (1.0 - z.conjugate() * u)  # noqa: E731
    e = flip(w)
    e /= abs(e)
    return geodesic_between(cmath.phase(flip(e)) % TWO_PI, cmath.phase(flip(-e)) % TWO_PI)


def transform_geodesic(m, g: Geodesic) -> Geodesic:
    """Image of a geodesic under a disk automorphism."""
    ends = [cmath.phase(m(cmath.exp(1j * t))) for t in g.endpoints]
    return geodesic_between(*ends)


# --------------------------------------------------------------------------- disks


@dataclass(frozen=True)
class HyperbolicDisk:
    center: complex
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", check_disk_point(self.center, "center"))
        object.__setattr__(self, "radius", check_positive(self.radius, "radius", strict=False))


def hyperbolic_disk_euclidean(d: HyperbolicDisk):
    """Euclidean (center, radius) of a hyperbolic disk."""
    rho = math.tanh(d.radius / 2.0)
    z0 = d.center
    den = 1.0 - rho * rho * abs(z0) ** 2
    return z0 * (1.0 - rho * rho) / den, rho * (1.0 - abs(z0) ** 2) / den


@dataclass(frozen=True)
class Horodisk:
    base: float
    R: float

    def __post_init__(self):
        object.__setattr__(self, "base", check_angle(self.base, "base"))
        object.__setattr__(self, "R", check_positive(self.R, "R"))

    def contains(self, z) -> bool:
        c, r = horodisk_euclidean(self)
        return abs(as_complex(z) - c) < r


def horodisk_euclidean(h: Horodisk):
    """Euclidean disk of radius R/(R+1) internally tangent to the unit circle at the base."""
    r = h.R / (h.R + 1.0)
    return (1.0 - r) * cmath.exp(1j * h.base), r


# --------------------------------------------------------------------------- Stolz angles


@dataclass(frozen=True)
class EuclideanStolz:
    base: float
    alpha: float
    rho: float

    def __post_init__(self):
        object.__setattr__(self, "base", check_angle(self.base, "base"))
        if not 0.0 < self.alpha < math.pi / 2:
            raise InvalidParameter("aperture alpha must lie in (0, pi/2)")
        check_positive(self.rho, "rho")


@dataclass(frozen=True)
class HyperbolicStolz:
    """Points at hyperbolic distance < r from the radius ending at ``base``."""

    base: float
    r: float

    def __post_init__(self):
        object.__setattr__(self, "base", check_angle(self.base, "base"))
        check_positive(self.r, "r")


StolzAngle = Union[EuclideanStolz, HyperbolicStolz]


def distance_to_radius(theta, z) -> float:
    """Hyperbolic distance from ``z`` to the radius ``{t e^{i theta}: 0 <= t < 1}``."""
    w = as_complex(z) * cmath.exp(-1j * theta)
    if abs(w) >= 1.0:
        return math.inf
    if w.real >= 0.0:
        return math.asinh(2.0 * abs(w.imag) / (1.0 - abs(w) ** 2))
    return 2.0 * math.atanh(abs(w))


def distance_to_radius_array(theta, z):
    w = np.asarray(z, dtype=complex) * np.exp(-1j * theta)
    across = np.arcsinh(2.0 * np.abs(w.imag) / (1.0 - np.abs(w) ** 2))
    return np.where(w.real >= 0.0, across, 2.0 * np.arctanh(np.minimum(np.abs(w), 1.0)))


def stolz_contains(s: StolzAngle, z) -> bool:
    z = as_complex(z)
    if abs(z) >= 1.0:
        return False
    if isinstance(s, EuclideanStolz):
        e = cmath.exp(1j * s.base)
        v = e - z
        if abs(v) >= s.rho:
            return False
        ang = (cmath.phase(v) - s.base + math.pi) % TWO_PI - math.pi
        return abs(ang) < s.alpha
    return distance_to_radius(s.base, z) < s.r


@dataclass(frozen=True)
class StolzSandwich:
    """Euclidean apertures enclosing a hyperbolic Stolz angle.

    ``EuclideanStolz(base, alpha_in, rho_in)`` lies inside the hyperbolic
    angle, and the hyperbolic angle lies inside ``EuclideanStolz(base,
    alpha_out, rho_out)``.  ``K`` is the fitted constant with
    ``rho_in = rho_ref / K`` and ``rho_out = K * rho_ref``.
    """

    alpha_in: float
    rho_in: float
    alpha_out: float
    rho_out: float
    K: float


def _max_aperture(r: float, s: float) -> float:
    """Largest |phi| with ``1 - s e^{i phi}`` inside the r-neighbourhood of [0, 1)."""
    hi = min(math.pi / 2, math.acos(min(1.0, s / 2.0)))
    inside = lambda phi: distance_to_radius(0.0, 1.0 - s * cmath.exp(1j * phi)) < r  # noqa: E731
    if inside(hi * (1 - 1e-12)):
        return hi
    lo = 0.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if inside(mid):
            lo = mid
        else:
            hi = mid
    return lo


def fit_stolz_sandwich(h: HyperbolicStolz, rho_ref=0.5, n=400, margin=0.02) -> StolzSandwich:
    """Fit Euclidean Stolz angles from inside and outside a hyperbolic one on a sample grid."""
    s_out = np.linspace(1e-6, 2.0, n)
    ap_out = np.array([_max_aperture(h.r, float(s)) for s in s_out])
    alpha_out = min(float(ap_out.max()) * (1 + margin), math.pi / 2 - 1e-9)
    rho_in = min(rho_ref, 1.0)
    s_in = np.linspace(1e-6, rho_in, n)
    ap_in = np.array([_max_aperture(h.r, float(s)) for s in s_in])
    alpha_in = float(ap_in.min()) * (1 - margin)
    rho_out = 2.0
    K = max(rho_ref / rho_in, rho_out / rho_ref)
    return StolzSandwich(alpha_in, rho_in, alpha_out, rho_out, K)


# --------------------------------------------------------------------------- crosscuts


@dataclass(frozen=True)
class Crosscut:
    """A geodesic crosscut, or a degenerate horocyclic one.

    For a geodesic crosscut the neighbourhood is the side facing the
    counter-clockwise boundary arc from ``endpoints[0]`` to ``endpoints[1]``.
    A horocyclic crosscut has coinciding endpoints and bounds a horodisk.
    """

    endpoints: tuple
    horo_R: float | None = None

    @classmethod
    def geodesic(cls, theta1, theta2) -> "Crosscut":
        t1, t2 = check_angle(theta1), check_angle(theta2)
        if angle_gap(t1, t2) < 1e-15:
            raise InvalidParameter("a geodesic crosscut needs distinct endpoints")
        return cls((t1, t2))

    @classmethod
    def over_arc(cls, arc: Arc) -> "Crosscut":
        return cls.geodesic(arc.start, arc.end)

    @classmethod
    def horocycle(cls, base, R) -> "Crosscut":
        t = check_angle(base)
        return cls((t, t), horo_R=check_positive(R, "R"))

    @property
    def degenerate(self) -> bool:
        return self.horo_R is not None

    @property
    def arc(self) -> Arc:
        if self.degenerate:
            return Arc(self.endpoints[0], 0.0)
        return Arc.between(*self.endpoints)

    @property
    def geodesic_curve(self) -> Geodesic:
        return geodesic_between(*self.endpoints)

    @property
    def horodisk(self) -> Horodisk:
        return Horodisk(self.endpoints[0], self.horo_R)

    def circle(self):
        """('line', direction) or ('circle', center, radius) of the supporting curve."""
        if self.degenerate:
            c, r = horodisk_euclidean(self.horodisk)
            return ("circle", c, r)
        g = self.geodesic_curve
        if g.is_diameter:
            return ("line", g.direction)
        return ("circle", g.center, g.radius)

    def in_neighbourhood(self, z) -> bool:
        z = as_complex(z)
        if abs(z) >= 1.0:
            return False
        if self.degenerate:
            return self.horodisk.contains(z)
        t1, _ = self.endpoints
        length = self.arc.length
        if abs(length - math.pi) <= 1e-12:
            return (z * cmath.exp(-1j * t1)).imag > 0
        g = self.geodesic_curve
        inside = abs(z - g.center) < g.radius
        return inside if length < math.pi else not inside

    def neighbourhood_diameter(self) -> float:
        if self.degenerate:
            return 2.0 * horodisk_euclidean(self.horodisk)[1]
        length = self.arc.length
        return 2.0 * math.sin(length / 2.0) if length <= math.pi else 2.0

    def to_json(self):
        out = {"endpoints": list(self.endpoints)}
        if self.degenerate:
            out["horocycle_R"] = self.horo_R
        return out


def _curve_intersections(c1, c2):
    """Intersection points of two lines-through-0 / circles (list of complex)."""
    if c1[0] == "line" and c2[0] == "line":
        return [0j] if angle_gap(c1[1] % math.pi, c2[1] % math.pi) > 1e-12 else [0j, 2j]
    if c1[0] == "line":
        c1, c2 = c2, c1
    if c2[0] == "line":
        _, c, r = c1
        u = cmath.exp(1j * c2[1])
        # |t u - c|^2 = r^2 -> t^2 - 2 t Re(conj(u) c) + |c|^2 - r^2 = 0
        b = (u.conjugate() * c).real
        disc = b * b - (abs(c) ** 2 - r * r)
        if disc < 0:
            return []
        sq = math.sqrt(disc)
        return [(b - sq) * u, (b + sq) * u]
    _, ca, ra = c1
    _, cb, rb = c2
    d = abs(cb - ca)
    if d == 0.0:
        return [] if abs(ra - rb) > 1e-15 else [ca + ra, ca - ra, ca + 1j * ra]
    if d > ra + rb or d < abs(ra - rb):
        return []
    x = (d * d + ra * ra - rb * rb) / (2 * d)
    y2 = max(ra * ra - x * x, 0.0)
    e = (cb - ca) / d
    base = ca + x * e
    y = math.sqrt(y2)
    return [base + 1j * y * e, base - 1j * y * e]


def crosscuts_disjoint(c1: Crosscut, c2: Crosscut, tol=1e-12) -> bool:
    """Whether two crosscuts are disjoint as subsets of the open disk."""
    if not c1.degenerate and not c2.degenerate:
        a, b = c1.endpoints
        c, d = c2.endpoints
        ends = [a, b]
        if any(angle_gap(x, y) <= tol for x in ends for y in (c, d)):
            same = c1.arc == c2.arc or (angle_gap(a, d) <= tol and angle_gap(b, c) <= tol)
            return not same
        inside_cd = [Arc.between(c, d).interior_contains(x) for x in ends]
        return inside_cd[0] == inside_cd[1]
    if c1.degenerate and c2.degenerate and angle_gap(c1.endpoints[0], c2.endpoints[0]) <= tol:
        return abs(c1.horo_R - c2.horo_R) > tol
    pts = _curve_intersections(c1.circle(), c2.circle())
    return not any(abs(p) < 1.0 - 1e-12 for p in pts)


def neighbourhood_contains(outer: Crosscut, inner: Crosscut, tol=1e-12) -> bool:
    """Whether the neighbourhood of ``inner`` lies inside that of ``outer``."""
    if outer.degenerate:
        if not inner.degenerate:
            return False
        same_base = angle_gap(outer.endpoints[0], inner.endpoints[0]) <= tol
        return same_base and inner.horo_R <= outer.horo_R + tol
    if not crosscuts_disjoint(outer, inner) and outer != inner:
        return False
    if inner.degenerate:
        return outer.arc.interior_contains(inner.endpoints[0])
    return outer.arc.contains_arc(inner.arc, tol=tol)


@dataclass
class NullChain:
    """A sequence of crosscuts, either materialized or produced on demand."""

    crosscuts: Union[Sequence[Crosscut], Callable[[int], Crosscut]]

    def __getitem__(self, n: int) -> Crosscut:
        if callable(self.crosscuts):
            return self.crosscuts(n)
        return self.crosscuts[n]

    def prefix(self, n: int):
        return [self[k] for k in range(n)]


def is_null_chain_prefix(chain: NullChain, n: int) -> bool:
    """Check the null-chain conditions on the first ``n`` crosscuts."""
    cuts = chain.prefix(n)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = cuts[i], cuts[j]
            if not crosscuts_disjoint(a, b):
                return False
            if a.degenerate and b.degenerate:
                continue  # nested horocycles share their base point
            ends_a = set(a.endpoints)
            if any(angle_gap(x, y) <= 1e-12 for x in ends_a for y in b.endpoints):
                return False
    for i in range(n - 1):
        if not neighbourhood_contains(cuts[i], cuts[i + 1]):
            return False
        if not cuts[i + 1].neighbourhood_diameter() < cuts[i].neighbourhood_diameter():
            return False
    return True
