"""Mobius transformations as normalized SL(2, C) matrices.

A map ``z -> (a z + b) / (c z + d)`` is stored with ``ad - bc = 1``.  The
remaining sign ambiguity (``M`` and ``-M`` act identically) is removed by
making the first non-negligible entry have nonnegative real part, so that
two representatives of the same map compare equal entrywise.

The point at infinity is the singleton :data:`INFINITY`; it is never encoded
as a floating ``inf`` inside the formulas below.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from ._validation import as_complex, check_angle
from .errors import DomainError, IdentityMapError, InvalidParameter

#: Tolerance on ``||trace| - 2|`` below which a disk map is called parabolic.
EPS_CLS = 1e-9
#: Relative tolerance used when testing that a matrix has the SU(1,1) shape.
EPS_DISK = 1e-9
_TINY = 1e-14


class _Infinity:
    """The point at infinity of the Riemann sphere."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


def is_infinity(p) -> bool:
    return p is INFINITY


def chordal_distance(p, q) -> float:
    """Chordal (spherical) distance on the Riemann sphere, INFINITY allowed."""
    if is_infinity(p) and is_infinity(q):
        return 0.0
    if is_infinity(p):
        p, q = q, p
    if is_infinity(q):
        return 2.0 / math.sqrt(1.0 + abs(p) ** 2)
    return 2.0 * abs(p - q) / math.sqrt((1.0 + abs(p) ** 2) * (1.0 + abs(q) ** 2))


class MapClass(enum.Enum):
    IDENTITY = "identity"
    ELLIPTIC = "elliptic"
    HYPERBOLIC = "hyperbolic"
    PARABOLIC = "parabolic"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class FixedPoints:
    points: tuple
    multiplicities: tuple

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    @property
    def is_double(self) -> bool:
        return self.multiplicities == (2,)


def _normalize(a, b, c, d):
    det = a * d - b * c
    scale = max(abs(a), abs(b), abs(c), abs(d))
    if scale == 0.0 or abs(det) <= _TINY * scale * scale:
        raise InvalidParameter("singular matrix: ad - bc = 0")
    s = cmath.sqrt(det)
    a, b, c, d = a / s, b / s, c / s, d / s
    norm = max(abs(a), abs(b), abs(c), abs(d))
    for e in (a, b, c, d):
        if abs(e) > _TINY * norm:
            tol = 1e-15 * norm
            flip = e.real < -tol or (abs(e.real) <= tol and e.imag < 0)
            if flip:
                a, b, c, d = -a, -b, -c, -d
            break
    return a, b, c, d


class MoebiusMap:
    """An element of PSL(2, C) acting on the Riemann sphere."""

    __slots__ = ("_a", "_b", "_c", "_d")

    def __init__(self, a, b, c, d):
        a, b, c, d = (as_complex(x, n) for x, n in zip((a, b, c, d), "abcd"))
        a, b, c, d = _normalize(a, b, c, d)
        object.__setattr__(self, "_a", a)
        object.__setattr__(self, "_b", b)
        object.__setattr__(self, "_c", c)
        object.__setattr__(self, "_d", d)

    def __setattr__(self, name, value):
        raise AttributeError("Mobius maps are immutable")

    a = property(lambda self: self._a)
    b = property(lambda self: self._b)
    c = property(lambda self: self._c)
    d = property(lambda self: self._d)

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @classmethod
    def from_matrix(cls, mat):
        m = np.asarray(mat, dtype=complex)
        if m.shape != (2, 2):
            raise InvalidParameter("expected a 2x2 matrix")
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @property
    def entries(self):
        return (self._a, self._b, self._c, self._d)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self._a, self._b], [self._c, self._d]], dtype=complex)

    @property
    def det(self) -> complex:
        return self._a * self._d - self._b * self._c

    @property
    def trace(self) -> complex:
        return self._a + self._d

    def __call__(self, z):
        if isinstance(z, np.ndarray):
            return self.apply_array(z)
        a, b, c, d = self.entries
        if is_infinity(z):
            return INFINITY if abs(c) <= _TINY * max(abs(a), 1.0) else a / c
        z = as_complex(z)
        num = a * z + b
        den = c * z + d
        if den == 0:
            return INFINITY
        return num / den

    def apply_array(self, z):
        """Vectorized action on finite points away from the pole."""
        z = np.asarray(z, dtype=complex)
        a, b, c, d = self.entries
        return (a * z + b) / (c * z + d)

    def derivative(self, z):
        z = as_complex(z)
        return 1.0 / (self._c * z + self._d) ** 2

    def inverse(self):
        a, b, c, d = self.entries
        return type(self)._make(d, -b, -c, a)

    def __matmul__(self, other):
        return compose(self, other)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        result = MoebiusMap.identity()
        for _ in range(abs(n)):
            result = compose(base, result)
        return _rebrand(result, self)

    def isclose(self, other, tol=1e-9) -> bool:
        return bool(np.max(np.abs(self.matrix - other.matrix)) <= tol)

    def __eq__(self, other):
        if not isinstance(other, MoebiusMap):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        a, b, c, d = (f"{x:.6g}" for x in self.entries)
        return f"{type(self).__name__}(a={a}, b={b}, c={c}, d={d})"

    def to_json(self):
        return [[x.real, x.imag] for x in self.entries]

    @classmethod
    def from_json(cls, data):
        if len(data) != 4:
            raise InvalidParameter("a Mobius map needs four [re, im] entries")
        return cls(*(complex(float(re), float(im)) for re, im in data))

    @classmethod
    def _make(cls, a, b, c, d):
        if cls is MoebiusMap:
            return MoebiusMap(a, b, c, d)
        return cls.from_moebius(MoebiusMap(a, b, c, d))

    def is_disk_preserving(self, tol=EPS_DISK) -> bool:
        a, b, c, d = self.entries
        scale = max(abs(a), abs(b), 1.0)
        return abs(d - a.conjugate()) <= tol * scale and abs(c - b.conjugate()) <= tol * scale


class DiskAutomorphism(MoebiusMap):
    """A Mobius map that preserves the unit disk.

    With the normalization used here such a matrix has the shape
    ``[[alpha, beta], [conj(beta), conj(alpha)]]`` so its trace is real.
    ``params`` keeps ``(theta, a)`` when the map came from
    :func:`from_disk_params`.
    """

    __slots__ = ("_params",)

    def __init__(self, a, b, c, d, params=None):
        super().__init__(a, b, c, d)
        if not self.is_disk_preserving():
            raise DomainError(f"matrix does not preserve the unit disk: {self.entries}")
        object.__setattr__(self, "_params", params)

    @property
    def params(self):
        return self._params

    @classmethod
    def from_moebius(cls, m: MoebiusMap, params=None):
        return cls(*m.entries, params=params)

    @property
    def real_trace(self) -> float:
        return self.trace.real


def _rebrand(result, like):
    if isinstance(like, DiskAutomorphism) and not isinstance(result, DiskAutomorphism):
        return DiskAutomorphism.from_moebius(result)
    return result


def compose(f: MoebiusMap, g: MoebiusMap) -> MoebiusMap:
    """Return ``f o g``, renormalized; disk maps stay disk maps."""
    m = f.matrix @ g.matrix
    out = MoebiusMap(m[0, 0], m[0, 1], m[1, 0], m[1, 1])
    if isinstance(f, DiskAutomorphism) and isinstance(g, DiskAutomorphism):
        # Re-symmetrize to stop roundoff from drifting off SU(1,1).
        a, b = out.a, out.b
        return DiskAutomorphism(
            (a + out.d.conjugate()) / 2, (b + out.c.conjugate()) / 2,
            (b.conjugate() + out.c) / 2, (a.conjugate() + out.d) / 2,
        )
    return out


def conjugate(h: MoebiusMap, m: MoebiusMap) -> MoebiusMap:
    """``h o m o h^-1``."""
    return compose(compose(h, m), h.inverse())


def from_disk_params(theta, a) -> DiskAutomorphism:
    """The automorphism ``z -> e^{i theta} (a - z) / (1 - conj(a) z)``."""
    theta = check_angle(theta)
    a = as_complex(a, "a")
    if abs(a) >= 1.0:
        raise InvalidParameter(f"|a| must be < 1, got |a|={abs(a)}")
    u = cmath.exp(1j * theta)
    m = MoebiusMap(-u, u * a, -a.conjugate(), 1.0)
    return DiskAutomorphism.from_moebius(m, params=(theta, a))


def rotation(phi) -> DiskAutomorphism:
    h = cmath.exp(0.5j * float(phi))
    return DiskAutomorphism(h, 0, 0, h.conjugate())


def real_translation(c) -> DiskAutomorphism:
    """``z -> (z + c) / (1 + c z)`` for real ``-1 < c < 1``; fixed points are +-1."""
    c = float(c)
    if not -1.0 < c < 1.0:
        raise InvalidParameter("need -1 < c < 1")
    s = 1.0 / math.sqrt(1.0 - c * c)
    return DiskAutomorphism(s, c * s, c * s, s)


#: Cayley map from the upper half-plane onto the disk, ``z -> (z - i)/(z + i)``.
CAYLEY = MoebiusMap(1, -1j, 1, 1j)


def from_three_points(src, dst) -> MoebiusMap:
    """The unique Mobius map sending three distinct finite points onto three others."""

    def to_standard(z1, z2, z3):
        return MoebiusMap(z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1))

    s = to_standard(*(as_complex(z) for z in src))
    t = to_standard(*(as_complex(w) for w in dst))
    return compose(t.inverse(), s)


def as_disk_automorphism(m: MoebiusMap) -> DiskAutomorphism:
    if isinstance(m, DiskAutomorphism):
        return m
    if not m.is_disk_preserving():
        raise DomainError("map does not preserve the unit disk")
    return DiskAutomorphism.from_moebius(m)


def _is_identity(m: MoebiusMap, tol=1e-12) -> bool:
    a, b, c, d = m.entries
    return max(abs(b), abs(c), abs(a - d)) <= tol and abs(abs(a) - 1.0) <= tol


def classify(m: MoebiusMap, eps=EPS_CLS) -> MapClass:
    """Identity / elliptic / hyperbolic / parabolic tag of a disk automorphism."""
    if not m.is_disk_preserving():
        raise DomainError("classify expects a map preserving the unit disk")
    if _is_identity(m):
        return MapClass.IDENTITY
    t = abs(m.trace.real)
    if abs(t - 2.0) <= eps:
        return MapClass.PARABOLIC
    return MapClass.ELLIPTIC if t < 2.0 else MapClass.HYPERBOLIC


def fixed_points(m: MoebiusMap, eps=EPS_CLS) -> FixedPoints:
    """Fixed points on the sphere: the roots of ``c z^2 + (d - a) z - b = 0``."""
    if _is_identity(m):
        raise IdentityMapError("every point is fixed by the identity")
    a, b, c, d = m.entries
    norm = max(abs(a), abs(b), abs(c), abs(d))
    if abs(c) <= _TINY * norm:
        if abs(d - a) <= _TINY * norm:
            return FixedPoints((INFINITY,), (2,))
        return FixedPoints((b / (d - a), INFINITY), (1, 1))
    tr = a + d
    if abs(tr * tr - 4.0) <= 4.0 * eps:
        return FixedPoints(((a - d) / (2.0 * c),), (2,))
    bq = d - a
    sd = cmath.sqrt(bq * bq + 4.0 * b * c)
    if (bq.conjugate() * sd).real < 0:
        sd = -sd
    q = -0.5 * (bq + sd)
    return FixedPoints((q / c, -b / q), (1, 1))


def attracting_repelling(m: MoebiusMap):
    """(attracting, repelling) fixed points of a hyperbolic disk map."""
    if classify(m) is not MapClass.HYPERBOLIC:
        raise DomainError("attracting/repelling pair only defined for hyperbolic maps")
    p, q = fixed_points(m).points
    if abs(m.derivative(p)) < 1.0:
        return p, q
    return q, p


def axis(m: MoebiusMap):
    """The invariant geodesic of a hyperbolic disk automorphism."""
    from .hyperbolic import geodesic_between

    if classify(m) is not MapClass.HYPERBOLIC:
        raise DomainError("axis is only defined for hyperbolic maps")
    p, q = fixed_points(m).points
    return geodesic_between(cmath.phase(p), cmath.phase(q))
