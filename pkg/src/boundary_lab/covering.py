"""Explicit universal coverings of the round annulus and the punctured disk.

Both coverings factor as ``pi = exp o M`` where ``M`` sends the disk onto a
vertical strip (annulus) or the left half-plane (punctured disk).  The deck
group is generated by ``M^-1 o (w -> w + 2 pi i) o M``.

Curves are lifted by continuing a branch of ``log`` sample to sample, which
is the same as continuing ``M o pi^-1``.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._validation import TWO_PI, as_complex, check_angle, check_disk_point, check_int, check_positive
from .errors import DomainError, InvalidParameter, StepTooLarge
from .moebius import DiskAutomorphism, MoebiusMap, compose, real_translation

#: Geometric ratio of the radial sampling toward the boundary.
RADIAL_RATIO = 0.5
#: Default innermost radius of a radial trace.
T_MAX = 1.0 - 1e-12
#: Maximum number of interval halvings while continuing a branch.
MAX_HALVINGS = 20


class RadialVerdict(enum.Enum):
    ESCAPING = "escaping"
    BOUNDED = "bounded"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class ExplicitCovering:
    """A covering ``pi: D -> Omega`` with its strip map and deck generator.

    ``kind`` is ``"annulus"`` (``Omega = {1/R < |z| < R}``) or
    ``"punctured_disk"`` (``Omega = D minus {0}``).
    """

    kind: str
    R: Optional[float]
    deck_generator: DiskAutomorphism

    # strip coordinates -------------------------------------------------

    @property
    def _k(self) -> complex:
        return 4j * math.log(self.R) / math.pi

    def strip(self, z):
        """``M(z)``; works on scalars and arrays."""
        z = np.asarray(z, dtype=complex)
        if self.kind == "annulus":
            out = self._k * np.arctanh(z)
        else:
            out = (z - 1.0) / (z + 1.0)
        return out[()] if out.ndim == 0 else out

    def strip_inverse(self, w):
        w = np.asarray(w, dtype=complex)
        if self.kind == "annulus":
            out = np.tanh(w / self._k)
        else:
            out = (1.0 + w) / (1.0 - w)
        return out[()] if out.ndim == 0 else out

    def strip_derivative(self, z):
        z = np.asarray(z, dtype=complex)
        if self.kind == "annulus":
            out = self._k / (1.0 - z * z)
        else:
            out = 2.0 / (z + 1.0) ** 2
        return out[()] if out.ndim == 0 else out

    def __call__(self, z):
        return np.exp(self.strip(z))

    def derivative(self, z):
        return self(z) * self.strip_derivative(z)

    # the domain --------------------------------------------------------

    def contains(self, zeta) -> np.ndarray:
        r = np.abs(np.asarray(zeta, dtype=complex))
        if self.kind == "annulus":
            return (r > 1.0 / self.R) & (r < self.R)
        return (r > 0.0) & (r < 1.0)

    def boundary_distance(self, zeta):
        """Euclidean distance from ``zeta`` to the boundary of the domain."""
        r = np.abs(np.asarray(zeta, dtype=complex))
        if self.kind == "annulus":
            out = np.minimum(self.R - r, r - 1.0 / self.R)
        else:
            out = np.minimum(1.0 - r, r)
        return out[()] if out.ndim == 0 else out

    def density(self, zeta):
        """Density of the curvature -1 hyperbolic metric of the domain."""
        zeta = np.asarray(zeta, dtype=complex)
        r = np.abs(zeta)
        if self.kind == "annulus":
            a = math.log(self.R)
            x = np.log(r)
            out = (math.pi / (2.0 * a)) / np.cos(math.pi * x / (2.0 * a)) / r
        else:
            out = 1.0 / (r * np.log(1.0 / r))
        return out[()] if out.ndim == 0 else out

    def boundary_point(self, theta) -> complex:
        return cmath.exp(1j * check_angle(theta))

    def to_json(self):
        return {"kind": self.kind, "R": self.R, "deck_generator": self.deck_generator.to_json()}


def build_annulus_covering(R: float) -> ExplicitCovering:
    """Covering of ``{1/R < |z| < R}`` with ``M(z) = (4i log R / pi) atanh z``.

    ``M(0) = 0``; the radius toward ``+1`` runs up the strip and the radius
    toward ``-1`` runs down it.  The deck generator is the real translation
    ``z -> (z + t)/(1 + t z)`` with ``t = tanh(pi^2 / (2 log R))``.
    """
    R = check_positive(R, "R")
    if R <= 1.0:
        raise InvalidParameter(f"need R > 1, got {R}")
    t = math.tanh(math.pi ** 2 / (2.0 * math.log(R)))
    return ExplicitCovering("annulus", R, real_translation(t))


def build_punctured_disk_covering() -> ExplicitCovering:
    """Covering of the punctured unit disk with ``M(z) = (z - 1)/(z + 1)``."""
    m = MoebiusMap(1, -1, 1, 1)
    shift = MoebiusMap(1, TWO_PI * 1j, 0, 1)
    gamma = compose(compose(m.inverse(), shift), m)
    return ExplicitCovering("punctured_disk", None, DiskAutomorphism.from_moebius(gamma))


# --------------------------------------------------------------------------- radial traces


@dataclass(frozen=True)
class RadialTrace:
    theta: float
    t: np.ndarray
    values: np.ndarray

    def rows(self):
        return [(float(t), float(v.real), float(v.imag)) for t, v in zip(self.t, self.values)]


def radial_t_samples(n_samples: int, t_max: float = T_MAX, q: float = RADIAL_RATIO) -> np.ndarray:
    """Increasing radii ending at ``t_max`` whose gaps to 1 shrink by ``q`` each step."""
    n_samples = check_int(n_samples, "n_samples", minimum=2)
    if not 0.0 <= t_max < 1.0:
        raise InvalidParameter("t_max must lie in [0, 1)")
    k = np.arange(n_samples - 1, -1, -1, dtype=float)
    t = 1.0 - (1.0 - t_max) * q ** (-k)
    return t[t >= 0.0]


def radial_trace(cov: ExplicitCovering, theta, n_samples: int = 40, t_max: float = T_MAX) -> RadialTrace:
    theta = check_angle(theta)
    t = radial_t_samples(n_samples, t_max)
    return RadialTrace(theta, t, np.asarray(cov(t * cmath.exp(1j * theta))))


def classify_radial(cov: ExplicitCovering, theta, horizon: int = 40, tol: float = 1e-3,
                    t_max: float = T_MAX) -> RadialVerdict:
    """Escaping, bounded or undetermined behaviour of ``pi`` along one radius.

    Escaping needs the distance to the boundary to be nonincreasing over the
    second half of the samples and below ``tol`` at the end.  Bounded needs
    the tail to stay at distance above ``tol`` without losing more than half
    of its initial distance.
    """
    trace = radial_trace(cov, theta, horizon, t_max)
    d = np.asarray(cov.boundary_distance(trace.values))
    tail = d[len(d) // 2:]
    if tail[-1] < tol and np.all(np.diff(tail) <= 1e-12):
        return RadialVerdict.ESCAPING
    if tail.min() > tol and tail[-1] >= 0.5 * tail[0]:
        return RadialVerdict.BOUNDED
    return RadialVerdict.UNDETERMINED


def radial_limit(cov: ExplicitCovering, theta) -> Optional[complex]:
    """The exact radial limit of ``pi`` at ``e^{i theta}``, or ``None`` when it has none."""
    theta = check_angle(theta)
    u = cmath.exp(1j * theta)
    if cov.kind == "annulus":
        if min(abs(u - 1), abs(u + 1)) < 1e-15:
            return None
        half = 0.5 * math.log(abs(1.0 / math.tan(theta / 2.0)))
        im = math.copysign(math.pi / 4.0, math.sin(theta))
        return cmath.exp(cov._k * complex(half, im))
    if abs(u + 1) < 1e-15:
        return 0j
    return cmath.exp((u - 1.0) / (u + 1.0))


# --------------------------------------------------------------------------- lifting


def _continue(cov, w, a, b, index, depth=0):
    """Continue the branch value ``w = log a`` (up to 2 pi i) to ``b``."""
    if not (cov.contains(a) and cov.contains(b)):
        raise StepTooLarge(index)
    step = cmath.log(b / a)
    if abs(step.imag) < math.pi / 2:
        guess = w + step
        base = cmath.log(b)
        n = round((guess.imag - base.imag) / TWO_PI)
        return complex(base.real, base.imag + TWO_PI * n)
    if depth >= MAX_HALVINGS:
        raise StepTooLarge(index)
    mid = 0.5 * (a + b)
    w = _continue(cov, w, a, mid, index, depth + 1)
    return _continue(cov, w, mid, b, index, depth + 1)


def _lift_strip(cov, curve, start, tol):
    curve = np.asarray(curve, dtype=complex).ravel()
    if curve.size == 0:
        raise InvalidParameter("curve has no samples")
    start = check_disk_point(start, "start")
    if abs(complex(cov(start)) - curve[0]) > tol:
        raise InvalidParameter("pi(start) does not match the first curve sample")
    if not np.all(cov.contains(curve)):
        raise DomainError("curve leaves the domain")
    ws = np.empty(curve.size, dtype=complex)
    w = complex(cov.strip(start))
    ws[0] = w
    for i in range(1, curve.size):
        w = _continue(cov, w, complex(curve[i - 1]), complex(curve[i]), i)
        ws[i] = w
    return ws


def lift_curve(cov: ExplicitCovering, curve, start, tol: float = 1e-7) -> np.ndarray:
    """Lift a sampled curve in the domain to the disk, starting at ``start``."""
    ws = _lift_strip(cov, curve, start, tol)
    out = np.asarray(cov.strip_inverse(ws), dtype=complex)
    out[0] = complex(start)
    return out


# --------------------------------------------------------------------------- correspondence


@dataclass(frozen=True)
class CorrespondenceReport:
    """Landing points of two lifts to ``p`` whose curves differ by ``k`` core loops."""

    p: complex
    k: int
    landing_plain: complex
    landing_looped: complex
    discrepancy: float
    lift_error: float

    @property
    def passed(self) -> bool:
        return self.discrepancy < 1e-5

    def to_json(self):
        return {
            "p": [self.p.real, self.p.imag],
            "k": self.k,
            "landing_plain": [self.landing_plain.real, self.landing_plain.imag],
            "landing_looped": [self.landing_looped.real, self.landing_looped.imag],
            "theta_plain": cmath.phase(self.landing_plain) % TWO_PI,
            "theta_looped": cmath.phase(self.landing_looped) % TWO_PI,
            "discrepancy": self.discrepancy,
            "lift_error": self.lift_error,
            "passed": self.passed,
        }


def _base_point(cov) -> complex:
    return complex(cov(0.0))


def _approach_path(cov, p: complex, base: complex) -> np.ndarray:
    """Samples of a path from ``base`` to ``p`` that stays in the domain, dense near ``p``."""
    s = np.concatenate([np.linspace(0.0, 0.5, 64), 1.0 - 0.5 ** np.arange(2, 46)])
    if p == 0:
        return base * (1.0 - s)
    lb, lp = cmath.log(base), cmath.log(p)
    return np.exp(lb + s * (lp - lb))


def _loops(base: complex, k: int, per_loop: int = 64) -> np.ndarray:
    if k == 0:
        return np.array([base])
    s = np.linspace(0.0, 1.0, abs(k) * per_loop + 1)
    return base * np.exp(1j * TWO_PI * k * s)


def _landing(cov, w_last: complex, p: complex) -> complex:
    if p == 0:
        return -1.0 + 0j  # Re M -> -infinity
    lp = cmath.log(p)
    n = round((w_last.imag - lp.imag) / TWO_PI)
    return complex(cov.strip_inverse(complex(lp.real, lp.imag + TWO_PI * n)))


def correspondence_check(cov: ExplicitCovering, p=None, k: int = 1) -> CorrespondenceReport:
    """Compare the landing points of lifts of two curves to ``p`` differing by ``k`` loops.

    The two landing points must differ by the ``k``-th power of the deck
    generator.  Landing points are computed exactly from the continued
    branch; ``lift_error`` reports how far the last numeric lift sample is
    from its landing point.
    """
    k = int(k)
    if p is None:
        p = cov.R if cov.kind == "annulus" else 0.0
    p = as_complex(p, "p")
    r = abs(p)
    if cov.kind == "annulus":
        ok = min(abs(r - cov.R), abs(r - 1.0 / cov.R)) < 1e-12
    else:
        ok = r == 0.0 or abs(r - 1.0) < 1e-12
    if not ok:
        raise InvalidParameter("p must lie on the boundary of the domain")
    base = _base_point(cov)
    path = _approach_path(cov, p, base)
    plain = path
    looped = np.concatenate([_loops(base, k), path[1:]])
    ws_plain = _lift_strip(cov, plain, 0j, 1e-7)
    ws_looped = _lift_strip(cov, looped, 0j, 1e-7)
    e1 = _landing(cov, ws_plain[-1], p)
    e2 = _landing(cov, ws_looped[-1], p)
    # apply the generator k times to the point; powers of a strong translation
    # lose their determinant to cancellation
    g = cov.deck_generator if k >= 0 else cov.deck_generator.inverse()
    image = e1
    for _ in range(abs(k)):
        image = complex(g(image))
    lifted_end = complex(cov.strip_inverse(ws_looped[-1]))
    return CorrespondenceReport(p, k, e1, e2, abs(image - e2), abs(lifted_end - e2))
