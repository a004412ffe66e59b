"""Free Fuchsian groups presented by levelled Schottky pairing systems.

Each generator ``g`` carries two disjoint closed arcs of the unit circle, a
source ``S`` and a target ``T``, with ``g`` sending the circle minus ``S``
onto ``T``.  Letters are nonzero integers: ``k > 0`` stands for generator
``k - 1`` and ``-k`` for its inverse.  The arc attached to a letter is the
target arc for a generator and the source arc for an inverse, so a reduced
word ``x1 ... xn`` nests arcs ``x1 ... x(n-1) (A(xn))`` inside ``A(x1)``.

Levels record which step of an exhaustion the generator's curve belongs
to.  Infinite-rank systems are given by a function producing the generators
of each level, and every operation takes an explicit level horizon.
"""
from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional, Sequence

import numpy as np

from ._config import thread_count
from ._validation import TWO_PI, as_complex, check_angle, check_disk_point, check_int, check_positive
from .arcs import EPS_ARC, Arc, angle_gap, ccw_distance, gaps_of
from .errors import (
    AmbiguousAtTolerance,
    DomainError,
    InvalidParameter,
    OverlappingArcs,
    PingPongFailure,
    ResourceLimitExceeded,
)
from .hyperbolic import Crosscut, distance_to_radius_array
from .moebius import (
    CAYLEY,
    DiskAutomorphism,
    MapClass,
    MoebiusMap,
    attracting_repelling,
    classify,
    compose,
    fixed_points,
    from_three_points,
    rotation,
)

WORD_CAP = 1_000_000
#: Angular tolerance for recognising a float angle as a fixed point of a word.
SNAP_TOL = 1e-9
#: Tolerance for a generator sending its source endpoints onto its target endpoints.
PAIRING_TOL = 1e-8


def _e(theta):
    return cmath.exp(1j * theta)


# --------------------------------------------------------------------------- generators


def pairing_map(source: Arc, target: Arc, kind: str = "hyperbolic") -> DiskAutomorphism:
    """The automorphism sending the circle minus ``source`` onto ``target``.

    Hyperbolic pairings are pinned by three boundary points; parabolic ones
    need the two arcs to touch at the fixed point (``source.end ==
    target.start``) and are built as a translation in half-plane coordinates.
    """
    if kind == "hyperbolic":
        # Rotate the source to be centred at -1, translate along the real
        # axis until the complement of the source shrinks onto the arc of
        # the target's half-width about +1, then rotate onto the target.
        # This is the map fixed by S.end -> T.start, S.start -> T.end and
        # complement midpoint -> target midpoint, built without the
        # cancellation a three-point solve suffers for short arcs.
        lam = math.tan(0.5 * source.length / 2) * math.tan(0.5 * target.length / 2)
        if not 0.0 < lam < 1.0:
            raise InvalidParameter("source and target arcs are too long to be paired")
        root = math.sqrt(lam)
        h = DiskAutomorphism((1 + lam) / (2 * root), (1 - lam) / (2 * root),
                             (1 - lam) / (2 * root), (1 + lam) / (2 * root))
        return compose(rotation(target.midpoint), compose(h, rotation(math.pi - source.midpoint)))
    if kind == "parabolic":
        if angle_gap(source.end, target.start) > EPS_ARC:
            raise InvalidParameter("parabolic arcs must touch at the fixed point")
        zeta = target.start
        k = compose(CAYLEY.inverse(), rotation(-zeta))
        x_src = k(_e(source.start)).real
        x_tgt = k(_e(target.end)).real
        # the half-plane translation by tau, written directly in SU(1,1) form so
        # that tiny arcs (large tau) keep the exact disk-preserving shape
        s = 0.5 * (x_tgt - x_src)
        u = _e(zeta)
        return DiskAutomorphism(1 + 1j * s, -1j * s * u, 1j * s * u.conjugate(), 1 - 1j * s)
    raise InvalidParameter(f"unknown generator kind {kind!r}")


def isometric_arcs(m: MoebiusMap):
    """(source, target) arcs cut out by the isometric circles of ``m`` and ``m^-1``."""
    a, b = m.a, m.b
    if abs(b) < 1e-14:
        raise DomainError("a map fixing 0 has no isometric circle")
    ratio = min(1.0, abs(b) / abs(a))
    half = math.acos(ratio)
    src_mid = cmath.phase(-a.conjugate() / b.conjugate())
    tgt_mid = cmath.phase(a / b.conjugate())
    return Arc.centered(src_mid, half), Arc.centered(tgt_mid, half)


@dataclass(frozen=True)
class GeneratorSpec:
    """One generator of a pairing system, with its level and paired arcs."""

    map: DiskAutomorphism
    level: int
    source: Arc
    target: Arc
    kind: str = "hyperbolic"
    address: Optional[tuple] = None

    def __post_init__(self):
        check_int(self.level, "level", minimum=1)
        if self.kind not in ("hyperbolic", "parabolic"):
            raise InvalidParameter(f"kind must be hyperbolic or parabolic, got {self.kind!r}")
        if self.address is not None:
            object.__setattr__(self, "address", tuple(int(s) for s in self.address))

    @classmethod
    def from_arcs(cls, source: Arc, target: Arc, level=1, kind="hyperbolic", address=None):
        return cls(pairing_map(source, target, kind), level, source, target, kind, address)

    @classmethod
    def from_map(cls, m: MoebiusMap, level=1, address=None):
        """Use the isometric-circle arcs of ``m`` as source and target."""
        m = DiskAutomorphism.from_moebius(m) if not isinstance(m, DiskAutomorphism) else m
        tag = classify(m)
        if tag not in (MapClass.HYPERBOLIC, MapClass.PARABOLIC):
            raise DomainError(f"generators must be hyperbolic or parabolic, got {tag}")
        s, t = isometric_arcs(m)
        return cls(m, level, s, t, tag.value, address)

    @property
    def fixed_point_angles(self):
        return tuple(cmath.phase(p) % TWO_PI for p in fixed_points(self.map).points)

    def to_json(self):
        out = {
            "matrix": self.map.to_json(),
            "level": self.level,
            "source_arc": self.source.to_json(),
            "target_arc": self.target.to_json(),
            "kind": self.kind,
        }
        if self.address is not None:
            out["address"] = list(self.address)
        return out

    @classmethod
    def from_json(cls, data):
        m = DiskAutomorphism.from_moebius(MoebiusMap.from_json(data["matrix"]))
        addr = data.get("address")
        return cls(
            m, int(data["level"]), Arc.from_json(data["source_arc"]),
            Arc.from_json(data["target_arc"]), data["kind"], tuple(addr) if addr else None,
        )


# --------------------------------------------------------------------------- systems


class SchottkySystem:
    """A levelled pairing system: finitely many generators, or a level-by-level source.

    Parameters
    ----------
    generators : sequence of GeneratorSpec
        Explicit generators (finite rank).
    level_source : callable, optional
        ``level_source(n)`` returns the generators of level ``n``; used for
        infinite-rank systems instead of ``generators``.
    max_level : int, optional
        Last level produced by ``level_source``; ``None`` means unbounded.
    default_levels : int
        Level horizon used by lazy systems when an operation gets none.
    """

    def __init__(
        self,
        generators: Sequence[GeneratorSpec] = (),
        *,
        level_source: Optional[Callable[[int], Sequence[GeneratorSpec]]] = None,
        max_level: Optional[int] = None,
        basepoint=0j,
        default_levels: int = 8,
        name: str = "",
        arc_source: Optional[Callable[[int], Sequence[tuple]]] = None,
    ):
        if generators and level_source is not None:
            raise InvalidParameter("give either explicit generators or a level source")
        self._explicit = tuple(generators)
        self._source = level_source
        self._max_level = max_level
        self._cache: dict[int, tuple] = {}
        self._arc_source = arc_source
        self.basepoint = check_disk_point(basepoint, "basepoint")
        self.default_levels = check_int(default_levels, "default_levels", minimum=1)
        self.name = name

    @property
    def is_finite(self) -> bool:
        return self._source is None or self._max_level is not None

    def _level(self, n: int) -> tuple:
        if n not in self._cache:
            if self._max_level is not None and n > self._max_level:
                self._cache[n] = ()
            else:
                gens = tuple(self._source(n))
                for g in gens:
                    if g.level != n:
                        raise InvalidParameter(f"level source returned level {g.level} for level {n}")
                self._cache[n] = gens
        return self._cache[n]

    def level_arcs(self, n: int) -> list:
        """(source, target) arcs of level ``n`` without building the maps.

        Deep levels of some systems have arcs too short for their pairing
        maps to be stored in double precision; geometric questions about
        the arcs alone go through here.
        """
        if self._source is None:
            return [(g.source, g.target) for g in self._explicit if g.level == n]
        if self._max_level is not None and n > self._max_level:
            return []
        if self._arc_source is not None:
            return list(self._arc_source(n))
        return [(g.source, g.target) for g in self._level(n)]

    def resolve_levels(self, levels: Optional[int]) -> Optional[int]:
        if levels is not None:
            return check_int(levels, "levels", minimum=0)
        if self._source is None:
            return None
        return self._max_level if self._max_level is not None else self.default_levels

    def generators(self, levels: Optional[int] = None) -> tuple:
        """Generators of level <= ``levels`` in global index order."""
        levels = self.resolve_levels(levels)
        if self._source is None:
            gens = self._explicit
            return gens if levels is None else tuple(g for g in gens if g.level <= levels)
        out = []
        for n in range(1, levels + 1):
            out.extend(self._level(n))
        return tuple(out)

    @property
    def rank(self) -> int:
        if not self.is_finite:
            raise DomainError("infinite-rank system has no finite rank")
        return len(self.generators())

    def letters(self, levels=None):
        n = len(self.generators(levels))
        out = []
        for i in range(1, n + 1):
            out.extend((i, -i))
        return out

    def letter_map(self, x: int, levels=None) -> DiskAutomorphism:
        g = self.generators(levels)[abs(x) - 1].map
        return g if x > 0 else g.inverse()

    def letter_arc(self, x: int, levels=None) -> Arc:
        g = self.generators(levels)[abs(x) - 1]
        return g.target if x > 0 else g.source

    def letter_level(self, x: int, levels=None) -> int:
        return self.generators(levels)[abs(x) - 1].level

    def word_map(self, word, levels=None) -> MoebiusMap:
        m = MoebiusMap.identity()
        for x in word:
            m = compose(m, self.letter_map(x, levels))
        return m

    def depth0_arcs(self, levels=None):
        """All generator arcs as (letter, Arc) pairs."""
        return [(x, self.letter_arc(x, levels)) for x in self.letters(levels)]

    def depth0_gaps(self, levels=None):
        """Complementary arcs of the generator arcs, sorted by start angle."""
        arcs = [a for _, a in self.depth0_arcs(levels)]
        return gaps_of(arcs)

    def to_json(self, levels=None):
        return [g.to_json() for g in self.generators(levels)]

    @classmethod
    def from_json(cls, data, name=""):
        if isinstance(data, dict):
            name = data.get("name", name)
            data = data["generators"]
        return cls([GeneratorSpec.from_json(d) for d in data], name=name)

    def __repr__(self):
        if self._source is None:
            return f"SchottkySystem(rank={len(self._explicit)}, name={self.name!r})"
        return f"SchottkySystem(lazy, max_level={self._max_level}, name={self.name!r})"


# --------------------------------------------------------------------------- validation


@dataclass(frozen=True)
class Certificate:
    """Evidence that a system passed the disjointness and ping-pong checks."""

    n_generators: int
    level_horizon: Optional[int]
    min_separation: float
    samples_checked: int


def _sample_outside(arc: Arc, n: int) -> np.ndarray:
    comp = arc.complement()
    s = (np.arange(n) + 0.5) / n
    return comp.start + s * comp.length


def validate(system: SchottkySystem, level_horizon=None, samples=48) -> Certificate:
    """Certify arc disjointness and the ping-pong inclusions up to a level horizon."""
    gens = system.generators(level_horizon)
    entries = []
    for i, g in enumerate(gens):
        tag = classify(g.map)
        if tag.value != g.kind:
            raise PingPongFailure(i, f"map is {tag}, declared {g.kind}")
        entries.append((g.source.start, g.source, i, "S"))
        entries.append((g.target.start, g.target, i, "T"))
    entries.sort(key=lambda e: e[0])
    min_sep = math.inf
    for k, (_, arc, i, side) in enumerate(entries):
        _, nxt, j, nside = entries[(k + 1) % len(entries)]
        if len(entries) < 2:
            break
        sep = ccw_distance(arc.end, nxt.start)
        wrapped = sep > TWO_PI - 1e-6
        touching = sep <= EPS_ARC or wrapped
        if touching:
            ok = i == j and gens[i].kind == "parabolic" and side == "S" and nside == "T"
            if not ok:
                raise OverlappingArcs(i, j, f"arc ending at {arc.end:.12g} meets arc starting at {nxt.start:.12g}")
        else:
            min_sep = min(min_sep, sep)
        # A sorted sweep catches containment too: the next arc must start after this one ends.
        if not touching and ccw_distance(arc.start, nxt.start) < arc.length:
            raise OverlappingArcs(i, j)
    n_checked = 0
    for i, g in enumerate(gens):
        # exact side pairing: the region outside all arcs must be a fundamental domain
        img_end = cmath.phase(g.map(_e(g.source.end))) % TWO_PI
        img_start = cmath.phase(g.map(_e(g.source.start))) % TWO_PI
        if angle_gap(img_end, g.target.start) > PAIRING_TOL or angle_gap(img_start, g.target.end) > PAIRING_TOL:
            raise PingPongFailure(i, _e(g.source.end))
        for m, frm, to in ((g.map, g.source, g.target), (g.map.inverse(), g.target, g.source)):
            thetas = _sample_outside(frm, samples)
            images = np.angle(m.apply_array(np.exp(1j * thetas))) % TWO_PI
            for t, im in zip(thetas, images):
                if not to.contains(float(im), tol=EPS_ARC):
                    raise PingPongFailure(i, float(t))
            cut_to = Crosscut.over_arc(to)
            for z in (system.basepoint, 0.5 * _e(frm.midpoint + math.pi), 0.9 * _e(frm.end + 0.1)):
                if Crosscut.over_arc(frm).in_neighbourhood(z):
                    continue
                if not cut_to.in_neighbourhood(m(z)):
                    raise PingPongFailure(i, z)
            n_checked += samples + 3
    return Certificate(len(gens), system.resolve_levels(level_horizon), min_sep, n_checked)


# --------------------------------------------------------------------------- words


def reduced_word_count(n_generators: int, L: int) -> int:
    """Number of reduced words of length <= L in a free group of the given rank."""
    if n_generators == 0:
        return 1
    total, layer = 1, 2 * n_generators
    for _ in range(L):
        total += layer
        layer *= 2 * n_generators - 1
    return total


def _check_cap(system, L, levels, cap):
    n = len(system.generators(levels))
    if reduced_word_count(n, L) > cap:
        raise ResourceLimitExceeded(f"{reduced_word_count(n, L)} words exceed the cap of {cap}")


def reduced_words(system: SchottkySystem, L: int, levels=None, cap=WORD_CAP):
    """All reduced words of length <= L, breadth first, letters ordered (1, -1, 2, -2, ...)."""
    L = check_int(L, "L")
    _check_cap(system, L, levels, cap)
    letters = system.letters(levels)
    layer = [()]
    out = [()]
    for _ in range(L):
        nxt = []
        for w in layer:
            for x in letters:
                if w and w[-1] == -x:
                    continue
                nxt.append(w + (x,))
        out.extend(nxt)
        layer = nxt
    return out


def _layers(system, L, levels, first_letters=None):
    """Yield (words, matrices) layer by layer, matrices stacked as (N, 2, 2)."""
    letters = system.letters(levels)
    mats = {x: system.letter_map(x, levels).matrix for x in letters}
    words = [()]
    stack = np.eye(2, dtype=complex)[None]
    yield words, stack
    for depth in range(L):
        new_words, parents, lets = [], [], []
        for k, w in enumerate(words):
            for x in letters:
                if w and w[-1] == -x:
                    continue
                if depth == 0 and first_letters is not None and x not in first_letters:
                    continue
                new_words.append(w + (x,))
                parents.append(k)
                lets.append(x)
        if not new_words:
            words, stack = [], np.zeros((0, 2, 2), dtype=complex)
            yield words, stack
            continue
        gen = np.stack([mats[x] for x in lets])
        stack = np.matmul(stack[np.array(parents)], gen)
        # only the projective class matters; rescaling keeps long products finite
        stack = stack / np.abs(stack).max(axis=(1, 2))[:, None, None]
        words = new_words
        yield words, stack


def _apply_stack(stack, z):
    return (stack[:, 0, 0] * z + stack[:, 0, 1]) / (stack[:, 1, 0] * z + stack[:, 1, 1])


def orbit_with_words(system: SchottkySystem, L: int, levels=None, cap=WORD_CAP):
    L = check_int(L, "L")
    _check_cap(system, L, levels, cap)
    z0 = system.basepoint
    words, pts = [], []
    for ws, stack in _layers(system, L, levels):
        words.extend(ws)
        if len(ws):
            pts.append(_apply_stack(stack, z0))
    return words, np.concatenate(pts) if pts else np.array([z0])


def orbit(system: SchottkySystem, L: int, levels=None, cap=WORD_CAP) -> np.ndarray:
    """Orbit of the basepoint under all reduced words of length <= L."""
    return orbit_with_words(system, L, levels, cap)[1]


# --------------------------------------------------------------------------- covers


@dataclass(frozen=True)
class LimitSetCover:
    depth: int
    arcs: tuple
    words: tuple
    total_length: float

    def contains(self, theta: float, tol: float = 0.0) -> bool:
        return any(a.contains(theta, tol) for a in self.arcs)

    def to_json(self):
        return {
            "depth": self.depth,
            "total_length": self.total_length,
            "arcs": [a.to_json() for a in self.arcs],
            "words": [list(w) for w in self.words],
        }


def _image_arcs(stack, arc: Arc, bound: float):
    p = _apply_stack(stack, _e(arc.start))
    q = _apply_stack(stack, _e(arc.end))
    a0 = np.angle(p) % TWO_PI
    a1 = np.angle(q) % TWO_PI
    length = (a1 - a0) % TWO_PI
    chord = 2.0 * np.arcsin(np.minimum(np.abs(q - p) / 2.0, 1.0))
    length = np.where(length > bound + 1e-9, chord, length)
    return a0, length


def _cover_part(system, L, levels, first_letters):
    words_out, arcs_out = [], []
    letters = system.letters(levels)
    arcs = {x: system.letter_arc(x, levels) for x in letters}
    last = None
    for ws, stack in _layers(system, L, levels, first_letters):
        last = (ws, stack)
    ws, stack = last
    if L == 0:
        for x in letters:
            if first_letters is None or x in first_letters:
                words_out.append((x,))
                arcs_out.append(arcs[x])
        return words_out, arcs_out
    for x in letters:
        keep = [k for k, w in enumerate(ws) if w[-1] != -x]
        if not keep:
            continue
        sub = stack[np.array(keep)]
        bound = np.array([arcs[ws[k][0]].length for k in keep])
        a0, length = _image_arcs(sub, arcs[x], bound)
        for k, s, ln in zip(keep, a0, length):
            words_out.append(ws[k] + (x,))
            arcs_out.append(Arc(float(s), float(ln)))
    return words_out, arcs_out


def limit_set_cover(system: SchottkySystem, L: int, levels=None, cap=WORD_CAP) -> LimitSetCover:
    """Union of the arcs ``w(A(x))`` over reduced words ``w x`` with ``|w| = L``.

    Depth 0 is the family of generator arcs.  Arcs are listed by word in
    breadth-first order; each recorded word is ``w x``.
    """
    L = check_int(L, "L")
    _check_cap(system, L + 1, levels, cap)
    letters = system.letters(levels)
    if not letters:
        return LimitSetCover(L, (), (), 0.0)
    workers = thread_count()
    if workers > 1 and L > 0 and len(letters) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(lambda x: _cover_part(system, L, levels, {x}), letters))
    else:
        parts = [_cover_part(system, L, levels, None)]
    words, arcs = [], []
    for w, a in parts:
        words.extend(w)
        arcs.extend(a)
    order = sorted(range(len(words)), key=lambda k: _word_key(words[k]))
    words = tuple(words[k] for k in order)
    arcs = tuple(arcs[k] for k in order)
    return LimitSetCover(L, arcs, words, float(math.fsum(a.length for a in arcs)))


def _word_key(w):
    return tuple((abs(x), 0 if x > 0 else 1) for x in w)


# --------------------------------------------------------------------------- coding


@dataclass(frozen=True)
class GapRef:
    """A translate ``word(G)`` of the depth-0 gap with index ``gap``."""

    word: tuple
    gap: Optional[int]
    arc: Arc

    def to_json(self):
        return {"word": list(self.word), "gap": self.gap, "arc": self.arc.to_json()}


@dataclass(frozen=True)
class PeriodicTail:
    """An itinerary that is eventually ``period`` repeated forever after ``prefix``."""

    prefix: tuple
    period: tuple
    kind: str  # "hyperbolic" or "parabolic"

    def letter(self, m: int) -> int:
        if m < len(self.prefix):
            return self.prefix[m]
        return self.period[(m - len(self.prefix)) % len(self.period)]


@dataclass(frozen=True)
class SymbolicPoint:
    """A boundary point given symbolically by an infinite reduced itinerary.

    ``letter(m)`` returns the m-th letter.  ``depth_liminf`` and
    ``depth_limsup`` describe the level sequence of the itinerary exactly
    (``math.inf`` allowed); ``schedule`` names the construction.
    """

    letter: Callable[[int], int]
    schedule: str
    depth_liminf: float
    depth_limsup: float
    tail: Optional[PeriodicTail] = None
    meta: dict = field(default_factory=dict, compare=False)

    def itinerary(self, n: int) -> tuple:
        return tuple(self.letter(m) for m in range(n))

    def interval(self, system: SchottkySystem, n: int, levels=None) -> Arc:
        """The nested arc cut out by the first ``n`` letters (``n >= 1``)."""
        word = self.itinerary(n)
        levels = levels_for_letters(system, word, levels)
        W = np.eye(2, dtype=complex)
        for x in word[:-1]:
            W = W @ system.letter_map(x, levels).matrix
            W = W / np.abs(W).max()
        arc = system.letter_arc(word[-1], levels)
        a0 = cmath.phase(_apply(W, _e(arc.start))) % TWO_PI
        a1 = cmath.phase(_apply(W, _e(arc.end))) % TWO_PI
        return Arc.between(a0, a1)

    def approx_theta(self, system: SchottkySystem, n: int, levels=None) -> float:
        return self.interval(system, n, levels).midpoint


def level_needed(system: SchottkySystem, x: int) -> Optional[int]:
    """Smallest level horizon containing generator ``|x|``; ``None`` for explicit systems."""
    if system._source is None:
        return None
    n, count = 0, 0
    while count < abs(x):
        n += 1
        if system._max_level is not None and n > system._max_level:
            raise InvalidParameter(f"letter {x} is beyond the last level")
        count += len(system._level(n))
    return n


def levels_for_letters(system: SchottkySystem, word, levels=None) -> Optional[int]:
    """A level horizon large enough for every letter of ``word``."""
    if system._source is None:
        return levels
    need = max((level_needed(system, x) for x in word), default=1)
    return max(system.resolve_levels(levels), need)


def periodic_point(system: SchottkySystem, prefix, period, levels=None) -> SymbolicPoint:
    """The attracting fixed point of ``prefix . period . prefix^-1`` as a symbolic point."""
    prefix, period = tuple(prefix), tuple(period)
    if not period:
        raise InvalidParameter("period must be non-empty")
    word = prefix + period
    for a, b in zip(word, word[1:] + (period[0],)):
        if a == -b:
            raise InvalidParameter("itinerary must be reduced")
    h = system.word_map(period, levels)
    kind = classify(DiskAutomorphism.from_moebius(h)).value
    tail = PeriodicTail(prefix, period, kind)
    lv = [system.letter_level(x, levels) for x in period]
    if kind == "parabolic":
        lo = hi = math.inf
    else:
        lo, hi = float(min(lv)), float(max(lv))
    return SymbolicPoint(tail.letter, "eventually_periodic", lo, hi, tail)


@dataclass(frozen=True)
class CodingStream:
    """Itinerary of a boundary point through nested generator arcs.

    ``stop`` says why coding ended: ``"gap"`` (the point left every arc and
    ``terminal`` names the gap), ``"resolution"`` (the nested arc shrank
    below the arc tolerance), ``"max_letters"``, ``"cusp"`` (the point is a
    translate of a parabolic fixed point) or ``"symbolic"``.
    ``tail`` is set when the itinerary is recognised as eventually periodic.
    """

    theta: float
    itinerary: tuple
    terminal: Optional[GapRef]
    stop: str
    tail: Optional[PeriodicTail] = None
    symbolic: Optional[SymbolicPoint] = None
    levels: Optional[int] = None

    @property
    def terminated(self) -> bool:
        return self.terminal is not None

    def to_json(self):
        return {
            "theta": self.theta,
            "itinerary": list(self.itinerary),
            "terminal": self.terminal.to_json() if self.terminal else None,
            "stop": self.stop,
            "tail": None if self.tail is None else {
                "prefix": list(self.tail.prefix), "period": list(self.tail.period), "kind": self.tail.kind,
            },
        }


def _find_gap(system, q: float, levels):
    for k, g in enumerate(system.depth0_gaps(levels)):
        if g.length > 0 and g.contains(q, tol=1e-9):
            return k, g
    return None, None


def _detect_tail(system, itinerary, theta, levels):
    n = len(itinerary)
    for total in range(1, n // 2 + 1):
        for period_len in range(1, min(8, total) + 1):
            k = total - period_len
            tail = itinerary[k:]
            if len(tail) < 2 * period_len:
                continue
            if any(tail[i] != tail[i % period_len] for i in range(len(tail))):
                continue
            prefix, period = itinerary[:k], itinerary[k:k + period_len]
            h = system.word_map(prefix + period + tuple(-x for x in reversed(prefix)), levels)
            h = DiskAutomorphism.from_moebius(h)
            tag = classify(h)
            if tag is MapClass.HYPERBOLIC:
                fix = attracting_repelling(h)[0]
            elif tag is MapClass.PARABOLIC:
                fix = fixed_points(h).points[0]
            else:
                continue
            if angle_gap(cmath.phase(fix) % TWO_PI, theta) <= SNAP_TOL:
                return PeriodicTail(prefix, period, tag.value)
            return None
    return None


def code_boundary_point(system: SchottkySystem, p, max_letters: int = 64, levels=None,
                        eps: float = EPS_ARC, snap: bool = True) -> CodingStream:
    """Itinerary of ``p`` (an angle or a :class:`SymbolicPoint`) through nested generator arcs."""
    max_letters = check_int(max_letters, "max_letters")
    levels = system.resolve_levels(levels)
    if isinstance(p, SymbolicPoint):
        it = p.itinerary(max_letters)
        levels = levels_for_letters(system, it, levels)
        theta = p.approx_theta(system, min(max_letters, 8), levels) if max_letters else 0.0
        return CodingStream(theta, it, None, "symbolic", p.tail, p, levels)
    theta = check_angle(p)
    letters = system.letters(levels)
    if not letters:
        return CodingStream(theta, (), GapRef((), 0, Arc(0.0, TWO_PI)), "gap", levels=levels)
    arc_data = {x: system.letter_arc(x, levels) for x in letters}
    start = np.array([_e(arc_data[x].start) for x in letters])
    end = np.array([_e(arc_data[x].end) for x in letters])
    bounds = np.array([arc_data[x].length for x in letters])
    letter_arr = np.array(letters)
    mats = {x: system.letter_map(x, levels).matrix for x in letters}
    W = np.eye(2, dtype=complex)
    itinerary: list = []
    stop = "max_letters"
    terminal = None
    for m in range(max_letters):
        mask = np.ones(len(letters), dtype=bool) if not itinerary else letter_arr != -itinerary[-1]
        a, b, c, d = W[0, 0], W[0, 1], W[1, 0], W[1, 1]
        ps = (a * start[mask] + b) / (c * start[mask] + d)
        qs = (a * end[mask] + b) / (c * end[mask] + d)
        s_ang = np.angle(ps) % TWO_PI
        e_ang = np.angle(qs) % TWO_PI
        length = (e_ang - s_ang) % TWO_PI
        chord = 2.0 * np.arcsin(np.minimum(np.abs(qs - ps) / 2.0, 1.0))
        length = np.where(length > bounds[mask] + 1e-9, chord, length)
        off = (theta - s_ang) % TWO_PI
        inside = off <= length
        hits = np.flatnonzero(inside)
        cand = letter_arr[mask]
        if len(hits) == 1 and length[hits[0]] < 4.0 * eps:
            itinerary.append(int(cand[hits[0]]))
            stop = "resolution"
            break
        near_start = np.minimum(off, TWO_PI - off)
        d_end = np.abs((theta - e_ang + math.pi) % TWO_PI - math.pi)
        close = np.flatnonzero((near_start <= eps) | (d_end <= eps))
        if len(close):
            near = {int(cand[k]) for k in close}
            pair = [x for x in near if x > 0 and -x in near]
            if len(near) == 2 and pair and system.generators(levels)[pair[0] - 1].kind == "parabolic":
                # the shared vertex of a parabolic pair is that generator's cusp
                tail = PeriodicTail(tuple(itinerary), (pair[0],), "parabolic")
                return CodingStream(theta, tuple(itinerary), None, "cusp", tail, None, levels)
            k = close[0]
            ep = float(s_ang[k] if near_start[k] <= eps else e_ang[k])
            raise AmbiguousAtTolerance(theta, ep, m)
        if len(hits) == 0:
            q = cmath.phase(_apply_inverse(W, _e(theta))) % TWO_PI
            idx, gap = _find_gap(system, q, levels)
            word = tuple(itinerary)
            if gap is None:
                arc = Arc(theta, 0.0)
            else:
                inv = W
                g0 = cmath.phase(_apply(inv, _e(gap.start))) % TWO_PI
                g1 = cmath.phase(_apply(inv, _e(gap.end))) % TWO_PI
                arc = Arc.between(g0, g1)
            terminal = GapRef(word, idx, arc)
            stop = "gap"
            break
        x = int(cand[hits[0]])
        itinerary.append(x)
        W = W @ mats[x]
        W = W / np.abs(W).max()
    tail = None
    if snap and stop in ("resolution", "max_letters") and len(itinerary) >= 2:
        tail = _detect_tail(system, tuple(itinerary), theta, levels)
    return CodingStream(theta, tuple(itinerary), terminal, stop, tail, None, levels)


def _apply(W, z):
    return (W[0, 0] * z + W[0, 1]) / (W[1, 0] * z + W[1, 1])


def _apply_inverse(W, z):
    return (W[1, 1] * z - W[0, 1]) / (-W[1, 0] * z + W[0, 0])


# --------------------------------------------------------------------------- NT estimate


def nt_hit_estimate(system: SchottkySystem, p, L: int, r: float, rho: float = 0.5, levels=None) -> bool:
    """One-sided evidence that ``p`` is a non-tangential limit point.

    True when some orbit point ``w(basepoint)`` with ``1 <= |w| <= L`` lies in
    the hyperbolic Stolz angle of aperture ``r`` at ``p``, truncated to the
    Euclidean window ``|e^{i p} - z| < rho`` so that only points near the
    boundary count.
    """
    theta = check_angle(p)
    r = check_positive(r, "r")
    rho = check_positive(rho, "rho")
    words, pts = orbit_with_words(system, L, levels)
    pts = pts[1:]
    if pts.size == 0:
        return False
    near = np.abs(_e(theta) - pts) < rho
    if not np.any(near):
        return False
    return bool(np.any(distance_to_radius_array(theta, pts[near]) < r))


def fixed_point_angles_of_words(system: SchottkySystem, L: int, levels=None):
    """Boundary fixed points of every non-trivial reduced word of length <= L."""
    out = []
    for w in reduced_words(system, L, levels)[1:]:
        h = DiskAutomorphism.from_moebius(system.word_map(w, levels))
        for q in fixed_points(h).points:
            out.append((w, cmath.phase(q) % TWO_PI))
    return out


# --------------------------------------------------------------------------- boundary components


@dataclass(frozen=True)
class GapCycle:
    """Depth-0 gaps glued into one boundary component of the quotient.

    ``gaps`` lists gap indices in walking order and ``letters`` the letter
    crossed after each gap; ``peripheral`` is the product of those letters,
    the deck transformation that walks once around the component.
    """

    index: int
    gaps: tuple
    letters: tuple
    degenerate: bool

    @property
    def peripheral(self) -> tuple:
        return self.letters


def gap_cycles(system: SchottkySystem, levels=None):
    """Boundary components of the quotient as cycles of depth-0 gaps.

    Gap vertices are identified by the side pairings: ``S.end ~ T.start``
    and ``S.start ~ T.end``.  A zero-length gap at a parabolic fixed point
    forms its own cycle (a puncture).
    """
    gaps = system.depth0_gaps(levels)
    arcs = system.depth0_arcs(levels)
    if not arcs:
        return [GapCycle(0, (0,), (), False)]
    starts = np.array([g.start for g in gaps])

    def gap_starting_at(theta):
        d = np.abs((starts - theta + math.pi) % TWO_PI - math.pi)
        k = int(np.argmin(d))
        if d[k] > 1e-7:
            raise DomainError(f"no gap starts at {theta:.12g}; pairing is not exact")
        return k

    def arc_starting_at(theta):
        best, best_d = None, math.inf
        for x, a in arcs:
            d = angle_gap(a.start, theta)
            if d < best_d:
                best, best_d = x, d
        return best

    nxt, via = {}, {}
    for k, g in enumerate(gaps):
        x = arc_starting_at(g.end)
        partner = system.letter_arc(-x, levels)
        nxt[k] = gap_starting_at(partner.end)
        via[k] = x
    seen, out = set(), []
    for k in range(len(gaps)):
        if k in seen:
            continue
        cyc, lets = [], []
        j = k
        while j not in seen:
            seen.add(j)
            cyc.append(j)
            lets.append(via[j])
            j = nxt[j]
        degenerate = all(gaps[i].length <= EPS_ARC for i in cyc)
        out.append(GapCycle(len(out), tuple(cyc), tuple(lets), degenerate))
    return out


def cycle_of_gap(system: SchottkySystem, gap_index: int, levels=None) -> GapCycle:
    for c in gap_cycles(system, levels):
        if gap_index in c.gaps:
            return c
    raise InvalidParameter(f"unknown gap index {gap_index}")


def component_carrier(system: SchottkySystem, cycle: GapCycle, levels=None):
    """The maximal arc of the ordinary set containing the cycle's first gap.

    Returns ``("full", None)`` for the trivial group, ``("point", theta)`` for a
    puncture, and ``("open_arc", Arc)`` bounded by the fixed points of the
    peripheral element otherwise.
    """
    if not cycle.letters:
        return "full", None
    first = system.depth0_gaps(levels)[cycle.gaps[0]]
    p = DiskAutomorphism.from_moebius(system.word_map(cycle.letters, levels))
    tag = classify(p)
    if cycle.degenerate:
        return "point", first.start
    if tag is MapClass.PARABOLIC:
        # the whole circle minus the cusp, e.g. the outer boundary of a punctured disk
        cusp = cmath.phase(fixed_points(p).points[0]) % TWO_PI
        return "open_arc", Arc(cusp, TWO_PI)
    att, rep = attracting_repelling(p)
    a = cmath.phase(rep) % TWO_PI
    b = cmath.phase(att) % TWO_PI
    return "open_arc", Arc.between(a, b)
