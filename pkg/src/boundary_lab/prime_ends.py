"""Admissible null-chains, rectified neighbourhoods and the prime-end trichotomy.

Prime ends are classified from the coding of their base point:

* the coding ends in a gap translate ``w(G)``: the radius eventually runs
  in a region where the covering is univalent, so the prime end is regular
  and its impression sits inside the alpha-image carrying that gap;
* the coding ends at a cusp or with a parabolic period: the chain is made
  of horocycles and the impression is the puncture;
* anything else that is escaping is singular and its impression is the
  whole boundary component it is associated with.

Every class comes with two chain builders that share no parameters, so the
tests can check that impressions do not depend on the chain.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ._validation import TWO_PI, check_int
from .arcs import Arc, ccw_distance, gaps_of
from .deck_group import (
    CodingStream,
    GapCycle,
    SchottkySystem,
    SymbolicPoint,
    _layers,
    code_boundary_point,
    component_carrier,
    cycle_of_gap,
    gap_cycles,
    limit_set_cover,
    reduced_words,
)
from .errors import InvalidParameter, NotEscaping, Unsupported
from .exhaustion import (
    DEFAULT_HORIZON,
    BoundaryAddress,
    RadialType,
    _cusp_cycle_address,
    _transport_arc,
    associated_addresses,
    radial_type,
)
from .hyperbolic import Crosscut, NullChain, is_null_chain_prefix


class PrimeEndClass(enum.Enum):
    REGULAR = "regular"
    SINGULAR = "singular"
    PARABOLIC = "parabolic"


@dataclass(frozen=True)
class AdmissibleCrosscut:
    """A crosscut together with the reason it is admissible.

    ``witness`` is ``"non_contractible"`` (``word`` is the group element
    whose translate of a fundamental curve or horocycle it is) or
    ``"simply_connected"`` (``word`` and ``gap`` name the gap translate
    ``word(G_gap)`` on which the covering is univalent).
    """

    crosscut: Crosscut
    witness: str
    word: tuple = ()
    gap: Optional[int] = None

    def to_json(self):
        out = {"crosscut": self.crosscut.to_json(), "witness": self.witness, "word": list(self.word)}
        if self.gap is not None:
            out["gap"] = self.gap
        return out


@dataclass(frozen=True)
class AdmissibleChain:
    kind: PrimeEndClass
    links: tuple
    levels: Optional[int] = None

    @property
    def null_chain(self) -> NullChain:
        return NullChain([c.crosscut for c in self.links])

    def is_null_chain(self) -> bool:
        return is_null_chain_prefix(self.null_chain, len(self.links))


@dataclass(frozen=True)
class Impression:
    """``proper_subset`` carries alpha-image data, the others an address."""

    kind: str
    address: BoundaryAddress
    arc: Optional[Arc] = None
    theta: Optional[float] = None

    def same_as(self, other: "Impression", tol: float = 1e-7) -> bool:
        if self.kind != other.kind or self.address != other.address:
            return False
        if self.arc is not None or other.arc is not None:
            if self.arc is None or other.arc is None:
                return False
            return (abs(((self.arc.start - other.arc.start) + math.pi) % TWO_PI - math.pi) <= tol
                    and abs(self.arc.length - other.arc.length) <= tol)
        if self.theta is not None or other.theta is not None:
            return abs(((self.theta - other.theta) + math.pi) % TWO_PI - math.pi) <= tol
        return True

    def to_json(self):
        out = {"kind": self.kind, "address": self.address.to_json()}
        if self.arc is not None:
            out["arc"] = self.arc.to_json()
        if self.theta is not None:
            out["theta"] = self.theta
        return out


@dataclass(frozen=True)
class PrimeEnd:
    theta: float
    cls: PrimeEndClass
    chain: AdmissibleChain
    impression: Impression
    certificate: dict = field(default_factory=dict, compare=False)

    def to_json(self):
        return {
            "theta": self.theta,
            "class": self.cls.value,
            "impression": self.impression.to_json(),
            "chain": {"kind": self.chain.kind.value, "levels": self.chain.levels,
                      "links": [c.to_json() for c in self.chain.links]},
            "certificate": self.certificate,
        }


# --------------------------------------------------------------------------- classification


def _coding(system, p, horizon, levels):
    return p if isinstance(p, CodingStream) else code_boundary_point(system, p, horizon, levels)


def _class_of(coding: CodingStream) -> PrimeEndClass:
    if coding.terminated:
        return PrimeEndClass.REGULAR
    if coding.tail is not None and coding.tail.kind == "parabolic":
        return PrimeEndClass.PARABOLIC
    return PrimeEndClass.SINGULAR


def _escaping_coding(system, p, horizon, levels):
    coding = _coding(system, p, horizon, levels)
    rt = radial_type(system, coding, horizon, levels)
    if rt is not RadialType.ESCAPING:
        raise NotEscaping(f"point is of {rt.value} type, prime ends need an escaping point")
    return coding


def classify_prime_end(system: SchottkySystem, p, horizon: int = DEFAULT_HORIZON, levels=None,
                       variant: int = 0, chain_length: int = 6) -> PrimeEnd:
    """The prime end at an escaping boundary point, with an admissible chain and its impression."""
    coding = _escaping_coding(system, p, horizon, levels)
    cls = _class_of(coding)
    chain = build_chain(system, coding, variant, chain_length)
    imp = impression_from_chain(system, chain)
    cert = {"stop": coding.stop, "itinerary": list(coding.itinerary[:16])}
    if coding.terminal is not None:
        cert["gap"] = coding.terminal.to_json()
    return PrimeEnd(coding.theta, cls, chain, imp, cert)


def impression(system: SchottkySystem, p, horizon: int = DEFAULT_HORIZON, levels=None, variant: int = 0) -> Impression:
    return classify_prime_end(system, p, horizon, levels, variant).impression


# --------------------------------------------------------------------------- chains


def build_chain(system: SchottkySystem, coding: CodingStream, variant: int = 0, length: int = 6) -> AdmissibleChain:
    """An admissible null-chain at the coded point; ``variant`` 0 and 1 are built independently."""
    length = check_int(length, "length", minimum=1)
    cls = _class_of(coding)
    if cls is PrimeEndClass.REGULAR:
        return _regular_chain(coding, variant, length)
    if cls is PrimeEndClass.PARABOLIC:
        return _parabolic_chain(system, coding, variant, length)
    return _singular_chain(system, coding, variant, length)


_REGULAR_SHAPES = {0: (0.5, 1.0, 1.0), 1: (0.3, 0.7, 0.4)}
_HORO_SHAPES = {0: (0.5, 1.0), 1: (0.3, 0.8)}


def _regular_chain(coding, variant, length):
    rate, left, right = _REGULAR_SHAPES[variant % 2]
    ref = coding.terminal
    theta = coding.theta
    if ref.arc.length >= TWO_PI:
        dl = dr = math.pi / 2
    else:
        dl = ccw_distance(ref.arc.start, theta)
        dr = ccw_distance(theta, ref.arc.end)
    links = []
    for n in range(1, length + 1):
        s = rate ** n
        c = Crosscut.geodesic(theta - s * left * dl, theta + s * right * dr)
        links.append(AdmissibleCrosscut(c, "simply_connected", ref.word, ref.gap))
    return AdmissibleChain(PrimeEndClass.REGULAR, tuple(links), coding.levels)


def _parabolic_chain(system, coding, variant, length):
    rate, scale = _HORO_SHAPES[variant % 2]
    tail = coding.tail
    prefix = tail.prefix
    core = prefix + tail.period + tuple(-x for x in reversed(prefix))
    theta = coding.theta
    links = [AdmissibleCrosscut(Crosscut.horocycle(theta, scale * rate ** n), "non_contractible", core)
             for n in range(1, length + 1)]
    return AdmissibleChain(PrimeEndClass.PARABOLIC, tuple(links), coding.levels)


def _singular_chain(system, coding, variant, length):
    sp = coding.symbolic
    if sp is None:
        raise Unsupported("singular prime ends need a symbolically specified point")
    step = 1 if variant % 2 == 0 else 2
    links = []
    m = 1 if step == 1 else 2
    prev = math.inf
    while len(links) < length:
        arc = sp.interval(system, m)
        if arc.length < 1e-12 or arc.length >= prev:
            break  # below what a float crosscut can resolve
        prev = arc.length
        word = sp.itinerary(m)
        links.append(AdmissibleCrosscut(Crosscut.over_arc(arc), "non_contractible", word))
        m += step
    if not links:
        raise Unsupported("first fundamental crosscut is below resolution")
    return AdmissibleChain(PrimeEndClass.SINGULAR, tuple(links), coding.levels)


# --------------------------------------------------------------------------- impressions


def _rotated(cycle: GapCycle, gap: int) -> GapCycle:
    i = cycle.gaps.index(gap)
    return GapCycle(cycle.index, cycle.gaps[i:] + cycle.gaps[:i], cycle.letters[i:] + cycle.letters[:i],
                    cycle.degenerate)


def regular_carrier(system: SchottkySystem, word, gap: int, levels=None):
    """The alpha-image arc containing the gap translate ``word(G_gap)``."""
    cycle = _rotated(cycle_of_gap(system, gap, levels), gap)
    kind, data = component_carrier(system, cycle, levels)
    address = BoundaryAddress((cycle.index + 1,))
    if kind == "full":
        return address, Arc(0.0, TWO_PI)
    return address, _transport_arc(system.word_map(word, levels), data)


def canonical_address(a: BoundaryAddress) -> BoundaryAddress:
    """Drop trailing first-child digits: addresses continued along first children name one component."""
    d = a.digits
    while len(d) > 1 and d[-1] == 1:
        d = d[:-1]
    return BoundaryAddress(d)


def impression_from_chain(system: SchottkySystem, chain: AdmissibleChain) -> Impression:
    """Recover the impression from the innermost link of an admissible chain."""
    last = chain.links[-1]
    levels = chain.levels
    if chain.kind is PrimeEndClass.REGULAR:
        mid = last.crosscut.arc.midpoint
        coding = code_boundary_point(system, mid, DEFAULT_HORIZON, levels)
        if coding.terminal is None:
            raise InvalidParameter("innermost crosscut does not sit over a gap translate")
        ref = coding.terminal
        address, arc = regular_carrier(system, ref.word, ref.gap, levels)
        return Impression("proper_subset", address, arc=arc)
    if chain.kind is PrimeEndClass.PARABOLIC:
        theta = last.crosscut.endpoints[0]
        core = last.word
        k = (len(core) - 1) // 2
        letter = core[k]
        return Impression("puncture_point", _cusp_cycle_address(system, letter, levels), theta=theta)
    word = last.word
    coding = CodingStream(last.crosscut.arc.midpoint, word, None, "symbolic", None, None,
                          _levels_for(system, word, levels))
    assoc = associated_addresses(system, coding, len(word), coding.levels)
    found = {canonical_address(a) for a in assoc.addresses} or {canonical_address(a) for a in assoc.prefixes}
    if len(found) != 1:
        raise Unsupported(f"chain is associated with {len(found)} components")
    return Impression("whole_component", found.pop())


def _levels_for(system, word, levels):
    from .deck_group import levels_for_letters

    return levels_for_letters(system, word, levels)


# --------------------------------------------------------------------------- rectification


@dataclass(frozen=True)
class RectifiedNeighbourhood:
    """The base crosscut with its orbit translates removed.

    ``excluded_arcs`` are the boundary arcs of the translates ``w(C)`` with
    ``1 <= |w| <= L``; ``container`` is the innermost of ``C`` and its
    translates whose arc contains the target; ``remainder`` is the piece of
    ``container`` left after removing the translates inside it that holds
    the target.
    """

    base: Crosscut
    L: int
    excluded_arcs: tuple
    excluded_words: tuple
    container: Arc
    remainder: Arc

    def to_json(self):
        return {
            "base": self.base.to_json(),
            "L": self.L,
            "excluded": [a.to_json() for a in self.excluded_arcs],
            "container": self.container.to_json(),
            "remainder": self.remainder.to_json(),
        }


def _translate_arcs(system, arc: Arc, L, levels):
    words, arcs = [], []
    for ws, stack in _layers(system, L, levels):
        if not ws or not ws[0]:
            continue
        p = (stack[:, 0, 0] * cmath.exp(1j * arc.start) + stack[:, 0, 1]) / (
            stack[:, 1, 0] * cmath.exp(1j * arc.start) + stack[:, 1, 1])
        q = (stack[:, 0, 0] * cmath.exp(1j * arc.end) + stack[:, 0, 1]) / (
            stack[:, 1, 0] * cmath.exp(1j * arc.end) + stack[:, 1, 1])
        a0 = np.angle(p) % TWO_PI
        a1 = np.angle(q) % TWO_PI
        for w, s, e in zip(ws, a0, a1):
            words.append(w)
            arcs.append(Arc.between(float(s), float(e)))
    return words, arcs


def rectify(system: SchottkySystem, C, L: int, target: float, levels=None) -> RectifiedNeighbourhood:
    """Remove every translate ``w(C)``, ``1 <= |w| <= L``, and keep the piece holding ``target``."""
    base = C.crosscut if isinstance(C, AdmissibleCrosscut) else C
    L = check_int(L, "L")
    arc = base.arc
    if base.degenerate or not arc.interior_contains(target):
        raise InvalidParameter("the crosscut does not separate the target from the basepoint")
    words, arcs = _translate_arcs(system, arc, L, levels)
    container = arc
    for a in arcs:
        if a.interior_contains(target) and a.length < container.length:
            container = a
    # the region of D minus the translates that touches the circle next to
    # the target meets it between the nearest crosscut endpoints on each side
    x = ccw_distance(container.start, target)
    lo, hi = 0.0, container.length
    for a in arcs:
        for e in (a.start, a.end):
            u = ccw_distance(container.start, e)
            if u < x:
                lo = max(lo, u)
            elif x < u < container.length:
                hi = min(hi, u)
    remainder = Arc(container.start + lo, hi - lo)
    return RectifiedNeighbourhood(base, L, tuple(arcs), tuple(words), container, remainder)


# --------------------------------------------------------------------------- true crosscuts


class TrueCrosscutVerdict(enum.Enum):
    CANTOR_LIMIT_SET = "cantor_limit_set"
    FULL_CIRCLE = "full_circle"


@dataclass(frozen=True)
class TrueCrosscut:
    """A gap-arc certificate: the geodesic over a gap whose endpoints lie on one boundary component."""

    gap: Arc
    level: Optional[int]
    crosscut: Crosscut
    component: Optional[int]

    def to_json(self):
        return {"gap": self.gap.to_json(), "level": self.level, "crosscut": self.crosscut.to_json(),
                "component": self.component}


@dataclass(frozen=True)
class TrueCrosscutReport:
    verdict: TrueCrosscutVerdict
    certificate: Optional[TrueCrosscut]
    depth: int
    note: str = ""

    def to_json(self):
        return {"verdict": self.verdict.value, "depth": self.depth, "note": self.note,
                "certificate": None if self.certificate is None else self.certificate.to_json()}


def _positive_gaps(system, levels):
    return [(k, g) for k, g in enumerate(system.depth0_gaps(levels)) if g.length > 1e-12]


def _arcs_through(system, L):
    out = []
    for n in range(1, L + 1):
        for s, t in system.level_arcs(n):
            out.extend((s, t))
    return out


def detect_true_crosscut(system: SchottkySystem, depth: int = 12) -> TrueCrosscutReport:
    """Search for a gap of positive length that later generators never enter.

    For explicit systems any gap of positive length is final.  For level
    sources a gap of the level-``L`` system counts only when no arc of level
    ``L + 1`` meets it; the search gives up after ``depth`` levels and the
    full-circle verdict is one-sided.
    """
    depth = check_int(depth, "depth", minimum=1)
    if system._source is None:
        gaps = _positive_gaps(system, None)
        if not gaps:
            return TrueCrosscutReport(TrueCrosscutVerdict.FULL_CIRCLE, None, depth, f"no gap found up to depth {depth}")
        k, g = gaps[0]
        note = "" if system.generators() else "limit set is empty"
        comp = cycle_of_gap(system, k).index if system.generators() else 0
        cut = Crosscut.over_arc(g) if g.length < TWO_PI else Crosscut.geodesic(0.0, math.pi)
        return TrueCrosscutReport(TrueCrosscutVerdict.CANTOR_LIMIT_SET, TrueCrosscut(g, None, cut, comp), depth, note)
    for L in range(1, depth + 1):
        nxt = [a for pair in system.level_arcs(L + 1) for a in pair]
        gaps = [g for g in gaps_of(_arcs_through(system, L)) if g.length > 1e-15]
        for g in gaps:
            if not any(g.intersects(a) for a in nxt):
                cut = Crosscut.over_arc(g)
                return TrueCrosscutReport(TrueCrosscutVerdict.CANTOR_LIMIT_SET, TrueCrosscut(g, L, cut, None), depth)
    return TrueCrosscutReport(TrueCrosscutVerdict.FULL_CIRCLE, None, depth, f"no gap found up to depth {depth}")


# --------------------------------------------------------------------------- quotient count


@dataclass(frozen=True)
class QuotientCount:
    count: Optional[int]
    classes: tuple
    representatives: tuple
    horizon: int
    exact: bool = True
    per_level: tuple = ()

    def to_json(self):
        return {"count": self.count, "classes": [list(c) for c in self.classes],
                "representatives": list(self.representatives), "horizon": self.horizon,
                "exact": self.exact, "per_level": list(self.per_level)}


def _orbit_classes(system, L, levels):
    gaps = system.depth0_gaps(levels)
    parent = list(range(len(gaps)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    ends = np.array([[cmath.exp(1j * g.start), cmath.exp(1j * g.end)] for g in gaps])
    for w in reduced_words(system, L, levels)[1:]:
        m = system.word_map(w, levels)
        for j, g in enumerate(gaps):
            img = [complex(m(e)) for e in ends[j]]
            for k in range(len(gaps)):
                # adjacent along the boundary: the image ends where gap k starts, or starts where it ends
                if abs(img[1] - ends[k][0]) < 1e-9 or abs(img[0] - ends[k][1]) < 1e-9:
                    parent[find(j)] = find(k)
    classes = {}
    for i in range(len(gaps)):
        classes.setdefault(find(i), []).append(i)
    return sorted(tuple(c) for c in classes.values())


def prime_end_quotient_count(system: SchottkySystem, horizon: int = 2, levels=None) -> QuotientCount:
    """Gamma-orbit classes of depth-0 gaps, merged along shared vertices of translates."""
    horizon = check_int(horizon, "horizon", minimum=1)
    if not system.is_finite:
        per = tuple(len(gap_cycles(system, n)) for n in range(1, (levels or system.default_levels) + 1))
        return QuotientCount(None, (), (), horizon, exact=False, per_level=per)
    if not system.generators(levels):
        return QuotientCount(1, ((0,),), (0,), horizon)
    classes = _orbit_classes(system, horizon, levels)
    return QuotientCount(len(classes), tuple(classes), tuple(c[0] for c in classes), horizon)


def cover_depth_excluding(system: SchottkySystem, theta: float, max_depth: int = 8, levels=None) -> Optional[int]:
    """The first cover depth whose arcs miss ``theta``, or ``None`` up to ``max_depth``."""
    for L in range(max_depth + 1):
        if not limit_set_cover(system, L, levels).contains(theta):
            return L
    return None


def sample_chains_agree(system: SchottkySystem, p, horizon: int = DEFAULT_HORIZON, levels=None) -> bool:
    """Whether the two independent chain builders give the same impression at ``p``."""
    a = classify_prime_end(system, p, horizon, levels, variant=0)
    b = classify_prime_end(system, p, horizon, levels, variant=1)
    return a.cls == b.cls and a.impression.same_as(b.impression)


__all__: Sequence[str] = (
    "AdmissibleChain",
    "AdmissibleCrosscut",
    "Impression",
    "PrimeEnd",
    "PrimeEndClass",
    "QuotientCount",
    "RectifiedNeighbourhood",
    "TrueCrosscut",
    "TrueCrosscutReport",
    "TrueCrosscutVerdict",
    "build_chain",
    "canonical_address",
    "classify_prime_end",
    "cover_depth_excluding",
    "detect_true_crosscut",
    "impression",
    "impression_from_chain",
    "prime_end_quotient_count",
    "rectify",
    "regular_carrier",
    "sample_chains_agree",
)
