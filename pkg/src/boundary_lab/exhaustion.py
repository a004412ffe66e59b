"""Depth sequences, radial types, alpha-images and boundary addresses.

The exhaustion is read off the generator levels: the domain at step ``n``
is generated by the generators of level ``n`` or less, and the m-th
fundamental crosscut at a boundary point is the m-th letter of its coding.

Three facts drive the classification here:

* a coding that ends in a gap belongs to a point beyond which only ideal
  boundary crosscuts remain, whose depths grow without bound, so gap points
  are of infinite depth (and escaping);
* a parabolic tail means degenerate crosscuts of every depth at the cusp,
  which is again infinite depth;
* a hyperbolic periodic tail repeats finitely many levels, so it is of
  finite depth (bounded type).
"""
from __future__ import annotations

import bisect
import cmath
import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from ._validation import TWO_PI, check_int, check_positive
from .arcs import Arc
from .deck_group import (
    CodingStream,
    SchottkySystem,
    SymbolicPoint,
    code_boundary_point,
    level_needed,
    levels_for_letters,
    component_carrier,
    cycle_of_gap,
    gap_cycles,
    periodic_point,
)
from .errors import InvalidParameter, Unsupported

#: Default number of itinerary letters examined.
DEFAULT_HORIZON = 64
#: Arcs shorter than this are reported as points.
EPS_POINT = 1e-12


class DepthClass(enum.Enum):
    FINITE = "finite"
    INFINITE = "infinite"
    OSCILLATING = "oscillating"
    UNDECIDED = "undecided_at_horizon"


class RadialType(enum.Enum):
    ESCAPING = "escaping"
    BOUNDED = "bounded"
    BUNGEE = "bungee"
    UNDECIDED = "undecided"


_RADIAL_OF_DEPTH = {
    DepthClass.FINITE: RadialType.BOUNDED,
    DepthClass.INFINITE: RadialType.ESCAPING,
    DepthClass.OSCILLATING: RadialType.BUNGEE,
    DepthClass.UNDECIDED: RadialType.UNDECIDED,
}


@dataclass(frozen=True)
class BoundaryAddress:
    """Digits ``s1 s2 ... sn`` naming nested complementary domains of the exhaustion."""

    digits: tuple

    def __post_init__(self):
        digits = tuple(int(s) for s in self.digits)
        if not digits or any(s < 1 for s in digits):
            raise InvalidParameter("address digits must be positive integers")
        object.__setattr__(self, "digits", digits)

    def __len__(self):
        return len(self.digits)

    def is_prefix_of(self, other: "BoundaryAddress") -> bool:
        return other.digits[: len(self.digits)] == self.digits

    def extended(self, n: int) -> "BoundaryAddress":
        """This address continued along first children up to length ``n``."""
        return BoundaryAddress(self.digits + (1,) * max(0, n - len(self.digits)))

    def to_json(self):
        return list(self.digits)

    def __str__(self):
        return ".".join(map(str, self.digits))


def _as_address(a) -> BoundaryAddress:
    return a if isinstance(a, BoundaryAddress) else BoundaryAddress(tuple(a))


# --------------------------------------------------------------------------- depth streams


@dataclass(frozen=True)
class SymbolicDepths:
    """An infinite depth sequence known exactly through its liminf and limsup."""

    term: Callable[[int], float]
    liminf: float
    limsup: float
    description: str

    def first(self, n: int) -> tuple:
        return tuple(self.term(m) for m in range(n))

    @classmethod
    def eventually_periodic(cls, prefix: Sequence[int], period: Sequence[int]):
        prefix, period = tuple(prefix), tuple(period)
        if not period:
            raise InvalidParameter("period must be non-empty")

        def term(m):
            return prefix[m] if m < len(prefix) else period[(m - len(prefix)) % len(period)]

        return cls(term, float(min(period)), float(max(period)), "eventually periodic")

    @classmethod
    def increasing(cls, prefix: Sequence[int] = (), start: int = 1):
        """``prefix`` followed by ``start, start + 1, start + 2, ...``."""
        prefix = tuple(prefix)

        def term(m):
            return prefix[m] if m < len(prefix) else start + (m - len(prefix))

        return cls(term, math.inf, math.inf, "strictly increasing")

    @classmethod
    def alternating(cls, low: int = 1, start: int = 2):
        """``low, start, low, start + 1, low, start + 2, ...``."""

        def term(m):
            return low if m % 2 == 0 else start + m // 2

        return cls(term, float(low), math.inf, "alternating")

    @classmethod
    def from_letters(cls, letter: Callable[[int], int], level_of: Callable[[int], int], liminf, limsup, description):
        return cls(lambda m: level_of(letter(m)), float(liminf), float(limsup), description)

    def relevel(self, f: Callable[[int], int]) -> "SymbolicDepths":
        """Depths after re-indexing the exhaustion by a nondecreasing unbounded ``f``."""
        lo = math.inf if math.isinf(self.liminf) else float(f(int(self.liminf)))
        hi = math.inf if math.isinf(self.limsup) else float(f(int(self.limsup)))
        return SymbolicDepths(lambda m: f(int(self.term(m))), lo, hi, self.description + " (relevelled)")


@dataclass(frozen=True)
class DepthSequence:
    """Depths of the computed fundamental crosscuts.

    ``d`` holds the levels of the itinerary letters that were computed.
    ``stream`` is the exact description of the whole infinite sequence when
    it is known (symbolic input, a terminated coding, or a recognised
    periodic tail); otherwise it is ``None`` and only the horizon is known.
    """

    d: tuple
    horizon: int
    terminated: bool
    stop: str
    stream: Optional[SymbolicDepths] = None
    diagnostics: dict = field(default_factory=dict, compare=False)

    def to_json(self):
        out = {
            "d": list(self.d),
            "horizon": self.horizon,
            "terminated": self.terminated,
            "stop": self.stop,
        }
        if self.stream is not None:
            out["stream"] = {
                "description": self.stream.description,
                "liminf": _json_num(self.stream.liminf),
                "limsup": _json_num(self.stream.limsup),
            }
        out["diagnostics"] = self.diagnostics
        return out


def _json_num(x):
    return "inf" if math.isinf(x) else x


def _coding(system, p, M, levels):
    return p if isinstance(p, CodingStream) else code_boundary_point(system, p, M, levels)


def depth_sequence(system: SchottkySystem, p, M: int = DEFAULT_HORIZON, levels=None) -> DepthSequence:
    """Levels of the fundamental crosscuts separating the basepoint from ``p``."""
    M = check_int(M, "M")
    coding = _coding(system, p, M, levels)
    lv = coding.levels

    def level_of(x):
        return system.letter_level(x, lv)

    if coding.symbolic is not None:
        d = tuple(system.letter_level(x, level_needed(system, x)) for x in coding.itinerary)
    else:
        d = tuple(level_of(x) for x in coding.itinerary)
    diag = {}
    if d:
        window = d[len(d) // 2:]
        diag = {"tail_min": min(window), "tail_max": max(window), "distinct_generators": len({abs(x) for x in coding.itinerary})}
    if coding.symbolic is not None:
        sp = coding.symbolic
        stream = SymbolicDepths.from_letters(sp.letter, lambda x: system.letter_level(x, level_needed(system, x)),
                                             sp.depth_liminf, sp.depth_limsup, sp.schedule)
        return DepthSequence(d, M, False, "symbolic", stream, diag)
    if coding.terminated:
        top = max(d) if d else 0
        stream = SymbolicDepths.increasing(d, top + 1)
        return DepthSequence(d, M, True, coding.stop, stream, diag)
    if coding.tail is not None:
        k = len(coding.tail.prefix)
        pre = d[:k]
        per = tuple(level_of(x) for x in coding.tail.period)
        if coding.tail.kind == "parabolic":
            # degenerate crosscuts at the cusp reach every depth
            stream = SymbolicDepths.increasing(pre, max(pre + per) + 1)
            stream = SymbolicDepths(stream.term, math.inf, math.inf, "parabolic tail")
        else:
            stream = SymbolicDepths.eventually_periodic(pre, per)
        return DepthSequence(d, M, False, coding.stop, stream, diag)
    return DepthSequence(d, M, False, coding.stop, None, diag)


def classify_depth(seq: Union[DepthSequence, SymbolicDepths, Sequence[int]]) -> DepthClass:
    """Finite, infinite or oscillating; undecided for a raw finite horizon."""
    if isinstance(seq, DepthSequence):
        stream = seq.stream
    elif isinstance(seq, SymbolicDepths):
        stream = seq
    else:
        stream = None  # a bare list is a raw horizon
    if stream is None:
        return DepthClass.UNDECIDED
    if math.isinf(stream.liminf):
        return DepthClass.INFINITE
    if math.isfinite(stream.limsup):
        return DepthClass.FINITE
    return DepthClass.OSCILLATING


def _parabolic_looking_tail(system, coding, levels, window=8) -> bool:
    tail = coding.itinerary[-window:]
    if len(tail) < window or len(set(tail)) != 1:
        return False
    return system.generators(levels)[abs(tail[0]) - 1].kind == "parabolic"


def radial_type(system: SchottkySystem, p, M: int = DEFAULT_HORIZON, levels=None) -> RadialType:
    """Escaping, bounded or bungee behaviour of the covering along the radius at ``p``.

    A raw angle whose coding neither ends in a gap nor snaps to a periodic
    tail is undecided for infinite-rank systems.  For finite-rank systems it
    lies in the limit set of a finitely generated group and away from the
    cusps, hence in the non-tangential limit set: bounded.
    """
    coding = _coding(system, p, M, levels)
    seq = depth_sequence(system, coding, M, levels)
    tag = _RADIAL_OF_DEPTH[classify_depth(seq)]
    if tag is RadialType.UNDECIDED and system._source is None and coding.symbolic is None:
        if not _parabolic_looking_tail(system, coding, coding.levels):
            return RadialType.BOUNDED
    return tag


# --------------------------------------------------------------------------- addresses


def _uses_addresses(system: SchottkySystem, levels) -> bool:
    return any(g.address is not None for g in system.generators(levels))


@dataclass(frozen=True)
class AssociatedAddresses:
    """Addresses whose curves keep appearing in the fundamental crosscuts.

    ``addresses`` are associated up to the horizon (their chains were still
    growing in the second half of the itinerary); ``prefixes`` are partial
    matches that stopped growing.
    """

    addresses: tuple
    prefixes: tuple

    def to_json(self):
        return {
            "addresses": [a.to_json() for a in self.addresses],
            "prefixes": [a.to_json() for a in self.prefixes],
        }


def _cycle_address(system, gap_index, levels):
    return BoundaryAddress((cycle_of_gap(system, gap_index, levels).index + 1,))


def _cusp_cycle_address(system, letter, levels):
    g = system.generators(levels)[abs(letter) - 1]
    if g.address is not None:
        return BoundaryAddress(g.address)
    gaps = system.depth0_gaps(levels)
    for k, gap in enumerate(gaps):
        if gap.length == 0.0 and abs(((gap.start - g.source.end) + math.pi) % TWO_PI - math.pi) < 1e-9:
            return _cycle_address(system, k, levels)
    raise InvalidParameter("cusp of the generator is not a vertex gap")


def associated_addresses(system: SchottkySystem, p, M: int = DEFAULT_HORIZON, levels=None) -> AssociatedAddresses:
    """Boundary addresses associated to ``p`` up to the horizon."""
    coding = _coding(system, p, M, levels)
    lv = coding.levels
    if coding.terminated:
        return AssociatedAddresses((_cycle_address(system, coding.terminal.gap, lv),), ())
    if coding.tail is not None and coding.tail.kind == "parabolic":
        return AssociatedAddresses((_cusp_cycle_address(system, coding.tail.period[0], lv),), ())
    it = coding.itinerary
    if not it or not _uses_addresses(system, levels_for_letters(system, it, lv)):
        return AssociatedAddresses((), ())
    horizon = levels_for_letters(system, it, lv)
    gens = system.generators(horizon)
    born = {}
    for m, x in enumerate(it):
        a = gens[abs(x) - 1].address
        if a is None:
            continue
        if len(a) == 1 or a[:-1] in born:
            born.setdefault(a, m)
    maximal = [a for a in born if not any(b != a and b[: len(a)] == a for b in born)]
    late = len(it) // 2
    assoc = sorted(a for a in maximal if born[a] >= late and len(a) >= 2)
    pref = sorted(a for a in maximal if a not in assoc)
    return AssociatedAddresses(tuple(BoundaryAddress(a) for a in assoc), tuple(BoundaryAddress(a) for a in pref))


# --------------------------------------------------------------------------- alpha-images


@dataclass(frozen=True)
class AlphaImage:
    """The boundary set attached to one boundary component under one lift.

    ``carrier`` is ``"point"`` (``theta`` set), ``"open_arc"`` or
    ``"closed_arc"`` (``arc`` set), or ``"circle"`` for the trivial group.
    ``lengths`` records the nested arc lengths level by level.
    """

    carrier: str
    address: BoundaryAddress
    arc: Optional[Arc] = None
    theta: Optional[float] = None
    lengths: tuple = ()

    def contains(self, theta: float, tol: float = 1e-12) -> bool:
        if self.carrier == "circle":
            return True
        if self.carrier == "point":
            return abs(((theta - self.theta) + math.pi) % TWO_PI - math.pi) <= tol
        if self.carrier == "open_arc":
            return self.arc.interior_contains(theta, tol) or (self.arc.length >= TWO_PI and
                                                             abs(((theta - self.arc.start) + math.pi) % TWO_PI - math.pi) > tol)
        return self.arc.contains(theta, tol)

    def to_json(self):
        out = {"carrier": self.carrier, "address": self.address.to_json()}
        if self.arc is not None:
            out["arc"] = self.arc.to_json()
        if self.theta is not None:
            out["theta"] = self.theta
        if self.lengths:
            out["lengths"] = list(self.lengths)
        return out


def _transport_arc(w, arc: Arc) -> Arc:
    a0 = cmath.phase(w(cmath.exp(1j * arc.start))) % TWO_PI
    if arc.length >= TWO_PI:
        return Arc(a0, TWO_PI)
    a1 = cmath.phase(w(cmath.exp(1j * arc.end))) % TWO_PI
    return Arc.between(a0, a1)


def _check_reduced(word):
    for a, b in zip(word, word[1:]):
        if a == -b:
            raise InvalidParameter("lift choices must form a reduced word (nested lifts)")


def alpha_image(system: SchottkySystem, address, lift_choices: Sequence[int] = (), horizon: int = 8,
                levels=None, eps_point: float = EPS_POINT) -> AlphaImage:
    """Alpha-image of the boundary component with the given address.

    Finite-rank systems without generator addresses number their boundary
    components by gap cycles, ``(k,)`` for the k-th cycle, and ``lift_choices``
    is the reduced group word selecting the lift.  Systems with addressed
    generators follow the address through nested target arcs; there
    ``lift_choices`` gives the positive exponent used at each digit and
    addresses shorter than ``horizon`` are continued along first children.
    """
    address = _as_address(address)
    horizon = check_int(horizon, "horizon", minimum=1)
    if not _uses_addresses(system, levels if system._source is None else max(horizon, len(address))):
        word = tuple(int(x) for x in lift_choices)
        _check_reduced(word)
        cycles = gap_cycles(system, levels)
        k = address.digits[0] - 1
        if len(address) != 1 or not 0 <= k < len(cycles):
            raise InvalidParameter(f"address {address} names no boundary component")
        kind, data = component_carrier(system, cycles[k], levels)
        w = system.word_map(word, levels)
        if kind == "full":
            return AlphaImage("circle", address)
        if kind == "point":
            return AlphaImage("point", address, theta=cmath.phase(w(cmath.exp(1j * data))) % TWO_PI)
        return AlphaImage("open_arc", address, arc=_transport_arc(w, data))
    return _addressed_alpha(system, address, tuple(lift_choices), horizon, eps_point)


#: How many levels past the address length are searched for an addressed generator.
ADDRESS_LEVEL_SLACK = 64


def _generator_with_address(system, addr):
    """Global letter and generator carrying ``addr``, or ``(None, None)``.

    Levels are scanned in order: an address of length n lives at level n in
    the bundled systems, but a relevelled exhaustion may move it deeper.
    """
    addr = tuple(addr)
    if system._source is None:
        for i, g in enumerate(system.generators()):
            if g.address == addr:
                return i + 1, g
        return None, None
    index = 0
    last = len(addr) + ADDRESS_LEVEL_SLACK
    if system._max_level is not None:
        last = min(last, system._max_level)
    for n in range(1, last + 1):
        for g in system._level(n):
            index += 1
            if g.address == addr:
                return index, g
    return None, None


def _addressed_alpha(system, address, choices, horizon, eps_point):
    _, own = _generator_with_address(system, address.digits)
    if own is None:
        raise InvalidParameter(f"no generator with address {address}")
    target = address.extended(horizon) if own.kind == "hyperbolic" else address
    digits = target.digits
    W = np.eye(2, dtype=complex)
    lengths = []
    arc = None
    for n in range(1, len(digits) + 1):
        _, g = _generator_with_address(system, digits[:n])
        if g is None:
            raise InvalidParameter(f"no generator with address {digits[:n]}")
        if g.kind == "parabolic":
            cusp = cmath.phase(_mobius(W, cmath.exp(1j * g.target.start))) % TWO_PI
            return AlphaImage("point", BoundaryAddress(digits[:n]), theta=cusp, lengths=tuple(lengths))
        arc = Arc.between(cmath.phase(_mobius(W, cmath.exp(1j * g.target.start))) % TWO_PI,
                          cmath.phase(_mobius(W, cmath.exp(1j * g.target.end))) % TWO_PI)
        lengths.append(arc.length)
        if arc.length < eps_point:
            # the nested arcs have collapsed below resolution
            return AlphaImage("point", target, theta=arc.midpoint, lengths=tuple(lengths))
        e = choices[n - 1] if n - 1 < len(choices) else 1
        if e < 1:
            raise InvalidParameter("lift exponents must be positive for the lifts to nest")
        for _ in range(int(e)):
            W = W @ g.map.matrix
            W = W / np.abs(W).max()
    return AlphaImage("closed_arc", target, arc=arc, lengths=tuple(lengths))


def _mobius(W, z):
    return (W[0, 0] * z + W[0, 1]) / (W[1, 0] * z + W[1, 1])


# --------------------------------------------------------------------------- constructions


def _branch_letters(system, address: BoundaryAddress, depth: int):
    """Letters of the chain of generators along ``address`` continued to ``depth``."""
    out = []
    digits = address.extended(depth).digits
    for n in range(len(address), depth + 1):
        letter, g = _generator_with_address(system, digits[:n])
        if g is None:
            raise Unsupported(f"address {digits[:n]} is not produced by this system")
        if g.kind != "hyperbolic":
            raise Unsupported(f"address {digits[:n]} ends at an isolated component")
        out.append(letter)
    return out


class _BlockSchedule:
    """Letters of a point built from blocks; block ``j`` is produced on demand."""

    def __init__(self, block: Callable[[int], list]):
        self._block = block
        self._letters: list = []
        self._j = 0

    def __call__(self, m: int) -> int:
        while len(self._letters) <= m:
            self._j += 1
            self._letters.extend(self._block(self._j))
        return self._letters[m]


def construct_bungee_point(system: SchottkySystem, addresses, horizon: int = 6, choices: Sequence[int] = ()):
    """A point whose fundamental crosscuts visit every given branch infinitely often.

    Block ``j`` follows branch ``addresses[(j - 1) % k]`` from its root
    through ``j`` further levels, then crosses back.  ``choices[j - 1]`` (1 or
    more, default 1) is the power of the block's first generator; different
    choice sequences give disjoint nested intervals.  With a single address
    the chain simply descends the branch (an escaping point).
    """
    addresses = [_as_address(a) for a in addresses]
    if not addresses:
        raise InvalidParameter("need at least one address")
    horizon = check_int(horizon, "horizon", minimum=1)
    choices = tuple(int(c) for c in choices)
    if any(c < 1 for c in choices):
        raise InvalidParameter("choices must be positive exponents")
    for a in addresses:
        _branch_letters(system, a, len(a))  # fails early on isolated components
    roots = [len(a) for a in addresses]

    if len(addresses) == 1:
        a = addresses[0]

        def block(j):
            head = _branch_letters(system, a, len(a) + j - 1)[-1:]
            e = choices[j - 1] if j - 1 < len(choices) else 1
            return head * e

        letter = _BlockSchedule(block)
        sp = SymbolicPoint(letter, "increasing", math.inf, math.inf,
                           meta={"addresses": [a.to_json()], "choices": list(choices)})
    else:

        def block(j):
            a = addresses[(j - 1) % len(addresses)]
            chain = _branch_letters(system, a, len(a) + j - 1)
            e = choices[j - 1] if j - 1 < len(choices) else 1
            return [chain[0]] * e + chain[1:]

        letter = _BlockSchedule(block)
        sp = SymbolicPoint(letter, "bungee", float(min(roots)), math.inf,
                           meta={"addresses": [a.to_json() for a in addresses], "choices": list(choices)})
    return sp


def bungee_interval(system: SchottkySystem, point: SymbolicPoint, n_letters: int) -> Arc:
    """Nested interval cut out by the first ``n_letters`` letters of a constructed point."""
    return point.interval(system, n_letters)


def escaping_family(system: SchottkySystem, address, count: int):
    """``count`` distinct escaping points on one branch: ``g^k`` then straight down the branch."""
    address = _as_address(address)
    count = check_int(count, "count", minimum=1)
    return [construct_bungee_point(system, [address], choices=(k,)) for k in range(1, count + 1)]


def bounded_tree(system: SchottkySystem, letters: Sequence[int], depth: int):
    """Periodic points for every word of length ``depth`` over two positive letters.

    Each is the attracting fixed point of a hyperbolic word, hence of finite
    depth: together they populate a full binary tree of bounded itineraries.
    """
    a, b = (int(x) for x in letters)
    if a <= 0 or b <= 0 or a == b:
        raise InvalidParameter("need two distinct positive letters")
    depth = check_int(depth, "depth", minimum=1)
    out = []
    for word in itertools.product((a, b), repeat=depth):
        out.append((word, periodic_point(system, (), word)))
    return out


def relevel_system(system: SchottkySystem, f: Callable[[int], int]) -> SchottkySystem:
    """The same generators with level ``n`` moved to ``f(n)`` (``f`` strictly increasing)."""
    from .deck_group import GeneratorSpec

    if system._source is None:
        gens = [GeneratorSpec(g.map, int(f(g.level)), g.source, g.target, g.kind, g.address)
                for g in system.generators()]
        return SchottkySystem(gens, basepoint=system.basepoint, name=system.name + "-relevelled")
    def level(m):
        n = 1
        while f(n) < m:
            n += 1
        if f(n) != m:
            return []
        return [GeneratorSpec(g.map, m, g.source, g.target, g.kind, g.address) for g in system._level(n)]

    max_level = None if system._max_level is None else f(system._max_level)
    return SchottkySystem(level_source=level, max_level=max_level, basepoint=system.basepoint,
                          default_levels=f(system.default_levels), name=system.name + "-relevelled")


@dataclass(frozen=True)
class PointReport:
    itinerary: tuple
    depths: DepthSequence
    depth_class: DepthClass
    radial_type: RadialType
    associated: AssociatedAddresses
    stop: str

    def to_json(self):
        return {
            "itinerary": list(self.itinerary),
            "depths": list(self.depths.d),
            "depth_sequence": self.depths.to_json(),
            "stop": self.stop,
            "depth_class": self.depth_class.value,
            "radial_type": self.radial_type.value,
            "associated_addresses": self.associated.to_json(),
        }


def classify_point(system: SchottkySystem, p, M: int = DEFAULT_HORIZON, levels=None) -> PointReport:
    """Everything the ``classify`` command reports about one boundary point."""
    coding = _coding(system, p, M, levels)
    seq = depth_sequence(system, coding, M, levels)
    return PointReport(
        coding.itinerary,
        seq,
        classify_depth(seq),
        radial_type(system, coding, M, levels),
        associated_addresses(system, coding, M, levels),
        coding.stop,
    )
