"""Ready-made pairing systems used by the examples, the CLI and the tests.

Every fixture returns a fresh :class:`SchottkySystem`.  The finite ones are
small enough to reason about by hand:

* ``trivial``: no generators (a simply connected domain).
* ``cyclic``: one hyperbolic translation along the real axis (an annulus).
* ``crossed``: two hyperbolic translations along the real and imaginary axes
  whose arcs interlace (a torus with one hole: a single boundary component).
* ``pants``: two hyperbolic generators with nested, non-interlacing arcs
  (a sphere with three holes).
* ``parabolic``: one parabolic generator (a punctured disk).

The two lazy fixtures have infinitely many levels.  ``dense`` drops a
parabolic pair into the middle of every gap at each level, so generator
arcs become dense.  ``branching`` grows two infinite branches of hyperbolic
generators, each with a parabolic side generator per level, in slots that
accumulate at one boundary point.
"""
from __future__ import annotations

import math

from ._validation import TWO_PI, check_int, check_positive
from .arcs import Arc, gaps_of
from .deck_group import GeneratorSpec, SchottkySystem
from .errors import InvalidParameter
from .moebius import conjugate, real_translation, rotation


def trivial_system() -> SchottkySystem:
    return SchottkySystem([], name="trivial")


def cyclic_system(c: float = 0.5) -> SchottkySystem:
    """The group generated by ``z -> (z + c)/(1 + c z)`` with isometric-circle arcs."""
    g = real_translation(c)
    return SchottkySystem([GeneratorSpec.from_map(g)], name="cyclic")


def crossed_system(c: float = 0.8) -> SchottkySystem:
    """Rank two: the real translation and its quarter-turn conjugate.

    The isometric arcs have half-width ``acos(c)``; they are disjoint only when
    that is below ``pi/4``, i.e. ``c > 1/sqrt(2)``.
    """
    g1 = real_translation(c)
    g2 = conjugate(rotation(math.pi / 2), g1)
    return SchottkySystem(
        [GeneratorSpec.from_map(g1), GeneratorSpec.from_map(g2)], name="crossed"
    )


def pants_system(half_width: float = math.pi / 6) -> SchottkySystem:
    """Rank two with arcs in the order S1, T1, S2, T2 around the circle."""
    half_width = check_positive(half_width, "half_width")
    if half_width >= math.pi / 4:
        raise InvalidParameter("half_width must be below pi/4 so the four arcs are disjoint")
    centers = (-math.pi / 4, math.pi / 4, 3 * math.pi / 4, 5 * math.pi / 4)
    arcs = [Arc.centered(c, half_width) for c in centers]
    return SchottkySystem(
        [GeneratorSpec.from_arcs(arcs[0], arcs[1]), GeneratorSpec.from_arcs(arcs[2], arcs[3])],
        name="pants",
    )


def parabolic_system(zeta: float = 0.0, width: float = 1.0) -> SchottkySystem:
    """One parabolic generator fixing ``e^{i zeta}`` with arcs of the given width."""
    width = check_positive(width, "width")
    src = Arc(zeta - width, width)
    tgt = Arc(zeta, width)
    return SchottkySystem([GeneratorSpec.from_arcs(src, tgt, kind="parabolic")], name="parabolic")


def dense_puncture_system(max_level=None) -> SchottkySystem:
    """Parabolic pairs inserted in the middle half of every gap, level by level."""
    # the first pair occupies the left half circle, touching at -1
    gaps_by_level = {0: [Arc(3 * math.pi / 2, math.pi)]}
    arcs_by_level = {}

    def arcs(n):
        if n in arcs_by_level:
            return arcs_by_level[n]
        if n == 1:
            pairs = [(Arc(math.pi / 2, math.pi / 2), Arc(math.pi, math.pi / 2))]
            gaps_by_level[1] = gaps_by_level[0]
        else:
            arcs(n - 1)
            pairs, new_gaps = [], []
            for g in gaps_by_level[n - 1]:
                q = g.length / 4.0
                pairs.append((Arc(g.start + q, q), Arc(g.start + 2 * q, q)))
                new_gaps.append(Arc(g.start, q))
                new_gaps.append(Arc(g.start + 3 * q, q))
            gaps_by_level[n] = new_gaps
        arcs_by_level[n] = pairs
        return pairs

    def level(n):
        return [GeneratorSpec.from_arcs(s, t, level=n, kind="parabolic") for s, t in arcs(n)]

    return SchottkySystem(level_source=level, max_level=max_level, default_levels=8, name="dense",
                          arc_source=arcs)


BRANCH_MARGIN = 0.1
_SLOT_SCALE = (TWO_PI - 2 * BRANCH_MARGIN) / (math.pi ** 2 / 6 - 1.0)


def _slot(j: int):
    """Start and width of global slot ``j``; widths ``C/(j+2)^2`` fill the circle minus a margin."""
    start = BRANCH_MARGIN + _SLOT_SCALE * sum(1.0 / (i + 2) ** 2 for i in range(j))
    return start, _SLOT_SCALE / (j + 2) ** 2


def _branch_slot_index(n: int, branches: int, b: int, side: bool) -> int:
    if n == 1:
        return b - 1
    base = branches + 2 * branches * (n - 2)
    return base + 2 * (b - 1) + (1 if side else 0)


def branch_address(b: int, n: int) -> tuple:
    """Address of the level-``n`` curve on branch ``b``."""
    return (b,) + (1,) * (n - 1)


def side_address(b: int, n: int) -> tuple:
    """Address of the parabolic side curve born at level ``n >= 2`` on branch ``b``."""
    return (b,) + (1,) * (n - 2) + (2,)


def branching_system(branches: int = 2, max_level=None) -> SchottkySystem:
    """Infinite-rank system with ``branches`` non-isolated boundary components.

    At level ``n`` each branch ``b`` gets a hyperbolic generator with address
    ``(b, 1, ..., 1)`` and, from level two on, a parabolic side generator
    with address ``(b, 1, ..., 1, 2)`` modelling an isolated puncture.  Each
    slot holds the source arc in its first 40 percent, the target arc in the
    next 40 percent, and leaves the last 20 percent as a gap.
    """
    branches = check_int(branches, "branches", minimum=1)

    def level(n):
        gens = []
        for b in range(1, branches + 1):
            kinds = [("hyperbolic", branch_address(b, n))]
            if n >= 2:
                kinds.append(("parabolic", side_address(b, n)))
            for kind, addr in kinds:
                j = _branch_slot_index(n, branches, b, kind == "parabolic")
                start, w = _slot(j)
                s = Arc(start, 0.4 * w)
                t = Arc(start + 0.4 * w, 0.4 * w)
                if kind == "hyperbolic":
                    # leave a sliver between the arcs so the pairing is hyperbolic
                    s = Arc(start, 0.38 * w)
                    t = Arc(start + 0.42 * w, 0.38 * w)
                gens.append(GeneratorSpec.from_arcs(s, t, level=n, kind=kind, address=addr))
        return gens

    return SchottkySystem(level_source=level, max_level=max_level, default_levels=6, name="branching")


def branch_letter(system: SchottkySystem, b: int, n: int, levels=None) -> int:
    """Letter of the branch generator ``(b, 1, ..., 1)`` at level ``n``."""
    target = branch_address(b, n)
    for i, g in enumerate(system.generators(levels)):
        if g.address == target:
            return i + 1
    raise InvalidParameter(f"no generator with address {target} within the level horizon")


NAMED_SYSTEMS = {
    "trivial": trivial_system,
    "cyclic": cyclic_system,
    "crossed": crossed_system,
    "pants": pants_system,
    "parabolic": parabolic_system,
    "dense": dense_puncture_system,
    "branching": branching_system,
}


def named_system(name: str) -> SchottkySystem:
    try:
        return NAMED_SYSTEMS[name]()
    except KeyError:
        raise InvalidParameter(f"unknown system {name!r}; choose from {sorted(NAMED_SYSTEMS)}") from None


def depth0_gap_total(system: SchottkySystem, levels=None) -> float:
    return math.fsum(g.length for g in gaps_of([a for _, a in system.depth0_arcs(levels)]))
