import cmath
import math

import pytest
from hypothesis import given, strategies as st

from boundary_lab.deck_group import code_boundary_point, gap_cycles
from boundary_lab.errors import InvalidParameter, Unsupported
from boundary_lab.exhaustion import (
    BoundaryAddress, DepthClass, RadialType, SymbolicDepths, alpha_image, associated_addresses, bounded_tree,
    bungee_interval, classify_depth, classify_point, construct_bungee_point, depth_sequence, escaping_family,
    radial_type, relevel_system,
)
from boundary_lab.moebius import attracting_repelling

TWO_PI = 2 * math.pi


def _attracting_angle(system, letter=1):
    return cmath.phase(attracting_repelling(system.letter_map(letter))[0]) % TWO_PI


def _block_depths(k_blocks):
    """Depths of the constructed bungee point, written out block by block."""
    out = []
    for j in range(1, k_blocks + 1):
        out.extend(range(1, j + 1))
    return out


# --------------------------------------------------------------------------- addresses


def test_address_digits_are_positive():
    with pytest.raises(InvalidParameter):
        BoundaryAddress((1, 0))
    with pytest.raises(InvalidParameter):
        BoundaryAddress(())


def test_address_prefix_and_extension():
    a = BoundaryAddress((2, 1))
    assert a.is_prefix_of(BoundaryAddress((2, 1, 3)))
    assert not a.is_prefix_of(BoundaryAddress((1, 1, 3)))
    assert a.extended(4).digits == (2, 1, 1, 1)
    assert str(a) == "2.1"


# --------------------------------------------------------------------------- depth sequences


def test_gap_point_has_empty_terminated_depths(cyclic):
    seq = depth_sequence(cyclic, math.pi / 2)
    assert seq.d == () and seq.terminated


def test_attracting_fixed_point_has_constant_depth(cyclic):
    seq = depth_sequence(cyclic, _attracting_angle(cyclic), 16)
    assert seq.d == (1,) * 16
    assert classify_depth(seq) is DepthClass.FINITE


def test_bungee_point_reproduces_its_schedule(branching):
    p = construct_bungee_point(branching, [(1,), (2,)])
    seq = depth_sequence(branching, p, 21)
    assert list(seq.d) == _block_depths(6)
    assert classify_depth(seq) is DepthClass.OSCILLATING


# --------------------------------------------------------------------------- classify_depth


def test_symbolic_streams_are_classified_exactly():
    assert classify_depth(SymbolicDepths.increasing()) is DepthClass.INFINITE
    assert classify_depth(SymbolicDepths.alternating()) is DepthClass.OSCILLATING
    assert classify_depth(SymbolicDepths.eventually_periodic((3, 4), (1, 2))) is DepthClass.FINITE


def test_alternating_stream_terms():
    assert SymbolicDepths.alternating().first(7) == (1, 2, 1, 3, 1, 4, 1)


def test_raw_list_is_undecided():
    assert classify_depth([1, 2, 3, 1]) is DepthClass.UNDECIDED


def test_terminated_coding_has_infinite_depth(cyclic):
    # a regular point: the radius leaves every compact part of the domain
    assert classify_depth(depth_sequence(cyclic, math.pi / 2)) is DepthClass.INFINITE
    assert radial_type(cyclic, math.pi / 2) is RadialType.ESCAPING


@given(st.lists(st.integers(1, 6), min_size=0, max_size=4), st.lists(st.integers(1, 6), min_size=1, max_size=4),
       st.integers(1, 4), st.integers(0, 3))
def test_relevelling_keeps_the_class(prefix, period, a, b):
    f = lambda n: a * n + b  # noqa: E731  strictly increasing refinement schedule
    for stream in (SymbolicDepths.eventually_periodic(prefix, period), SymbolicDepths.increasing(prefix),
                   SymbolicDepths.alternating()):
        moved = stream.relevel(f)
        assert classify_depth(moved) is classify_depth(stream)
        assert moved.first(6) == tuple(f(int(x)) for x in stream.first(6))


def test_relevelled_system_keeps_bungee_class(branching):
    moved = relevel_system(branching, lambda n: 2 * n)
    p = construct_bungee_point(moved, [(1,), (2,)])
    rep = classify_point(moved, p, 21)
    assert list(rep.depths.d) == [2 * d for d in _block_depths(6)]
    assert rep.depth_class is DepthClass.OSCILLATING and rep.radial_type is RadialType.BUNGEE


def test_relevelled_finite_system_keeps_bounded_points(pants):
    moved = relevel_system(pants, lambda n: n + 2)
    theta = _attracting_angle(pants)
    assert depth_sequence(moved, theta, 8).d == (3,) * 8
    assert radial_type(moved, theta) is radial_type(pants, theta) is RadialType.BOUNDED


# --------------------------------------------------------------------------- radial types


def test_hyperbolic_fixed_point_is_bounded(cyclic):
    assert radial_type(cyclic, _attracting_angle(cyclic)) is RadialType.BOUNDED


def test_parabolic_fixed_point_is_escaping(parabolic):
    assert radial_type(parabolic, 0.0) is RadialType.ESCAPING


@pytest.mark.parametrize("name", ["cyclic", "pants", "crossed", "parabolic", "trivial"])
def test_finite_rank_never_oscillates(name, request, rng):
    system = request.getfixturevalue(name)
    for theta in rng.uniform(0, TWO_PI, 150):
        rep = classify_point(system, float(theta), 32)
        assert rep.depth_class is not DepthClass.OSCILLATING
        assert rep.radial_type is not RadialType.BUNGEE


def test_point_report_json_fields(pants):
    doc = classify_point(pants, 1.0, 16).to_json()
    assert set(doc) >= {"itinerary", "depths", "depth_class", "radial_type", "associated_addresses"}


# --------------------------------------------------------------------------- associated addresses


def test_escaping_point_has_one_associated_address(branching):
    p = construct_bungee_point(branching, [(1,)])
    assoc = associated_addresses(branching, p, 12)
    assert len(assoc.addresses) == 1 and assoc.addresses[0].digits[0] == 1


def test_bungee_point_is_associated_to_both_branches(branching):
    p = construct_bungee_point(branching, [(1,), (2,)])
    firsts = {a.digits[0] for a in associated_addresses(branching, p, 21).addresses}
    assert firsts == {1, 2}


def test_bounded_point_has_no_escaping_address(pants):
    assert associated_addresses(pants, _attracting_angle(pants), 32).addresses == ()


def test_gap_point_belongs_to_its_gap_cycle(cyclic):
    assoc = associated_addresses(cyclic, math.pi / 2)
    assert [a.digits for a in assoc.addresses] in ([(1,)], [(2,)])


# --------------------------------------------------------------------------- alpha-images


def test_puncture_alpha_image_is_the_cusp(parabolic):
    img = alpha_image(parabolic, (2,))
    assert img.carrier == "point" and abs(img.theta) < 1e-12


def test_cyclic_alpha_images_are_half_circles(cyclic):
    a = alpha_image(cyclic, (1,))
    b = alpha_image(cyclic, (2,))
    assert a.carrier == b.carrier == "open_arc"
    assert a.arc.length == pytest.approx(math.pi) and b.arc.length == pytest.approx(math.pi)
    # the hyperbolic fixed points are removed
    for img in (a, b):
        assert not img.contains(0.0) and not img.contains(math.pi)
    assert a.contains(3 * math.pi / 2) and b.contains(math.pi / 2)


def test_lift_choice_translates_alpha_image(pants):
    base = alpha_image(pants, (1,))
    moved = alpha_image(pants, (1,), lift_choices=(2,))
    w = pants.letter_map(2)
    mid = cmath.phase(w(cmath.exp(1j * base.arc.midpoint))) % TWO_PI
    assert moved.contains(mid)


def test_non_reduced_lift_choices_rejected(pants):
    with pytest.raises(InvalidParameter):
        alpha_image(pants, (1,), lift_choices=(1, -1))


def test_unknown_component_rejected(cyclic):
    with pytest.raises(InvalidParameter):
        alpha_image(cyclic, (3,))


def test_pants_has_three_components(pants):
    assert len(gap_cycles(pants)) == 3


def test_non_isolated_alpha_image_shrinks(branching):
    lengths = alpha_image(branching, (1,), horizon=6).lengths
    assert len(lengths) == 6
    assert all(b < a for a, b in zip(lengths, lengths[1:]))


def test_alpha_image_shrinks_with_horizon(branching):
    prev = math.inf
    for h in range(1, 7):
        img = alpha_image(branching, (2,), horizon=h)
        assert img.lengths[-1] <= prev
        prev = img.lengths[-1]
    assert img.carrier == "point"  # collapsed below the point resolution


# --------------------------------------------------------------------------- constructions


def test_single_address_gives_escaping_point(branching):
    p = construct_bungee_point(branching, [(1,)])
    rep = classify_point(branching, p, 12)
    assert rep.radial_type is RadialType.ESCAPING
    assert list(rep.depths.d) == list(range(1, 13))


def test_isolated_component_is_unsupported(branching):
    with pytest.raises(Unsupported):
        construct_bungee_point(branching, [(1,), (1, 2)])


def test_distinct_choices_give_disjoint_intervals(branching):
    points = [construct_bungee_point(branching, [(1,), (2,)], choices=c) for c in ((1, 1), (2, 1), (1, 2))]
    arcs = [bungee_interval(branching, p, 8) for p in points]
    for i in range(len(arcs)):
        for j in range(i + 1, len(arcs)):
            a, b = arcs[i], arcs[j]
            assert not a.contains(b.midpoint) and not b.contains(a.midpoint)


def test_bungee_interval_recodes_to_its_itinerary(branching):
    p = construct_bungee_point(branching, [(1,), (2,)])
    arc = bungee_interval(branching, p, 6)
    coding = code_boundary_point(branching, arc.midpoint, max_letters=6, levels=6)
    assert coding.itinerary[:6] == p.itinerary(6)


def test_escaping_family_is_distinct(branching):
    family = escaping_family(branching, (1,), 6)
    prefixes = {p.itinerary(8) for p in family}
    assert len(prefixes) == 6
    for p in family:
        assert classify_point(branching, p, 10).radial_type is RadialType.ESCAPING


def test_bounded_tree_is_full_and_bounded(pants):
    tree = bounded_tree(pants, (1, 2), 3)
    assert len(tree) == 8
    for word, point in tree:
        rep = classify_point(pants, point, 12)
        assert rep.radial_type is RadialType.BOUNDED
        assert point.itinerary(len(word)) == word
