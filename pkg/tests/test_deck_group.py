import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from boundary_lab.arcs import Arc
from boundary_lab.deck_group import (
    GeneratorSpec, SchottkySystem, code_boundary_point, fixed_point_angles_of_words, limit_set_cover,
    nt_hit_estimate, orbit, reduced_word_count, reduced_words, validate,
)
from boundary_lab.hyperbolic import distance_to_radius
from boundary_lab.errors import AmbiguousAtTolerance, OverlappingArcs, PingPongFailure, ResourceLimitExceeded
from boundary_lab.moebius import attracting_repelling, conjugate, real_translation, rotation

from oracles import apply_word, mobius, reduced_words_brute

TWO_PI = 2 * math.pi


def _angle(z):
    return cmath.phase(z) % TWO_PI


# --------------------------------------------------------------------------- validate


def test_single_translation_is_valid(cyclic):
    cert = validate(cyclic)
    assert cert.n_generators == 1
    assert cert.min_separation == pytest.approx(math.pi / 3)


def test_crossed_and_pants_are_valid(crossed, pants):
    assert validate(crossed).n_generators == 2
    assert validate(pants).n_generators == 2


def test_half_translation_and_quarter_turn_overlap():
    # isometric arcs of M_{1/2} have half-width pi/3, too wide for four arcs
    g = real_translation(0.5)
    system = SchottkySystem([GeneratorSpec.from_map(g), GeneratorSpec.from_map(conjugate(rotation(math.pi / 2), g))])
    with pytest.raises(OverlappingArcs):
        validate(system)


def test_crossing_arcs_rejected():
    system = SchottkySystem([
        GeneratorSpec.from_arcs(Arc(0.0, 1.0), Arc(3.0, 1.0)),
        GeneratorSpec.from_arcs(Arc(0.5, 1.0), Arc(4.5, 1.0)),
    ])
    with pytest.raises(OverlappingArcs):
        validate(system)


def test_mismatched_arcs_fail_ping_pong():
    g = GeneratorSpec(real_translation(0.5), 1, Arc.centered(math.pi, 0.2), Arc.centered(0.0, 0.2))
    with pytest.raises(PingPongFailure):
        validate(SchottkySystem([g]))


def test_declared_kind_must_match_map():
    g = GeneratorSpec(real_translation(0.5), 1, Arc.centered(math.pi, math.pi / 3),
                      Arc.centered(0.0, math.pi / 3), kind="parabolic")
    with pytest.raises(PingPongFailure):
        validate(SchottkySystem([g]))


def test_parabolic_arcs_may_touch_at_fixed_point(parabolic):
    assert validate(parabolic).n_generators == 1


# --------------------------------------------------------------------------- words and orbits


def test_orbit_of_empty_words_is_basepoint(pants):
    assert np.allclose(orbit(pants, 0), [0j])


def test_cyclic_orbit_has_seven_real_points(cyclic):
    pts = orbit(cyclic, 3)
    assert len(pts) == 7
    assert np.max(np.abs(pts.imag)) < 1e-15
    m = (1.0, 0.5, 0.5, 1.0)
    expected = [0.0]
    for sign in (1, -1):
        z = 0.0
        for _ in range(3):
            z = mobius(m if sign > 0 else (1.0, -0.5, -0.5, 1.0), z)
            expected.append(z)
    assert sorted(pts.real) == pytest.approx(sorted(expected), abs=1e-14)


def test_rank_two_orbit_has_seventeen_points(pants):
    assert len(orbit(pants, 2)) == 17


@given(st.integers(1, 3), st.integers(0, 4))
def test_reduced_word_count_matches_brute_force(rank, L):
    brute = sum(len(reduced_words_brute(rank, k)) for k in range(L + 1))
    assert reduced_word_count(rank, L) == brute


def test_reduced_words_agree_with_brute_force(pants):
    words = reduced_words(pants, 3)
    assert len(words) == len(set(words)) == 1 + 4 + 12 + 36
    assert set(w for w in words if len(w) == 3) == set(reduced_words_brute(2, 3))
    assert all(len(a) <= len(b) for a, b in zip(words, words[1:]))


def test_orbit_points_follow_words(pants):
    words = reduced_words(pants, 2)
    pts = orbit(pants, 2)
    mats = [pants.letter_map(x).entries for x in (1, 2)]
    for w, z in zip(words, pts):
        assert abs(apply_word(mats, w, 0j) - z) < 1e-12


def test_word_cap_is_enforced(pants):
    with pytest.raises(ResourceLimitExceeded):
        orbit(pants, 12, cap=1000)


# --------------------------------------------------------------------------- limit-set covers


def test_trivial_system_has_empty_cover(trivial):
    cover = limit_set_cover(trivial, 4)
    assert cover.arcs == () and cover.total_length == 0.0


def test_cyclic_cover_shrinks_to_plus_minus_one(cyclic):
    totals = []
    for L in range(0, 10):
        cover = limit_set_cover(cyclic, L)
        assert len(cover.arcs) == 2
        assert cover.contains(0.0) and cover.contains(math.pi)
        totals.append(cover.total_length)
    assert all(b < a for a, b in zip(totals, totals[1:]))
    assert totals[-1] < 0.01


def test_pants_cover_strictly_decreases(pants):
    totals = [limit_set_cover(pants, L).total_length for L in range(2, 7)]
    assert all(b < a for a, b in zip(totals, totals[1:]))
    assert totals[-1] < TWO_PI - 1.0


@pytest.mark.parametrize("name", ["cyclic", "pants", "crossed"])
def test_covers_are_nested(name, request):
    system = request.getfixturevalue(name)
    for L in range(0, 4):
        outer = limit_set_cover(system, L).arcs
        for a in limit_set_cover(system, L + 1).arcs:
            assert any(o.contains_arc(a, tol=1e-10) for o in outer), (L, a)


@pytest.mark.parametrize("name", ["cyclic", "pants", "crossed", "parabolic"])
def test_word_fixed_points_lie_in_cover(name, request):
    system = request.getfixturevalue(name)
    L = 3
    cover = limit_set_cover(system, L)
    for _, theta in fixed_point_angles_of_words(system, L):
        assert cover.contains(theta, tol=1e-9)


def test_cover_does_not_depend_on_basepoint(pants):
    moved = SchottkySystem(pants.generators(), basepoint=0.3 - 0.4j)
    a = limit_set_cover(pants, 3)
    b = limit_set_cover(moved, 3)
    assert a.words == b.words
    assert all(x.start == y.start and x.length == y.length for x, y in zip(a.arcs, b.arcs))


# --------------------------------------------------------------------------- coding


def test_gap_point_has_empty_itinerary(cyclic):
    c = code_boundary_point(cyclic, math.pi / 2)
    assert c.itinerary == () and c.terminated and c.stop == "gap"
    assert c.terminal.arc.contains(math.pi / 2)


def test_attracting_fixed_point_codes_as_constant_word(cyclic):
    a = attracting_repelling(cyclic.letter_map(1))[0]
    c = code_boundary_point(cyclic, _angle(a), max_letters=12)
    assert set(c.itinerary) == {1} and len(c.itinerary) == 12
    assert c.tail.period == (1,) and c.tail.kind == "hyperbolic"


@pytest.mark.parametrize("name", ["pants", "crossed"])
def test_commutator_fixed_point_codes_periodically(name, request):
    system = request.getfixturevalue(name)
    h = system.word_map((1, 2, -1, -2))
    a = attracting_repelling(h)[0]
    c = code_boundary_point(system, _angle(a), max_letters=24)
    assert len(c.itinerary) >= 8
    assert all(x == (1, 2, -1, -2)[k % 4] for k, x in enumerate(c.itinerary))
    assert c.tail is not None and c.tail.period == (1, 2, -1, -2)


def test_arc_endpoint_is_ambiguous(pants):
    start = pants.generators()[0].source.start
    with pytest.raises(AmbiguousAtTolerance):
        code_boundary_point(pants, start)


def test_itineraries_are_reduced(pants, rng):
    for theta in rng.uniform(0, TWO_PI, 200):
        it = code_boundary_point(pants, float(theta), max_letters=20).itinerary
        assert all(a != -b for a, b in zip(it, it[1:]))


# --------------------------------------------------------------------------- non-tangential hits


def test_hyperbolic_fixed_point_is_hit(cyclic):
    a = attracting_repelling(cyclic.letter_map(1))[0]
    assert nt_hit_estimate(cyclic, _angle(a), 6, 2.0)


@pytest.mark.parametrize("L", range(1, 7))
def test_gap_point_never_hit(cyclic, L):
    assert not nt_hit_estimate(cyclic, math.pi / 2, L, 2.0)


def test_parabolic_fixed_point_not_hit(parabolic):
    assert not nt_hit_estimate(parabolic, 0.0, 6, 0.1)


def test_parabolic_orbit_leaves_every_stolz_angle(parabolic):
    # g^k(0) tends to the fixed point 1 along a horocycle, so its distance to the radius grows
    g = parabolic.letter_map(1)
    z, dists = 0j, []
    for _ in range(40):
        z = g(z)
        dists.append(distance_to_radius(0.0, z))
    assert abs(z - 1) < 0.1
    assert all(b > a for a, b in zip(dists[5:], dists[6:]))
