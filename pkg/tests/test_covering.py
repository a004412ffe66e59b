import cmath
import math

import numpy as np
import pytest
from scipy import integrate

from boundary_lab.covering import (
    RadialVerdict, build_annulus_covering, build_punctured_disk_covering, classify_radial, correspondence_check,
    lift_curve, radial_limit, radial_t_samples, radial_trace,
)
from boundary_lab.errors import DomainError, InvalidParameter, StepTooLarge
from boundary_lab.hyperbolic import hyp_distance
from boundary_lab.moebius import MapClass, classify, fixed_points


def _grid(rmax, nr=40, nt=80):
    r = np.linspace(0.0, rmax, nr)
    t = np.linspace(0.0, 2 * math.pi, nt, endpoint=False)
    return (r[:, None] * np.exp(1j * t[None, :])).ravel()


@pytest.fixture(scope="module")
def annulus():
    return build_annulus_covering(2.0)


@pytest.fixture(scope="module")
def punctured():
    return build_punctured_disk_covering()


# --------------------------------------------------------------------------- construction


def test_annulus_covering_sends_zero_to_one(annulus):
    assert abs(annulus(0.0) - 1.0) < 1e-15


def test_annulus_deck_generator_is_hyperbolic_with_fixed_points_plus_minus_one(annulus):
    g = annulus.deck_generator
    assert classify(g) is MapClass.HYPERBOLIC
    pts = sorted(p.real for p in fixed_points(g).points)
    assert pts == pytest.approx([-1.0, 1.0], abs=1e-12)


def test_annulus_requires_R_above_one():
    with pytest.raises(InvalidParameter):
        build_annulus_covering(1.0)
    with pytest.raises(InvalidParameter):
        build_annulus_covering(0.5)


def test_punctured_covering_sends_zero_inside(punctured):
    w = punctured(0.0)
    assert 0 < abs(w) < 1


def test_punctured_deck_generator_is_parabolic_at_minus_one(punctured):
    g = punctured.deck_generator
    assert classify(g) is MapClass.PARABOLIC
    assert abs(fixed_points(g).points[0] + 1) < 1e-9


@pytest.mark.parametrize("R", [1.5, 2.0, 10.0])
def test_image_lies_in_annulus(R):
    cov = build_annulus_covering(R)
    assert np.all(cov.contains(cov(_grid(0.999))))


def test_annulus_covering_is_onto_a_grid(annulus):
    r = np.linspace(1 / annulus.R * 1.001, annulus.R * 0.999, 30)
    t = np.linspace(0, 2 * math.pi, 30, endpoint=False)
    zeta = (r[:, None] * np.exp(1j * t[None, :])).ravel()
    pre = annulus.strip_inverse(np.log(zeta))
    assert np.all(np.abs(pre) < 1)
    assert np.max(np.abs(annulus(pre) - zeta)) < 1e-12


@pytest.mark.parametrize("R,rmax", [(10.0, 0.99), (2.0, 0.85)])
def test_deck_relation_on_grid(R, rmax):
    cov = build_annulus_covering(R)
    z = _grid(rmax)
    assert np.max(np.abs(cov(cov.deck_generator.apply_array(z)) - cov(z))) < 1e-9


def test_punctured_deck_relation_on_grid(punctured):
    z = _grid(0.99)
    assert np.max(np.abs(punctured(punctured.deck_generator.apply_array(z)) - punctured(z))) < 1e-9


# --------------------------------------------------------------------------- radial traces


def test_radial_samples_approach_t_max_geometrically():
    t = radial_t_samples(10, 1 - 1e-6)
    assert np.all(np.diff(t) > 0)
    assert t[-1] == pytest.approx(1 - 1e-6)
    gaps = 1 - t
    assert gaps[1:] / gaps[:-1] == pytest.approx(np.full(len(t) - 1, 0.5))


def test_radial_samples_reject_t_max_one():
    with pytest.raises(InvalidParameter):
        radial_t_samples(5, 1.0)


def test_annulus_trace_at_quarter_turn_tends_to_a_circle(annulus):
    tr = radial_trace(annulus, math.pi / 2, 40)
    mod = np.abs(tr.values)
    tail = mod[len(mod) // 2:]
    assert np.all(np.diff(tail) >= -1e-12) or np.all(np.diff(tail) <= 1e-12)
    assert min(abs(mod[-1] - annulus.R), abs(mod[-1] - 1 / annulus.R)) < 1e-3


@pytest.mark.parametrize("theta", [0.3, 1.0, 2.0, 4.0, 5.5])
def test_annulus_modulus_tends_to_R_or_inverse(annulus, theta):
    # radial_limit is the closed form read off the strip image of the radius
    last = radial_trace(annulus, theta, 40).values[-1]
    lim = radial_limit(annulus, theta)
    assert abs(abs(lim) - annulus.R) < 1e-12 or abs(abs(lim) - 1 / annulus.R) < 1e-12
    assert abs(last - lim) < 1e-4


def test_annulus_trace_at_fixed_point_stays_compact(annulus):
    mod = np.abs(radial_trace(annulus, 0.0, 40).values)
    assert np.max(np.abs(mod - 1)) < 1e-12


def test_punctured_trace_at_minus_one_reaches_puncture(punctured):
    assert abs(radial_trace(punctured, math.pi, 40).values[-1]) < 1e-3


def test_radial_rows_have_three_columns(annulus):
    rows = radial_trace(annulus, 1.0, 5).rows()
    assert len(rows) == 5 and all(len(r) == 3 for r in rows)


# --------------------------------------------------------------------------- classify_radial


def test_classify_radial_examples(annulus, punctured):
    assert classify_radial(annulus, math.pi / 3) is RadialVerdict.ESCAPING
    assert classify_radial(annulus, 0.0) is RadialVerdict.BOUNDED
    assert classify_radial(annulus, math.pi) is RadialVerdict.BOUNDED
    assert classify_radial(punctured, math.pi) is RadialVerdict.ESCAPING


def test_almost_every_radius_escapes(annulus, rng):
    thetas = rng.uniform(0, 2 * math.pi, 200)
    verdicts = {classify_radial(annulus, float(t)) for t in thetas}
    assert verdicts == {RadialVerdict.ESCAPING}


# --------------------------------------------------------------------------- lifting


def test_constant_curve_has_constant_lift(annulus):
    lift = lift_curve(annulus, np.full(20, annulus(0.2j)), 0.2j)
    assert np.max(np.abs(lift - 0.2j)) < 1e-12


def test_core_circle_lifts_to_deck_translate(annulus):
    s = np.linspace(0, 1, 400)
    lift = lift_curve(annulus, np.exp(2j * math.pi * s), 0j)
    assert abs(lift[-1] - annulus.deck_generator(0j)) < 1e-6


@pytest.mark.parametrize("R,loops", [(10.0, 2), (2.0, 1)])
def test_lift_reproduces_curve(R, loops):
    # at R = 2 a second loop brings the lift within 1e-12 of +-1, where pi itself
    # is only resolvable to about 1e-4 in double precision
    cov = build_annulus_covering(R)
    s = np.linspace(0, 1, 300)
    curve = np.exp(0.5 * np.sin(3 * s) + 2j * math.pi * loops * s)
    lift = lift_curve(cov, curve, 0j)
    assert np.max(np.abs(cov(lift) - curve)) < 1e-7
    assert np.max(np.abs(np.diff(lift))) < 0.2


def test_radial_segment_lift_lands_near_boundary(annulus):
    eps = 1e-6
    curve = np.linspace(1.0, annulus.R - eps, 200)
    lift = lift_curve(annulus, curve, 0j)
    assert abs(lift[-1]) > 0.999
    assert abs(annulus(lift[-1]) - (annulus.R - eps)) < 1e-7


def test_lift_rejects_mismatched_start(annulus):
    with pytest.raises(InvalidParameter):
        lift_curve(annulus, np.array([1.0, 1.1]), 0.5)


def test_lift_rejects_curve_leaving_domain(annulus):
    with pytest.raises(DomainError):
        lift_curve(annulus, np.array([1.0, 3.0]), 0j)


def test_jump_across_hole_is_too_large(annulus):
    # one sample to the antipode crosses the hole; halving cannot decide the branch
    with pytest.raises(StepTooLarge):
        lift_curve(annulus, np.array([1.0, -1.0]), 0j)


def test_lift_is_local_isometry(annulus):
    zeta0, h = 1.3 + 0.4j, 1e-4 * cmath.exp(0.7j)
    lift = lift_curve(annulus, np.array([zeta0, zeta0 + h]), complex(annulus.strip_inverse(cmath.log(zeta0))))
    pulled = integrate.quad(lambda s: float(annulus.density(zeta0 + s * h)) * abs(h), 0, 1, epsabs=1e-15)[0]
    assert hyp_distance(lift[0], lift[1]) == pytest.approx(pulled, rel=1e-6)


# --------------------------------------------------------------------------- correspondence


def test_zero_loops_give_identical_landings(annulus):
    rep = correspondence_check(annulus, k=0)
    assert rep.landing_plain == rep.landing_looped and rep.discrepancy == 0.0


@pytest.mark.parametrize("k", [1, 2, -1])
def test_loops_shift_landing_by_deck_power(annulus, k):
    rep = correspondence_check(annulus, annulus.R, k)
    assert rep.passed and rep.discrepancy < 1e-5
    assert abs(abs(rep.landing_plain) - 1) < 1e-12
    assert rep.lift_error < 1e-3


def test_inner_circle_correspondence(annulus):
    assert correspondence_check(annulus, 1 / annulus.R * cmath.exp(0.4j), 2).passed


def test_correspondence_rejects_interior_point(annulus):
    with pytest.raises(InvalidParameter):
        correspondence_check(annulus, 1.2, 1)


def test_punctured_correspondence_lands_at_cusp(punctured):
    rep = correspondence_check(punctured, 0.0, 1)
    assert rep.passed and abs(rep.landing_plain + 1) < 1e-12


def test_landing_point_agrees_with_radial_limit(annulus):
    rep = correspondence_check(annulus, annulus.R * cmath.exp(0.9j), 0)
    theta = cmath.phase(rep.landing_plain) % (2 * math.pi)
    tail = radial_trace(annulus, theta, 40).values[-1]
    assert abs(tail - rep.p) < 1e-4
