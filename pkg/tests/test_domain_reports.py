import json
import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from boundary_lab import reports
from boundary_lab.covering import ExplicitCovering, build_annulus_covering, correspondence_check
from boundary_lab.deck_group import SchottkySystem, limit_set_cover
from boundary_lab.domain import (
    ExampleDomain, fat_cantor, load_domain, reef_interval, reef_point, resolve, system_document, system_from_json,
)
from boundary_lab.errors import InvalidParameter
from boundary_lab.exhaustion import classify_point, depth_sequence
from boundary_lab.harmonic import harmonic_measure_annulus
from boundary_lab.prime_ends import classify_prime_end, detect_true_crosscut, prime_end_quotient_count

SVG_NS = "{http://www.w3.org/2000/svg}"


# --------------------------------------------------------------------------- domain documents


def test_annulus_document():
    cov = load_domain({"kind": "annulus", "R": 3.0})
    assert isinstance(cov, ExplicitCovering) and cov.R == 3.0


@pytest.mark.parametrize("doc", [
    {"kind": "annulus", "R": 1.0},
    {"kind": "annulus"},
    {"kind": "named", "name": "nowhere"},
    {"kind": "schottky"},
    {"R": 2.0},
])
def test_invalid_domain_documents(doc):
    with pytest.raises(InvalidParameter):
        load_domain(doc)


def test_system_document_round_trip(pants):
    doc = system_document(pants)
    back = system_from_json(json.loads(json.dumps(doc)))
    assert len(back.generators()) == 2
    for a, b in zip(pants.generators(), back.generators()):
        assert a.map.to_json() == b.map.to_json()
        assert a.source.to_json() == b.source.to_json() and a.target.to_json() == b.target.to_json()


def test_system_document_of_lazy_system_is_truncated(branching):
    doc = system_document(branching, levels=3)
    assert {g["level"] for g in doc["generators"]} == {1, 2, 3}


def test_schottky_file_resolves_relative_to_domain(tmp_path, cyclic):
    (tmp_path / "c.json").write_text(json.dumps(system_document(cyclic)))
    (tmp_path / "d.json").write_text(json.dumps({"kind": "schottky", "file": "c.json"}))
    assert isinstance(resolve(str(tmp_path / "d.json")), SchottkySystem)


def test_matrix_only_generator_gets_isometric_arcs():
    sys_ = system_from_json([{"matrix": [[1.0, 0.0], [0.5, 0.0], [0.5, 0.0], [1.0, 0.0]]}])
    g = sys_.generators()[0]
    assert g.source.length == pytest.approx(2 * math.pi / 3)


def test_unknown_spec_is_reported(tmp_path):
    with pytest.raises(InvalidParameter):
        resolve(str(tmp_path / "missing.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(InvalidParameter):
        resolve(str(bad))


# --------------------------------------------------------------------------- named examples


def test_reef_point_openings_alternate():
    dom = reef_point(8)
    assert len(dom.circle_arcs) == 7 and dom.points == (0j,)
    for k, (r, arc) in zip(range(2, 9), dom.circle_arcs):
        assert r == pytest.approx(1 / k)
        assert arc.length == pytest.approx(2 * (k - 1) * math.pi / k)
        opening = math.pi if k % 2 == 0 else 0.0
        assert not arc.contains(opening)


def test_reef_interval_segments():
    dom = reef_interval(5)
    assert len(dom.segments) == 3 * 5 + 1
    assert dom.segments[-1] == (-0.25 + 0j, 0.25 + 0j)
    # each reef is an open box around the interval, alternating sides
    for k in range(1, 6):
        a, b = dom.segments[3 * (k - 1)]
        assert abs(abs(a.imag) - 1 / k) < 1e-15


def test_fat_cantor_points_sit_inside_the_annulus():
    dom = fat_cantor(2.0, 5)
    assert dom.annulus_R == 2.0
    assert len(dom.points) == sum(2 ** k for k in range(1, 6))
    r = np.abs(np.array(dom.points))
    assert np.all((r > 0.5) & (r < 2.0))
    assert dom.notes["inner_measure_bound"] == 0.5


def test_fat_cantor_bound_matches_annulus_value():
    dom = fat_cantor()
    assert harmonic_measure_annulus(dom.annulus_R, 1.0).value == dom.notes["inner_measure_bound"]


def test_example_round_trip():
    for dom in (reef_point(5), reef_interval(3), fat_cantor(2.0, 3)):
        doc = json.loads(json.dumps(dom.to_json()))
        back = ExampleDomain.from_json(doc)
        assert back.to_json() == doc and back.name == dom.name and back.points == dom.points


# --------------------------------------------------------------------------- report envelopes


def _results(cyclic, pants, parabolic):
    cov = build_annulus_covering(10.0)
    return [
        ("limit-set", limit_set_cover(pants, 3)),
        ("depth", depth_sequence(cyclic, 0.0, 12)),
        ("classify", classify_point(pants, 1.0, 16)),
        ("prime-end", classify_prime_end(parabolic, 0.0)),
        ("prime-end", classify_prime_end(pants, 1.0)),
        ("prime-end", prime_end_quotient_count(pants)),
        ("true-crosscut", detect_true_crosscut(cyclic)),
        ("harmonic", harmonic_measure_annulus(2.0, 1.0, "monte_carlo", 500)),
        ("correspond", correspondence_check(cov, cov.R, 1)),
        ("render", fat_cantor(2.0, 3)),
    ]


def test_envelopes_decode_to_equal_documents(cyclic, pants, parabolic):
    for command, result in _results(cyclic, pants, parabolic):
        doc = json.loads(reports.dumps(reports.envelope(command, {}, result)))
        assert json.loads(json.dumps(reports.decode(doc).to_json())) == doc["result"], command


def test_reports_are_byte_identical(cyclic, pants, parabolic):
    first = [reports.dumps(reports.envelope(c, {}, r)) for c, r in _results(cyclic, pants, parabolic)]
    second = [reports.dumps(reports.envelope(c, {}, r)) for c, r in _results(cyclic, pants, parabolic)]
    assert first == second


def test_decode_rejects_garbage():
    with pytest.raises(InvalidParameter):
        reports.decode({"type": "Nothing", "result": {}})


def test_limit_set_csv(pants):
    text = reports.to_csv(limit_set_cover(pants, 2))
    lines = text.strip().split("\n")
    assert lines[0] == "word,start,length"
    assert len(lines) == 1 + 12 * 3


def test_generic_csv_flattens(cyclic):
    text = reports.to_csv(detect_true_crosscut(cyclic))
    assert text.startswith("field,value\n") and "verdict" in text


@pytest.mark.parametrize("svg_fn", [
    lambda s: reports.svg_limit_set(s, 4),
    lambda s: reports.svg_geodesics(s, 3),
])
def test_svg_is_well_formed(svg_fn, pants):
    root = ET.fromstring(svg_fn(pants))
    assert root.tag == SVG_NS + "svg" and root.get("width") == "1000"
    assert len(root.findall(SVG_NS + "path")) > 4


def test_limit_set_svg_layers_by_depth(cyclic):
    root = ET.fromstring(reports.svg_limit_set(cyclic, 5))
    classes = {p.get("class") for p in root.iter(SVG_NS + "path")}
    assert {f"depth-{d}" for d in range(6)} <= classes


@pytest.mark.parametrize("dom", [reef_point(6), reef_interval(4), fat_cantor(2.0, 3)])
def test_example_svgs_are_well_formed(dom):
    ET.fromstring(reports.svg_example(dom))


def test_write_rejects_unknown_suffix(tmp_path, cyclic):
    res = detect_true_crosscut(cyclic)
    doc = reports.envelope("true-crosscut", {}, res)
    with pytest.raises(InvalidParameter):
        reports.write(doc, res, tmp_path / "x.txt")
    with pytest.raises(InvalidParameter):
        reports.write(doc, res, tmp_path / "x.svg")
