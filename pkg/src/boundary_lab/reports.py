"""Report envelopes and their JSON, CSV and SVG renderings.

Every command result is wrapped as ``{"command", "params", "type", "result"}``.
``type`` names the class of the result so :func:`decode` can rebuild the
original object; re-encoding a decoded report gives back the same document.
JSON is written with sorted keys so equal inputs give byte-identical files.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from ._validation import TWO_PI
from .arcs import Arc
from .covering import (
    CorrespondenceReport, ExplicitCovering, RadialTrace, RadialVerdict, build_annulus_covering,
    build_punctured_disk_covering,
)
from .deck_group import LimitSetCover, SchottkySystem, limit_set_cover
from .domain import ExampleDomain, system_document, system_from_json
from .errors import InvalidParameter
from .exhaustion import (
    AssociatedAddresses, BoundaryAddress, DepthClass, DepthSequence, PointReport, RadialType, SymbolicDepths,
)
from .harmonic import HarmonicEstimate, Method
from .hyperbolic import Crosscut, geodesic_between
from .prime_ends import (
    AdmissibleChain, AdmissibleCrosscut, Impression, PrimeEnd, PrimeEndClass, QuotientCount, TrueCrosscut,
    TrueCrosscutReport, TrueCrosscutVerdict,
)

SVG_SIZE = 1000
_SCALE = 420.0
# one colour per depth, cycled; dark to light
PALETTE = ("#1b1f3b", "#2e4a7d", "#2f7f9e", "#2fa38a", "#6cbf5a", "#b8d24a", "#f0c93a", "#f39c3d",
           "#e0603a", "#b8324f")


# --------------------------------------------------------------------------- extra result types


@dataclass(frozen=True)
class RadialReport:
    """The ``cover`` command result: a sampled radius and its verdict."""

    covering: ExplicitCovering
    trace: RadialTrace
    verdict: RadialVerdict
    limit: Optional[complex]

    def to_json(self):
        return {
            "covering": self.covering.to_json(),
            "theta": self.trace.theta,
            "t": [float(t) for t in self.trace.t],
            "values": [[float(v.real), float(v.imag)] for v in self.trace.values],
            "verdict": self.verdict.value,
            "limit": None if self.limit is None else [self.limit.real, self.limit.imag],
        }

    def rows(self):
        return ["t", "re", "im"], self.trace.rows()


@dataclass(frozen=True)
class LiftReport:
    """The ``lift`` command result: a curve in the domain and its lift to the disk."""

    covering: ExplicitCovering
    curve: np.ndarray
    lifted: np.ndarray

    def to_json(self):
        return {
            "covering": self.covering.to_json(),
            "curve": [[float(z.real), float(z.imag)] for z in self.curve],
            "lifted": [[float(z.real), float(z.imag)] for z in self.lifted],
        }

    def rows(self):
        return (["index", "curve_re", "curve_im", "lift_re", "lift_im"],
                [(i, z.real, z.imag, w.real, w.imag) for i, (z, w) in enumerate(zip(self.curve, self.lifted))])


@dataclass(frozen=True)
class SystemReport:
    """A pairing system emitted as a document."""

    system: SchottkySystem
    levels: Optional[int] = None

    def to_json(self):
        return system_document(self.system, self.levels)


# --------------------------------------------------------------------------- decoding


def _cx(pair):
    return complex(float(pair[0]), float(pair[1]))


def _covering(doc) -> ExplicitCovering:
    if doc["kind"] == "annulus":
        return build_annulus_covering(doc["R"])
    return build_punctured_disk_covering()


def _num(x):
    return math.inf if x == "inf" else float(x)


def _depths(doc) -> DepthSequence:
    d = tuple(int(x) for x in doc["d"])
    stream = None
    if "stream" in doc:
        s = doc["stream"]

        # only the computed prefix survives serialization
        def term(m, d=d):
            return d[m] if m < len(d) else math.nan

        stream = SymbolicDepths(term, _num(s["liminf"]), _num(s["limsup"]), s["description"])
    return DepthSequence(d, int(doc["horizon"]), bool(doc["terminated"]), doc["stop"], stream,
                         doc.get("diagnostics", {}))


def _addresses(doc) -> AssociatedAddresses:
    return AssociatedAddresses(tuple(BoundaryAddress(tuple(a)) for a in doc["addresses"]),
                               tuple(BoundaryAddress(tuple(a)) for a in doc["prefixes"]))


def _point_report(doc) -> PointReport:
    return PointReport(tuple(doc["itinerary"]), _depths(doc["depth_sequence"]), DepthClass(doc["depth_class"]),
                       RadialType(doc["radial_type"]), _addresses(doc["associated_addresses"]), doc["stop"])


def _crosscut(doc) -> Crosscut:
    return Crosscut(tuple(float(t) for t in doc["endpoints"]), doc.get("horocycle_R"))


def _impression(doc) -> Impression:
    return Impression(doc["kind"], BoundaryAddress(tuple(doc["address"])),
                      Arc.from_json(doc["arc"]) if "arc" in doc else None, doc.get("theta"))


def _prime_end(doc) -> PrimeEnd:
    ch = doc["chain"]
    links = tuple(AdmissibleCrosscut(_crosscut(c["crosscut"]), c["witness"], tuple(c["word"]), c.get("gap"))
                  for c in ch["links"])
    chain = AdmissibleChain(PrimeEndClass(ch["kind"]), links, ch["levels"])
    return PrimeEnd(doc["theta"], PrimeEndClass(doc["class"]), chain, _impression(doc["impression"]),
                    doc["certificate"])


def _true_crosscut(doc) -> TrueCrosscutReport:
    c = doc["certificate"]
    cert = None if c is None else TrueCrosscut(Arc.from_json(c["gap"]), c["level"], _crosscut(c["crosscut"]),
                                               c["component"])
    return TrueCrosscutReport(TrueCrosscutVerdict(doc["verdict"]), cert, doc["depth"], doc["note"])


def _limit_set(doc) -> LimitSetCover:
    return LimitSetCover(doc["depth"], tuple(Arc.from_json(a) for a in doc["arcs"]),
                         tuple(tuple(w) for w in doc["words"]), doc["total_length"])


def _harmonic(doc) -> HarmonicEstimate:
    return HarmonicEstimate(doc["value"], Method(doc["method"]), doc["stderr"], doc["n_walks"],
                            doc["absorption"], doc["mean_steps"])


def _correspondence(doc) -> CorrespondenceReport:
    return CorrespondenceReport(_cx(doc["p"]), doc["k"], _cx(doc["landing_plain"]), _cx(doc["landing_looped"]),
                                doc["discrepancy"], doc["lift_error"])


def _quotient(doc) -> QuotientCount:
    return QuotientCount(doc["count"], tuple(tuple(c) for c in doc["classes"]), tuple(doc["representatives"]),
                         doc["horizon"], doc["exact"], tuple(doc["per_level"]))


def _radial(doc) -> RadialReport:
    trace = RadialTrace(doc["theta"], np.array(doc["t"], dtype=float),
                        np.array([_cx(v) for v in doc["values"]], dtype=complex))
    limit = None if doc["limit"] is None else _cx(doc["limit"])
    return RadialReport(_covering(doc["covering"]), trace, RadialVerdict(doc["verdict"]), limit)


def _lift(doc) -> LiftReport:
    return LiftReport(_covering(doc["covering"]), np.array([_cx(v) for v in doc["curve"]], dtype=complex),
                      np.array([_cx(v) for v in doc["lifted"]], dtype=complex))


DECODERS = {
    "SystemReport": lambda doc: SystemReport(system_from_json(doc)),
    "LimitSetCover": _limit_set,
    "HarmonicEstimate": _harmonic,
    "DepthSequence": _depths,
    "PointReport": _point_report,
    "PrimeEnd": _prime_end,
    "TrueCrosscutReport": _true_crosscut,
    "QuotientCount": _quotient,
    "CorrespondenceReport": _correspondence,
    "RadialReport": _radial,
    "LiftReport": _lift,
    "ExampleDomain": ExampleDomain.from_json,
}


def envelope(command: str, params: dict, result) -> dict:
    name = type(result).__name__
    if name not in DECODERS:
        raise InvalidParameter(f"no report encoding for {name}")
    return {"command": command, "params": params, "type": name, "result": result.to_json()}


def decode(doc: dict):
    """Rebuild the result object of a report envelope."""
    try:
        return DECODERS[doc["type"]](doc["result"])
    except KeyError as exc:
        raise InvalidParameter(f"not a report envelope: missing {exc}") from None


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


# --------------------------------------------------------------------------- CSV


def _flatten(prefix, value, out):
    if isinstance(value, dict):
        for k in sorted(value):
            _flatten(f"{prefix}.{k}" if prefix else k, value[k], out)
    elif isinstance(value, list) and value and all(not isinstance(v, (dict, list)) for v in value):
        out.append((prefix, " ".join(str(v) for v in value)))
    elif isinstance(value, list):
        for i, v in enumerate(value):
            _flatten(f"{prefix}[{i}]", v, out)
    else:
        out.append((prefix, value))


def table(result):
    """Header and rows for the CSV form of a result."""
    if hasattr(result, "rows") and not isinstance(result, RadialTrace):
        return result.rows()
    if isinstance(result, LimitSetCover):
        return (["word", "start", "length"],
                [(" ".join(map(str, w)), a.start, a.length) for w, a in zip(result.words, result.arcs)])
    if isinstance(result, DepthSequence):
        return ["index", "level"], list(enumerate(result.d))
    if isinstance(result, PointReport):
        return (["index", "letter", "level"],
                [(i, x, d) for i, (x, d) in enumerate(zip(result.itinerary, result.depths.d))])
    rows = []
    _flatten("", result.to_json(), rows)
    return ["field", "value"], rows


def to_csv(result) -> str:
    header, rows = table(result)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


# --------------------------------------------------------------------------- SVG


def _xy(z: complex, scale=_SCALE):
    c = SVG_SIZE / 2
    return c + scale * z.real, c - scale * z.imag


def _fmt(x):
    return f"{x:.3f}"


def _circle_arc_path(arc: Arc, r: float = 1.0, center: complex = 0j, scale=_SCALE) -> str:
    if arc.length >= TWO_PI - 1e-12:
        p = _xy(center + r, scale)
        q = _xy(center - r, scale)
        rr = _fmt(r * scale)
        return (f"M {_fmt(p[0])} {_fmt(p[1])} A {rr} {rr} 0 1 0 {_fmt(q[0])} {_fmt(q[1])} "
                f"A {rr} {rr} 0 1 0 {_fmt(p[0])} {_fmt(p[1])}")
    p = _xy(center + r * complex(math.cos(arc.start), math.sin(arc.start)), scale)
    q = _xy(center + r * complex(math.cos(arc.end), math.sin(arc.end)), scale)
    large = 1 if arc.length > math.pi else 0
    rr = _fmt(r * scale)
    # counter-clockwise in the plane is sweep 0 once y points down
    return f"M {_fmt(p[0])} {_fmt(p[1])} A {rr} {rr} 0 {large} 0 {_fmt(q[0])} {_fmt(q[1])}"


def geodesic_path(g, scale=_SCALE) -> str:
    """SVG path data for a geodesic: a straight segment or a circle-arc element."""
    p1, p2 = (complex(math.cos(t), math.sin(t)) for t in g.endpoints)
    (x1, y1), (x2, y2) = _xy(p1, scale), _xy(p2, scale)
    if g.is_diameter:
        return f"M {_fmt(x1)} {_fmt(y1)} L {_fmt(x2)} {_fmt(y2)}"
    # the arc inside the disk is the minor arc bending toward the origin
    xm, ym = _xy(g.center * (1.0 - g.radius / abs(g.center)), scale)
    cross = (xm - x1) * (y2 - ym) - (ym - y1) * (x2 - xm)
    sweep = 1 if cross > 0 else 0
    r = _fmt(g.radius * scale)
    return f"M {_fmt(x1)} {_fmt(y1)} A {r} {r} 0 0 {sweep} {_fmt(x2)} {_fmt(y2)}"


def _polyline(points, scale=_SCALE) -> str:
    return " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in (_xy(complex(z), scale) for z in points))


class _Svg:
    def __init__(self, title: str):
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" '
            f'viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">',
            f"<title>{title}</title>",
            f'<rect width="{SVG_SIZE}" height="{SVG_SIZE}" fill="white"/>',
        ]

    def add(self, element: str):
        self.parts.append(element)

    def path(self, d, stroke, width=1.0, cls=""):
        extra = f' class="{cls}"' if cls else ""
        self.add(f'<path d="{d}" fill="none" stroke="{stroke}" stroke-width="{width}"{extra}/>')

    def circle(self, z, r_px, fill):
        x, y = _xy(z)
        self.add(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{r_px}" fill="{fill}"/>')

    def unit_circle(self):
        self.add(f'<circle cx="{SVG_SIZE / 2}" cy="{SVG_SIZE / 2}" r="{_SCALE}" fill="none" '
                 f'stroke="#999999" stroke-width="1"/>')

    def legend(self, depths):
        for i, d in enumerate(depths):
            y = 24 + 18 * i
            self.add(f'<rect x="16" y="{y - 10}" width="12" height="12" fill="{PALETTE[d % len(PALETTE)]}"/>')
            self.add(f'<text x="34" y="{y}" font-family="sans-serif" font-size="12">depth {d}</text>')

    def text(self):
        return "\n".join(self.parts + ["</svg>"]) + "\n"


def svg_limit_set(system: SchottkySystem, depth: int, levels=None) -> str:
    """Cover arcs of depths 0..``depth``, each depth on its own ring just outside the unit circle.

    The deepest cover is also drawn on the unit circle itself.
    """
    svg = _Svg(f"limit set cover of {system.name or 'system'} to depth {depth}")
    svg.unit_circle()
    cover = None
    for d in range(depth + 1):
        cover = limit_set_cover(system, d, levels)
        r = 1.03 + 0.02 * d
        colour = PALETTE[d % len(PALETTE)]
        for a in cover.arcs:
            if a.length > 1e-9:
                svg.path(_circle_arc_path(a, r), colour, 3.0, f"depth-{d}")
            else:
                svg.circle(r * complex(math.cos(a.start), math.sin(a.start)), 1.5, colour)
    if cover is not None:
        for a in cover.arcs:
            if a.length > 1e-9:
                svg.path(_circle_arc_path(a), PALETTE[depth % len(PALETTE)], 4.0, "limit")
    svg.legend(range(depth + 1))
    return svg.text()


def svg_geodesics(system: SchottkySystem, depth: int, levels=None, max_arcs: int = 20000) -> str:
    """Geodesics over every cover arc up to ``depth``, coloured by depth."""
    svg = _Svg(f"geodesics of {system.name or 'system'} to depth {depth}")
    svg.unit_circle()
    drawn = 0
    for d in range(depth + 1):
        cover = limit_set_cover(system, d, levels)
        colour = PALETTE[d % len(PALETTE)]
        for a in cover.arcs:
            if drawn >= max_arcs:
                break
            if a.length * _SCALE < 0.5:
                continue
            svg.path(geodesic_path(geodesic_between(a.start, a.end)), colour, 1.2, f"depth-{d}")
            drawn += 1
    svg.legend(range(depth + 1))
    return svg.text()


def svg_example(domain: ExampleDomain) -> str:
    """Plane picture of a named example domain, scaled to fit the viewport."""
    extent = 1.0
    for r, _ in domain.circle_arcs:
        extent = max(extent, r)
    for p, q in domain.segments:
        extent = max(extent, abs(p), abs(q))
    for p in domain.points:
        extent = max(extent, abs(p))
    if domain.annulus_R is not None:
        extent = max(extent, domain.annulus_R)
    scale = _SCALE / extent
    svg = _Svg(f"example domain {domain.name}")
    if domain.annulus_R is not None:
        for r in (domain.annulus_R, 1.0 / domain.annulus_R):
            svg.path(_circle_arc_path(Arc(0.0, TWO_PI), r, scale=scale), "#c0392b", 2.0, "annulus")
    for i, (r, arc) in enumerate(domain.circle_arcs):
        svg.path(_circle_arc_path(arc, r, scale=scale), PALETTE[i % len(PALETTE)], 1.5, "reef")
    for i, (p, q) in enumerate(domain.segments):
        (x0, y0), (x1, y1) = _xy(p, scale), _xy(q, scale)
        colour = "#c0392b" if i == len(domain.segments) - 1 and domain.name == "reef_interval" else \
            PALETTE[(i // 3) % len(PALETTE)]
        svg.add(f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x1)}" y2="{_fmt(y1)}" '
                f'stroke="{colour}" stroke-width="1.5"/>')
    for p in domain.points:
        x, y = _xy(p, scale)
        svg.add(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="2" fill="#c0392b"/>')
    return svg.text()


def svg_curve(cov: ExplicitCovering, points, title: str) -> str:
    """A curve in the domain plane of an explicit covering, with the boundary circles."""
    extent = cov.R if cov.kind == "annulus" else 1.0
    scale = _SCALE / extent
    svg = _Svg(title)
    radii = (cov.R, 1.0 / cov.R) if cov.kind == "annulus" else (1.0,)
    for r in radii:
        svg.path(_circle_arc_path(Arc(0.0, TWO_PI), r, scale=scale), "#999999", 1.0)
    svg.add(f'<polyline points="{_polyline(points, scale)}" fill="none" stroke="{PALETTE[2]}" stroke-width="1.5"/>')
    return svg.text()


# --------------------------------------------------------------------------- writing


def write(doc: dict, result, out: Path, svg: Optional[str] = None) -> None:
    """Write a report to ``out`` in the format given by its suffix."""
    suffix = out.suffix.lower()
    if suffix == ".json":
        text = dumps(doc)
    elif suffix == ".csv":
        text = to_csv(result)
    elif suffix == ".svg":
        if svg is None:
            raise InvalidParameter(f"command {doc['command']!r} has no SVG rendering")
        text = svg
    else:
        raise InvalidParameter(f"unsupported output format {out.suffix!r}; use .json, .csv or .svg")
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
