"""Loading domain descriptions and expanding the named example domains.

A domain document is JSON validated against ``schemas/domain.schema.json``.
It selects a round annulus, the punctured disk, a pairing system (inline or
from a file), or a named example.  The reef and fat-Cantor examples are not
pairing systems: they expand to explicit plane geometry (circle arcs, line
segments and isolated points) so plots and reports can be reproduced.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Union

import jsonschema

from ._validation import TWO_PI, check_int, check_positive
from .arcs import Arc
from .covering import ExplicitCovering, build_annulus_covering, build_punctured_disk_covering
from .deck_group import GeneratorSpec, SchottkySystem
from .errors import InvalidParameter
from .moebius import MoebiusMap
from .systems import NAMED_SYSTEMS, named_system

EXAMPLES = ("reef_point", "reef_interval", "fat_cantor")
DEFAULT_REEFS = 24
DEFAULT_GENERATIONS = 6


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    """One of the bundled schemas, ``"domain"`` or ``"system"``."""
    text = resources.files("boundary_lab").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def _check(doc, name):
    try:
        jsonschema.validate(doc, load_schema(name))
    except jsonschema.ValidationError as exc:
        raise InvalidParameter(f"invalid {name} document: {exc.message}") from None


@dataclass(frozen=True)
class ExampleDomain:
    """Explicit geometry of a named example domain.

    The domain is the complement in the sphere (or, when ``annulus_R`` is
    set, in the annulus ``1/R < |z| < R``) of the listed pieces.
    ``circle_arcs`` holds ``(radius, Arc)`` pairs centred at 0.
    """

    name: str
    circle_arcs: tuple = ()
    segments: tuple = ()
    points: tuple = ()
    annulus_R: float | None = None
    notes: dict = field(default_factory=dict, compare=False)

    def to_json(self):
        out = {
            "name": self.name,
            "circle_arcs": [{"radius": r, "arc": a.to_json()} for r, a in self.circle_arcs],
            "segments": [[[p.real, p.imag], [q.real, q.imag]] for p, q in self.segments],
            "points": [[p.real, p.imag] for p in self.points],
            "notes": self.notes,
        }
        if self.annulus_R is not None:
            out["annulus_R"] = self.annulus_R
        return out

    @classmethod
    def from_json(cls, data):
        return cls(
            data["name"],
            tuple((float(c["radius"]), Arc.from_json(c["arc"])) for c in data["circle_arcs"]),
            tuple((complex(*p), complex(*q)) for p, q in data["segments"]),
            tuple(complex(*p) for p in data["points"]),
            data.get("annulus_R"),
            data.get("notes", {}),
        )


def reef_point(n: int = DEFAULT_REEFS) -> ExampleDomain:
    """Reefs ``|z| = 1/k``, ``|Arg((-1)^k z)| < (k-1)pi/k`` for ``2 <= k <= n``, plus the point 0.

    Each reef leaves an opening of angle ``2pi/k`` on alternating sides, so
    0 stays accessible although no radius reaches it.
    """
    n = check_int(n, "n", minimum=2)
    arcs = []
    for k in range(2, n + 1):
        half = (k - 1) * math.pi / k
        center = 0.0 if k % 2 == 0 else math.pi
        arcs.append((1.0 / k, Arc.centered(center, half)))
    return ExampleDomain("reef_point", tuple(arcs), (), (0j,), notes={"reefs": n - 1})


def _reef_c(k: int):
    s = (-1) ** k
    a = complex(-0.25, 0) - (1 + 1j) / k
    b = complex(0.25, 0) + (1 - 1j) / k
    c = complex(0.25, 0) + (1 + 1j) / k
    d = complex(-0.25, 0) - (1 - 1j) / k
    return ((s * a, s * b), (s * b, s * c), (s * c, s * d))


def reef_interval(n: int = DEFAULT_REEFS) -> ExampleDomain:
    """Three-segment reefs ``(-1)^k C_k`` for ``1 <= k <= n`` around the interval ``[-1/4, 1/4]``."""
    n = check_int(n, "n", minimum=1)
    segs = []
    for k in range(1, n + 1):
        segs.extend(_reef_c(k))
    segs.append((complex(-0.25, 0), complex(0.25, 0)))
    return ExampleDomain("reef_interval", (), tuple(segs), (), notes={"reefs": n})


def fat_cantor(R: float = 2.0, n: int = DEFAULT_GENERATIONS) -> ExampleDomain:
    """The annulus ``1/R < |z| < R`` minus ``R(1 - 2^-k) e^{2 pi i j / 2^k}``, ``1 <= k <= n``.

    The removed points accumulate on the whole outer circle as ``n`` grows.
    Removing points only shrinks the domain, so the harmonic measure of the
    inner circle seen from 1 is at most its annulus value 1/2.
    """
    R = check_positive(R, "R")
    if R <= 1.0:
        raise InvalidParameter("need R > 1")
    n = check_int(n, "n", minimum=1)
    pts = []
    for k in range(1, n + 1):
        r = R * (1.0 - 2.0 ** -k)
        if r <= 1.0 / R:
            continue
        for j in range(2 ** k):
            pts.append(r * complex(math.cos(TWO_PI * j / 2 ** k), math.sin(TWO_PI * j / 2 ** k)))
    return ExampleDomain("fat_cantor", (), (), tuple(pts), annulus_R=R,
                         notes={"generations": n, "inner_measure_bound": 0.5})


def _generator(doc) -> GeneratorSpec:
    level = int(doc.get("level", 1))
    addr = doc.get("address")
    if "matrix" in doc and "source_arc" in doc:
        return GeneratorSpec.from_json({"level": level, "kind": doc.get("kind", "hyperbolic"), **doc})
    if "matrix" in doc:
        return GeneratorSpec.from_map(MoebiusMap.from_json(doc["matrix"]), level, addr)
    return GeneratorSpec.from_arcs(Arc.from_json(doc["source_arc"]), Arc.from_json(doc["target_arc"]),
                                   level, doc.get("kind", "hyperbolic"), addr)


def system_from_json(doc, name: str = "") -> SchottkySystem:
    """Build a pairing system from a validated system document (or a bare generator list)."""
    if isinstance(doc, list):
        doc = {"generators": doc}
    _check(doc, "system")
    return SchottkySystem([_generator(g) for g in doc["generators"]], name=doc.get("name", name))


Domain = Union[SchottkySystem, ExplicitCovering, ExampleDomain]


def load_domain(doc, base: Path | None = None) -> Domain:
    """Turn a domain document into a system, an explicit covering or example geometry."""
    _check(doc, "domain")
    kind = doc["kind"]
    if kind == "annulus":
        return build_annulus_covering(doc["R"])
    if kind == "punctured_disk":
        return build_punctured_disk_covering()
    if kind == "schottky":
        if "system" in doc:
            return system_from_json(doc["system"])
        path = Path(doc["file"])
        if base is not None and not path.is_absolute():
            path = base / path
        return system_from_json(json.loads(path.read_text()), name=path.stem)
    name = doc["name"]
    if name in NAMED_SYSTEMS:
        return named_system(name)
    if name == "reef_point":
        return reef_point(doc.get("n", DEFAULT_REEFS))
    if name == "reef_interval":
        return reef_interval(doc.get("n", DEFAULT_REEFS))
    return fat_cantor(doc.get("R", 2.0), doc.get("n", DEFAULT_GENERATIONS))


def resolve(spec: str) -> Domain:
    """A CLI ``--system`` value: a bundled name or a path to a domain or system JSON file."""
    if spec in NAMED_SYSTEMS or spec in EXAMPLES:
        return load_domain({"kind": "named", "name": spec})
    path = Path(spec)
    if not path.exists():
        raise InvalidParameter(
            f"{spec!r} is neither a file nor a bundled name ({', '.join(sorted(NAMED_SYSTEMS) + list(EXAMPLES))})"
        )
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise InvalidParameter(f"{spec}: not valid JSON ({exc})") from None
    if isinstance(doc, dict) and "kind" in doc:
        return load_domain(doc, base=path.parent)
    return system_from_json(doc, name=path.stem)


def system_document(system: SchottkySystem, levels=None) -> dict:
    """The system document for ``system`` (levels up to ``levels`` for lazy systems)."""
    return {"name": system.name, "generators": system.to_json(levels)}
