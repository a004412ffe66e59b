"""Command line front end: ``boundary-lab <command> [options]``.

Each command computes one result, prints a one-line summary to stderr and
writes the full report to ``--out`` (format chosen by the suffix: .json,
.csv or .svg).  Without ``--out`` the JSON report goes to stdout.
"""
from __future__ import annotations

import argparse
import cmath
import math
import sys
from pathlib import Path

import numpy as np

from .covering import (
    ExplicitCovering, build_annulus_covering, build_punctured_disk_covering, classify_radial,
    correspondence_check, lift_curve, radial_limit, radial_trace,
)
from .deck_group import SchottkySystem, limit_set_cover
from .domain import ExampleDomain, resolve
from .errors import BoundaryLabError, InvalidParameter
from .exhaustion import DEFAULT_HORIZON, classify_point, depth_sequence
from .harmonic import harmonic_measure_annulus
from .prime_ends import classify_prime_end, detect_true_crosscut, prime_end_quotient_count
from . import reports

CSV_HELP = """\
CSV columns by command:
  classify        index, letter, level (systems); t, re, im (coverings)
  limit-set       word, start, length (one row per cover arc)
  depth           index, level
  cover           t, re, im (samples of the radius image)
  lift            index, curve_re, curve_im, lift_re, lift_im
  other commands  field, value (flattened report)
"""


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _theta(text: str) -> float:
    """An angle, or an interval ``lo:hi`` whose midpoint is used."""
    try:
        if ":" in text:
            lo, hi = (float(x) for x in text.split(":"))
            if hi < lo:
                hi += 2 * math.pi
            return 0.5 * (lo + hi)
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an angle or lo:hi interval: {text!r}") from None


def _add_out(p):
    p.add_argument("--out", type=Path, help="output file (.json, .csv or .svg); stdout JSON if omitted")
    p.add_argument("--seed", type=int, default=0, help="master seed for randomized steps (default 0)")


def _add_system(p, required=True):
    p.add_argument("--system", required=required,
                   help="bundled name (cyclic, pants, dense, reef_point, ...) or a domain/system JSON file")
    p.add_argument("--levels", type=int, default=None, help="level horizon for infinite systems")


def _add_covering(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--annulus", type=float, metavar="R", help="round annulus 1/R < |z| < R")
    g.add_argument("--punctured", action="store_true", help="punctured unit disk")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boundary-lab",
        description="Boundary behaviour of universal coverings of plane domains.",
        epilog=CSV_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("classify", help="radial type of a boundary point")
    _add_system(p, required=False)
    _add_covering(p)
    p.add_argument("--theta", type=_theta, required=True, help="angle, or lo:hi to classify an interval midpoint")
    p.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
    _add_out(p)

    p = sub.add_parser("limit-set", help="cover of the limit set by orbit arcs")
    _add_system(p)
    p.add_argument("--depth", type=int, default=6)
    _add_out(p)

    p = sub.add_parser("depth", help="depth sequence of a boundary point")
    _add_system(p)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
    _add_out(p)

    p = sub.add_parser("prime-end", help="prime end at an escaping point, or the quotient count")
    _add_system(p)
    p.add_argument("--theta", type=float)
    p.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
    p.add_argument("--variant", type=int, choices=(0, 1), default=0, help="which admissible chain to build")
    p.add_argument("--quotient", action="store_true", help="count prime-end classes up to the group action")
    _add_out(p)

    p = sub.add_parser("true-crosscut", help="search for a true crosscut (Cantor limit set)")
    _add_system(p)
    p.add_argument("--depth", type=int, default=12)
    _add_out(p)

    p = sub.add_parser("cover", help="image of a radius under an explicit covering")
    _add_covering(p)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--samples", type=int, default=40)
    _add_out(p)

    p = sub.add_parser("lift", help="lift a closed curve to the disk")
    _add_covering(p)
    p.add_argument("--loops", type=int, default=1, help="turns around the core circle (ignored with --curve)")
    p.add_argument("--curve", type=Path, help="CSV with columns re, im; must start at the base point")
    p.add_argument("--per-loop", type=int, default=64)
    _add_out(p)

    p = sub.add_parser("correspond", help="landing points of lifts differing by k core loops")
    _add_covering(p)
    p.add_argument("--phi", type=float, default=0.0, help="angle of the boundary point p")
    p.add_argument("--circle", choices=("outer", "inner"), default="outer")
    p.add_argument("--k", type=int, default=1)
    _add_out(p)

    p = sub.add_parser("harmonic", help="harmonic measure of the inner annulus circle")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--annulus", type=float, metavar="R")
    g.add_argument("--system", help="fat_cantor or a domain file of an annulus; the annulus bound is reported")
    p.add_argument("--z", type=_complex, default=1.0)
    p.add_argument("--mc", type=int, metavar="N", help="Monte Carlo with N walks instead of the closed form")
    _add_out(p)

    p = sub.add_parser("render", help="SVG picture of a system or an example domain")
    _add_system(p)
    p.add_argument("--depth", type=int, default=4)
    _add_out(p)
    return parser


# --------------------------------------------------------------------------- helpers


def _system(args) -> SchottkySystem:
    dom = resolve(args.system)
    if not isinstance(dom, SchottkySystem):
        raise InvalidParameter(f"{args.system!r} is not a pairing system")
    return dom


def _covering(args) -> ExplicitCovering:
    if getattr(args, "annulus", None) is not None:
        return build_annulus_covering(args.annulus)
    if getattr(args, "punctured", False):
        return build_punctured_disk_covering()
    if getattr(args, "system", None):
        dom = resolve(args.system)
        if isinstance(dom, ExplicitCovering):
            return dom
    raise InvalidParameter("give --annulus R or --punctured")


def _radial_report(cov, theta, samples):
    trace = radial_trace(cov, theta, samples)
    return reports.RadialReport(cov, trace, classify_radial(cov, theta, samples), radial_limit(cov, theta))


def _read_curve(path: Path) -> np.ndarray:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return data[:, 0] + 1j * data[:, 1]


# --------------------------------------------------------------------------- commands


def cmd_classify(args):
    if args.system is None and (args.annulus is not None or args.punctured):
        rep = _radial_report(_covering(args), args.theta, 40)
        return rep, f"theta={args.theta:g} radial={rep.verdict.value}", None
    if args.system is None:
        raise InvalidParameter("give --system, --annulus R or --punctured")
    dom = resolve(args.system)
    if isinstance(dom, ExplicitCovering):
        rep = _radial_report(dom, args.theta, 40)
        return rep, f"theta={args.theta:g} radial={rep.verdict.value}", None
    if not isinstance(dom, SchottkySystem):
        raise InvalidParameter(f"{args.system!r} is not a pairing system or covering")
    rep = classify_point(dom, args.theta, args.horizon, args.levels)
    return rep, f"theta={args.theta:g} radial={rep.radial_type.value} depth={rep.depth_class.value}", None


def cmd_limit_set(args):
    system = _system(args)
    cover = limit_set_cover(system, args.depth, args.levels)
    svg = reports.svg_limit_set(system, args.depth, args.levels) if _wants_svg(args) else None
    return cover, f"depth={args.depth} arcs={len(cover.arcs)} total_length={cover.total_length:.6g}", svg


def cmd_depth(args):
    seq = depth_sequence(_system(args), args.theta, args.horizon, args.levels)
    head = " ".join(map(str, seq.d[:12]))
    return seq, f"theta={args.theta:g} depths={head}{' ...' if len(seq.d) > 12 else ''} stop={seq.stop}", None


def cmd_prime_end(args):
    system = _system(args)
    if args.quotient:
        q = prime_end_quotient_count(system, levels=args.levels)
        return q, f"quotient classes={q.count} exact={q.exact}", None
    if args.theta is None:
        raise InvalidParameter("give --theta or --quotient")
    pe = classify_prime_end(system, args.theta, args.horizon, args.levels, args.variant)
    return pe, f"theta={args.theta:g} prime_end={pe.cls.value} impression={pe.impression.kind}", None


def cmd_true_crosscut(args):
    rep = detect_true_crosscut(_system(args), args.depth)
    note = f" ({rep.note})" if rep.note else ""
    return rep, f"verdict={rep.verdict.value}{note}", None


def cmd_cover(args):
    cov = _covering(args)
    rep = _radial_report(cov, args.theta, args.samples)
    svg = reports.svg_curve(cov, rep.trace.values, f"image of the radius at {args.theta:g}") if _wants_svg(args) else None
    return rep, f"theta={args.theta:g} radial={rep.verdict.value}", svg


def cmd_lift(args):
    cov = _covering(args)
    base = complex(cov(0.0))
    if args.curve is not None:
        curve = _read_curve(args.curve)
    else:
        s = np.linspace(0.0, 1.0, max(1, abs(args.loops)) * args.per_loop + 1)
        curve = base * np.exp(1j * 2 * math.pi * args.loops * s)
    lifted = lift_curve(cov, curve, 0j)
    rep = reports.LiftReport(cov, curve, lifted)
    svg = reports.svg_curve(cov, curve, "lifted curve") if _wants_svg(args) else None
    return rep, f"samples={len(curve)} endpoint={lifted[-1].real:.6g}{lifted[-1].imag:+.6g}i", svg


def cmd_correspond(args):
    cov = _covering(args)
    if cov.kind == "annulus":
        r = cov.R if args.circle == "outer" else 1.0 / cov.R
    else:
        r = 1.0 if args.circle == "outer" else 0.0
    rep = correspondence_check(cov, r * cmath.exp(1j * args.phi), args.k)
    return rep, f"k={args.k} discrepancy={rep.discrepancy:.3g} passed={rep.passed}", None


def cmd_harmonic(args):
    R = args.annulus
    if R is None:
        dom = resolve(args.system)
        if isinstance(dom, ExampleDomain) and dom.annulus_R is not None:
            R = dom.annulus_R
        elif isinstance(dom, ExplicitCovering) and dom.kind == "annulus":
            R = dom.R
        else:
            raise InvalidParameter(f"{args.system!r} has no annulus to measure")
    if args.mc:
        est = harmonic_measure_annulus(R, args.z, "monte_carlo", args.mc, args.seed)
        line = f"omega={est.value:.6f} +- {est.stderr:.6f} ({est.n_walks} walks)"
    else:
        est = harmonic_measure_annulus(R, args.z)
        line = f"omega={est.value:.12g} (closed form)"
    return est, line, None


def cmd_render(args):
    dom = resolve(args.system)
    if isinstance(dom, ExampleDomain):
        return dom, f"example {dom.name}", reports.svg_example(dom)
    if not isinstance(dom, SchottkySystem):
        raise InvalidParameter(f"{args.system!r} cannot be rendered; use cover for explicit coverings")
    svg = reports.svg_geodesics(dom, args.depth, args.levels)
    levels = args.levels if args.levels is not None else dom.resolve_levels(None)
    return reports.SystemReport(dom, levels), f"rendered {dom.name or 'system'} to depth {args.depth}", svg


COMMANDS = {
    "classify": cmd_classify,
    "limit-set": cmd_limit_set,
    "depth": cmd_depth,
    "prime-end": cmd_prime_end,
    "true-crosscut": cmd_true_crosscut,
    "cover": cmd_cover,
    "lift": cmd_lift,
    "correspond": cmd_correspond,
    "harmonic": cmd_harmonic,
    "render": cmd_render,
}


def _wants_svg(args) -> bool:
    return args.out is not None and args.out.suffix.lower() == ".svg"


def _params(args) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k == "command" or v is None or v is False:
            continue
        if isinstance(v, Path):
            v = v.name if k == "out" else str(v)
        elif isinstance(v, complex):
            v = [v.real, v.imag]
        out[k] = v
    out.pop("out", None)
    return out


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result, line, svg = COMMANDS[args.command](args)
        doc = reports.envelope(args.command, _params(args), result)
        if args.out is None:
            sys.stdout.write(reports.dumps(doc))
        else:
            reports.write(doc, result, args.out, svg)
    except BoundaryLabError as exc:
        print(f"boundary-lab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"boundary-lab: {exc}", file=sys.stderr)
        return 1
    print(line, file=sys.stderr)
    return 0


def main() -> None:
    sys.exit(run())
