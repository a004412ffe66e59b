"""Boundary behaviour of universal covering maps of multiply connected domains.

The most used names are re-exported here; the submodules hold the rest.
"""
from .covering import (
    ExplicitCovering, RadialVerdict, build_annulus_covering, build_punctured_disk_covering, classify_radial,
    correspondence_check, lift_curve, radial_trace,
)
from .deck_group import (
    GeneratorSpec, SchottkySystem, code_boundary_point, limit_set_cover, orbit, pairing_map, reduced_words,
    validate,
)
from .errors import BoundaryLabError
from .exhaustion import (
    BoundaryAddress, DepthClass, RadialType, alpha_image, associated_addresses, classify_depth, classify_point,
    construct_bungee_point, depth_sequence, radial_type,
)
from .harmonic import HarmonicEstimate, harmonic_measure_annulus
from .hyperbolic import Crosscut, Geodesic, geodesic_between, geodesic_through, hyp_distance
from .moebius import DiskAutomorphism, MapClass, MoebiusMap, classify, compose, fixed_points
from .prime_ends import (
    PrimeEndClass, TrueCrosscutVerdict, classify_prime_end, detect_true_crosscut, prime_end_quotient_count,
    rectify,
)
from .systems import named_system

__version__ = "0.1.0"
