"""Harmonic measure of the inner circle of a round annulus.

``u(z) = (log R - log|z|) / (2 log R)`` is harmonic in ``1/R < |z| < R``, equals
1 on the inner circle and 0 on the outer one, so ``u(1) = 1/2`` for every
``R``.  The Monte Carlo estimate runs walk-on-spheres: from ``z`` jump to a
uniform point on the largest circle inside the annulus, stop once within the
absorption distance of a boundary circle, and count inner-circle hits.
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._config import thread_count
from ._validation import as_complex, check_int, check_positive
from .errors import InvalidParameter

#: Walks stop when this close to a boundary circle.
ABSORPTION = 1e-6
#: Walks simulated per vectorized chunk; each chunk gets its own spawned seed.
CHUNK = 8192
_MAX_STEPS = 10_000


class Method(enum.Enum):
    CLOSED_FORM = "closed_form"
    MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class HarmonicEstimate:
    value: float
    method: Method
    stderr: float = 0.0
    n_walks: int = 0
    absorption: float = 0.0
    mean_steps: float = 0.0

    def to_json(self):
        return {
            "value": self.value,
            "method": self.method.value,
            "stderr": self.stderr,
            "n_walks": self.n_walks,
            "absorption": self.absorption,
            "mean_steps": self.mean_steps,
        }


def _closed_form(R: float, r: float) -> float:
    return (math.log(R) - math.log(r)) / (2.0 * math.log(R))


def _walk_chunk(R: float, z: complex, n: int, seed_seq: np.random.SeedSequence, eps: float):
    rng = np.random.default_rng(seed_seq)
    inner = 1.0 / R
    pos = np.full(n, z, dtype=complex)
    alive = np.ones(n, dtype=bool)
    hit_inner = np.zeros(n, dtype=bool)
    steps = np.zeros(n, dtype=np.int64)
    for _ in range(_MAX_STEPS):
        idx = np.flatnonzero(alive)
        if idx.size == 0:
            break
        r = np.abs(pos[idx])
        d_in = r - inner
        d_out = R - r
        rho = np.minimum(d_in, d_out)
        done = rho < eps
        if np.any(done):
            hit_inner[idx[done]] = d_in[done] <= d_out[done]
            alive[idx[done]] = False
        move = idx[~done]
        if move.size:
            phi = rng.uniform(0.0, 2.0 * math.pi, move.size)
            pos[move] += rho[~done] * np.exp(1j * phi)
            steps[move] += 1
    if np.any(alive):
        # TODO: raise _MAX_STEPS adaptively if a walk ever gets here; none has in testing
        hit_inner[alive] = np.abs(pos[alive]) - inner <= R - np.abs(pos[alive])
    return int(hit_inner.sum()), int(steps.sum())


def harmonic_measure_annulus(R, z=1.0, method="closed_form", n_walks: int = 100_000, seed: int = 0,
                             absorption: float = ABSORPTION) -> HarmonicEstimate:
    """Harmonic measure of ``{|w| = 1/R}`` seen from ``z`` in ``{1/R < |w| < R}``.

    The closed form also accepts ``z`` on a boundary circle, where it returns
    the boundary value.  Monte Carlo results depend only on ``seed`` and
    ``n_walks``, not on the number of threads.
    """
    R = check_positive(R, "R")
    if R <= 1.0:
        raise InvalidParameter("need R > 1")
    z = as_complex(z, "z")
    r = abs(z)
    method = Method(method) if not isinstance(method, Method) else method
    if method is Method.CLOSED_FORM:
        if not (1.0 / R - 1e-15 <= r <= R + 1e-15):
            raise InvalidParameter(f"|z|={r} is outside the closed annulus")
        return HarmonicEstimate(min(1.0, max(0.0, _closed_form(R, r))), method)
    if not 1.0 / R < r < R:
        raise InvalidParameter(f"|z|={r} is outside the annulus")
    n_walks = check_int(n_walks, "n_walks", minimum=1)
    eps = check_positive(absorption, "absorption")
    sizes = [CHUNK] * (n_walks // CHUNK) + ([n_walks % CHUNK] if n_walks % CHUNK else [])
    seeds = np.random.SeedSequence(int(seed)).spawn(len(sizes))
    jobs = list(zip(sizes, seeds))
    workers = min(thread_count(), len(jobs))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(lambda job: _walk_chunk(R, z, job[0], job[1], eps), jobs))
    else:
        parts = [_walk_chunk(R, z, n, s, eps) for n, s in jobs]
    hits = sum(h for h, _ in parts)
    steps = sum(s for _, s in parts)
    p = hits / n_walks
    stderr = math.sqrt(max(p * (1.0 - p), 1e-300) / n_walks)
    return HarmonicEstimate(p, method, stderr, n_walks, eps, steps / n_walks)
