"""Small argument checkers in the spirit of sklearn.utils.validation."""
import math
import numbers

import numpy as np

from .errors import InvalidParameter

TWO_PI = 2.0 * math.pi


def as_complex(z, name="z"):
    if isinstance(z, numbers.Complex):
        w = complex(z)
    else:
        try:
            w = complex(z)
        except (TypeError, ValueError) as exc:
            raise InvalidParameter(f"{name} must be a complex number, got {z!r}") from exc
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise InvalidParameter(f"{name} must be finite, got {z!r}")
    return w


def check_disk_point(z, name="z"):
    w = as_complex(z, name)
    if abs(w) >= 1.0:
        raise InvalidParameter(f"{name}={w!r} is not inside the unit disk")
    return w


def check_angle(theta, name="theta"):
    try:
        t = float(theta)
    except (TypeError, ValueError) as exc:
        raise InvalidParameter(f"{name} must be a real angle, got {theta!r}") from exc
    if not math.isfinite(t):
        raise InvalidParameter(f"{name} must be finite")
    return t % TWO_PI


def check_positive(x, name, strict=True):
    try:
        v = float(x)
    except (TypeError, ValueError) as exc:
        raise InvalidParameter(f"{name} must be a real number, got {x!r}") from exc
    if not math.isfinite(v) or (v <= 0 if strict else v < 0):
        raise InvalidParameter(f"{name} must be {'positive' if strict else 'nonnegative'}, got {x!r}")
    return v


def check_int(n, name, minimum=0):
    if isinstance(n, bool) or not isinstance(n, numbers.Integral):
        raise InvalidParameter(f"{name} must be an integer, got {n!r}")
    if n < minimum:
        raise InvalidParameter(f"{name} must be >= {minimum}, got {n}")
    return int(n)


def check_angles(thetas, name="thetas"):
    arr = np.asarray(thetas, dtype=float).ravel()
    if not np.all(np.isfinite(arr)):
        raise InvalidParameter(f"{name} must be finite")
    return np.mod(arr, TWO_PI)
