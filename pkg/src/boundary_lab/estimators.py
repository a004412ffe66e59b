"""scikit-learn style wrappers around the point classifiers.

Nothing here is learned: ``fit`` builds and validates the geometric model
from the constructor parameters, and ``predict`` labels boundary angles (or
interior points, for the harmonic estimator).  The wrappers exist so the
classifiers drop into pipelines, ``clone`` and parameter grids.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from .covering import RadialVerdict, build_annulus_covering, build_punctured_disk_covering, classify_radial
from .deck_group import SchottkySystem, validate
from .exhaustion import DEFAULT_HORIZON, DepthClass, RadialType, classify_point
from .harmonic import harmonic_measure_annulus
from .systems import named_system


def _angles(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 2:
        if X.shape[1] != 1:
            raise ValueError(f"expected one column of angles, got shape {X.shape}")
        X = X[:, 0]
    return X.ravel()


class BoundaryPointClassifier(ClassifierMixin, BaseEstimator):
    """Radial type of boundary angles for a pairing system.

    ``system`` is a :class:`SchottkySystem` or the name of a bundled one.
    After ``fit`` the attribute ``depth_classes_`` of the last ``predict``
    call holds the matching depth-sequence classes.
    """

    def __init__(self, system="cyclic", horizon: int = DEFAULT_HORIZON, levels=None):
        self.system = system
        self.horizon = horizon
        self.levels = levels

    def fit(self, X=None, y=None):
        system = named_system(self.system) if isinstance(self.system, str) else self.system
        if not isinstance(system, SchottkySystem):
            raise TypeError("system must be a SchottkySystem or a bundled system name")
        if system.is_finite:
            self.certificate_ = validate(system, self.levels)
        self.system_ = system
        self.classes_ = np.array([t.value for t in RadialType])
        return self

    def predict(self, X):
        check_is_fitted(self, "system_")
        reports = [classify_point(self.system_, float(t), self.horizon, self.levels) for t in _angles(X)]
        self.depth_classes_ = np.array([r.depth_class.value for r in reports])
        return np.array([r.radial_type.value for r in reports])

    def predict_depth_class(self, X):
        self.predict(X)
        return self.depth_classes_

    @property
    def depth_class_names(self):
        return [c.value for c in DepthClass]


class RadialBehaviourClassifier(ClassifierMixin, BaseEstimator):
    """Escaping or bounded radii of an explicit annulus or punctured-disk covering."""

    def __init__(self, kind: str = "annulus", R: float = 2.0, horizon: int = 40, tol: float = 1e-3):
        self.kind = kind
        self.R = R
        self.horizon = horizon
        self.tol = tol

    def fit(self, X=None, y=None):
        if self.kind == "annulus":
            self.covering_ = build_annulus_covering(self.R)
        elif self.kind == "punctured_disk":
            self.covering_ = build_punctured_disk_covering()
        else:
            raise ValueError(f"kind must be 'annulus' or 'punctured_disk', got {self.kind!r}")
        self.classes_ = np.array([v.value for v in RadialVerdict])
        return self

    def predict(self, X):
        check_is_fitted(self, "covering_")
        return np.array([
            classify_radial(self.covering_, float(t), self.horizon, self.tol).value for t in _angles(X)
        ])


class HarmonicMeasureEstimator(RegressorMixin, BaseEstimator):
    """Harmonic measure of the inner circle of ``{1/R < |z| < R}`` at each row of ``X``.

    Rows of ``X`` are ``(x, y)`` pairs.  ``predict`` returns values and
    stores the matching standard errors in ``stderr_``.
    """

    def __init__(self, R: float = 2.0, method: str = "closed_form", n_walks: int = 100_000, seed: int = 0):
        self.R = R
        self.method = method
        self.n_walks = n_walks
        self.seed = seed

    def fit(self, X=None, y=None):
        harmonic_measure_annulus(self.R, 1.0)  # validates R
        self.R_ = float(self.R)
        return self

    def predict(self, X):
        check_is_fitted(self, "R_")
        X = np.atleast_2d(np.asarray(X, dtype=float))
        out, err = [], []
        for i, (x, y) in enumerate(X):
            est = harmonic_measure_annulus(self.R_, complex(x, y), self.method, self.n_walks, self.seed + i)
            out.append(est.value)
            err.append(est.stderr)
        self.stderr_ = np.array(err)
        return np.array(out)
