import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from boundary_lab.estimators import BoundaryPointClassifier, HarmonicMeasureEstimator, RadialBehaviourClassifier


def test_clone_keeps_parameters():
    est = BoundaryPointClassifier("pants", horizon=20)
    assert clone(est).get_params() == est.get_params()
    assert set(RadialBehaviourClassifier().get_params()) == {"kind", "R", "horizon", "tol"}


def test_predict_before_fit_raises():
    with pytest.raises(NotFittedError):
        BoundaryPointClassifier().predict([[0.0]])


def test_boundary_point_classifier():
    clf = BoundaryPointClassifier("cyclic").fit()
    labels = clf.predict(np.array([[0.0], [math.pi / 2], [math.pi]]))
    assert list(labels) == ["bounded", "escaping", "bounded"]
    assert list(clf.depth_classes_) == ["finite", "infinite", "finite"]
    assert "oscillating" in clf.classes_.tolist() or "bungee" in clf.classes_.tolist()


def test_boundary_point_classifier_rejects_bad_system():
    with pytest.raises(TypeError):
        BoundaryPointClassifier(system=3).fit()


def test_radial_behaviour_classifier():
    clf = RadialBehaviourClassifier("annulus", R=2.0).fit()
    assert list(clf.predict([0.0, math.pi / 3, math.pi])) == ["bounded", "escaping", "bounded"]
    assert list(RadialBehaviourClassifier("punctured_disk").fit().predict([math.pi])) == ["escaping"]
    with pytest.raises(ValueError):
        RadialBehaviourClassifier("torus").fit()


def test_harmonic_estimator_scores_against_closed_form():
    X = np.array([[1.0, 0.0], [0.0, 0.7], [1.5, 0.0]])
    y = (math.log(2.0) - np.log(np.hypot(X[:, 0], X[:, 1]))) / (2 * math.log(2.0))
    est = HarmonicMeasureEstimator(2.0).fit(X, y)
    assert est.score(X, y) == pytest.approx(1.0)
    mc = HarmonicMeasureEstimator(2.0, "monte_carlo", n_walks=5_000).fit()
    pred = mc.predict(X)
    assert np.all(np.abs(pred - y) < 5 * mc.stderr_ + 1e-3)
