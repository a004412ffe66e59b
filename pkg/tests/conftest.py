import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from boundary_lab.systems import (
    branching_system, crossed_system, cyclic_system, dense_puncture_system, pants_system, parabolic_system,
    trivial_system,
)

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# acceptance results, printed at the end of the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def cyclic():
    return cyclic_system()


@pytest.fixture
def pants():
    return pants_system()


@pytest.fixture
def crossed():
    return crossed_system()


@pytest.fixture
def parabolic():
    return parabolic_system()


@pytest.fixture
def trivial():
    return trivial_system()


@pytest.fixture(scope="session")
def dense():
    return dense_puncture_system()


@pytest.fixture(scope="session")
def branching():
    return branching_system()


def random_disk_points(rng, n, rmax=0.95):
    r = rmax * np.sqrt(rng.uniform(0.0, 1.0, n))
    return r * np.exp(2j * math.pi * rng.uniform(0.0, 1.0, n))
