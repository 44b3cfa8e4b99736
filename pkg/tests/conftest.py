"""
Shared fixtures: Hopf models, seeded samples and homothety fields.
"""

import numpy as np
import pytest

from lcklab.config.logging_config import setup_logging
from lcklab.flows.quadrature import QuadratureRule
from lcklab.forms.sampling import sample_points
from lcklab.models.hopf import homothety_field, killing_rotation, make_classical_hopf, make_linear_hopf

SEED = 20240611
KILLING_RATES = (0.5, -0.25)

setup_logging(level="WARNING")


@pytest.fixture(scope="session")
def hopf():
    """C^2 minus 0 / <z -> z / 2>"""
    return make_classical_hopf(2, 0.5)


@pytest.fixture(scope="session")
def hopf3():
    return make_classical_hopf(3, 0.4 + 0.3j)


@pytest.fixture(scope="session")
def diagonal_hopf():
    """Non-similarity contraction diag(0.5, 0.25): no flat catalog."""
    return make_linear_hopf(2, np.diag([0.5, 0.5, 0.25, 0.25]))


@pytest.fixture(scope="session")
def points():
    return sample_points(2, 24, SEED)


@pytest.fixture(scope="session")
def unit_points():
    """Moderate radii for finite-difference oracles."""
    return sample_points(2, 12, SEED + 1, radius_min=0.5, radius_max=2.0)


@pytest.fixture(scope="session")
def kahler(hopf):
    return hopf.require_catalog().kahler_form


@pytest.fixture(scope="session")
def homothety(hopf):
    """A = E + diag(0.5 i, -0.25 i), lambda = 2."""
    return homothety_field(hopf, 2.0, killing_part=killing_rotation(2, KILLING_RATES))


@pytest.fixture(scope="session")
def euler_homothety(hopf):
    """Pure Euler homothety A = E, lambda = 2."""
    return homothety_field(hopf, 2.0)


@pytest.fixture(scope="session")
def fine_rule():
    return QuadratureRule(256)
