import numpy as np
import pytest

from kerrforge.potentials import HolomorphicPotential, PotentialField
from kerrforge.taylor import Jet


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def phi_round():
    """F = -1 generator: phi = -(1-|z|^2)/(1+|z|^2), the basic kappa=+1 solution."""
    return HolomorphicPotential(1, [-1.0])


@pytest.fixture
def phi_round_linear():
    """F = -1 + z/4, kappa=+1."""
    return HolomorphicPotential(1, [-1.0, 0.25])


@pytest.fixture
def phi_disk():
    """F = 1, kappa=-1: phi = (1+|z|^2)/(1-|z|^2)."""
    return HolomorphicPotential(-1, [1.0])


@pytest.fixture
def phi_disk_quadratic():
    """F = 1 + z^2/8, kappa=-1."""
    return HolomorphicPotential(-1, [1.0, 0.0, 0.125])


class PolyPotential(PotentialField):
    """An analytic potential that does NOT solve the disk equation.

    Used where the frame machinery must be exercised off the solution
    manifold (the common-equation identity check).  Jets are exact since
    the function is polynomial.
    """

    kappa = 1
    radius = 1.0

    def jet(self, x, y):
        X = Jet.coordinate(x, y, 0)
        Y = Jet.coordinate(x, y, 1)
        return (Jet.const(-1.0, np.broadcast_shapes(np.shape(x), np.shape(y)))
                + 0.05 * (X * X * X + 2.0 * (X * X * Y))
                + 0.1 * (X * X + Y * Y))


@pytest.fixture
def phi_poly():
    return PolyPotential()
