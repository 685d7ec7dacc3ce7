import numpy as np
import pytest

# (z, tau) pairs inside the accuracy envelope: Im tau in [0.8, 2.0],
# z away from the lattice and from 2- and 3-torsion
STANDARD_POINTS = [
    (0.23 + 0.11j, 0.5 + 0.8j),
    (0.31 - 0.07j, -0.3 + 1.6j),
    (0.14 + 0.21j, 0.13 + 1.7j),
    (0.27 + 0.05j, 1j),
]

STANDARD_TAUS = [t for _, t in STANDARD_POINTS]


@pytest.fixture
def rng():
    return np.random.default_rng(20260814)
