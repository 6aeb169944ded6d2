import numpy as np
import pytest

import weakvalues as wv

HALF_SQRT3 = np.sqrt(3.0) / 2.0


@pytest.fixture(scope="session")
def great_circle_pair():
    """Pure pre/post pair at 120 degrees from |0> and from each other."""
    psi = wv.state_vector([0.5, HALF_SQRT3])
    phi = wv.state_vector([-0.5, HALF_SQRT3])
    return psi, phi


@pytest.fixture(scope="session")
def great_circle_densities(great_circle_pair):
    psi, phi = great_circle_pair
    return wv.pure_to_density(psi), wv.pure_to_density(phi)


@pytest.fixture(scope="session")
def proj_zero():
    """Projector |0><0| as a validated observable (eigenvalues 0 then 1)."""
    return wv.eigensystem(np.diag([1.0, 0.0]))


@pytest.fixture(scope="session")
def proj_one():
    return wv.eigensystem(np.diag([0.0, 1.0]))


@pytest.fixture(scope="session")
def coherent_pair():
    """The mixed coherent pair whose g distribution stays in [0, 1]."""
    rho_psi = wv.validate_density(
        [[0.75, np.sqrt(3.0 / 32.0)], [np.sqrt(3.0 / 32.0), 0.25]]
    )
    rho_phi = wv.validate_density(
        [[0.75, np.sqrt(3.0) / 8.0], [np.sqrt(3.0) / 8.0, 0.25]]
    )
    return rho_psi, rho_phi


def random_pure(rng, d):
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def random_mixed(rng, d):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    m = g @ g.conj().T
    return m / np.trace(m).real
