"""
Fixtures compartidas de la batería de pruebas
"""
import numpy as np
import pytest

from toric.geometry import PauliChain, ToricGeometry
from toric.noise import make_rng


@pytest.fixture
def geometry2():
    return ToricGeometry(2)


@pytest.fixture
def geometry3():
    return ToricGeometry(3)


@pytest.fixture
def geometry5():
    return ToricGeometry(5)


@pytest.fixture
def rng():
    return make_rng(12345)


def random_chain(geometry, rng, density=0.3):
    """Cadena de Pauli aleatoria con cada componente activa con probabilidad `density`"""
    x = (rng.random(geometry.n_edges) < density).astype(np.uint8)
    z = (rng.random(geometry.n_edges) < density).astype(np.uint8)
    return PauliChain(x, z)
