"""
Muestreo reproducible de errores de Pauli despolarizantes.

Generador: numpy PCG64 sembrado con SeedSequence(seed, spawn_key=(bloque,)).
Cada bloque de CHUNK_SIZE muestras tiene su propio flujo, así que la
muestra i depende solo de (seed, L, p, i) y no del número de procesos.
Dentro de una muestra se consume un uniforme por arista en orden de
índice lineal ascendente.
"""
from dataclasses import dataclass

import numpy as np

from config.config import config
from toric.geometry import PauliChain
from utils.exceptions import ArgumentError


@dataclass(frozen=True)
class NoiseParams:
    """Parámetro despolarizante p y semilla de 64 bits"""
    p: float
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ArgumentError(f"p={self.p} fuera de [0, 1]")
        if not 0 <= self.seed < 2 ** 64:
            raise ArgumentError(f"La semilla {self.seed} no cabe en 64 bits")


def channel_rate_from_q(q):
    """p = 3q/4 para el canal que reemplaza el qubit por el estado mixto con probabilidad q"""
    if not 0.0 <= q <= 1.0:
        raise ArgumentError(f"q={q} fuera de [0, 1]")
    return 0.75 * q


def make_rng(seed, stream=0):
    """Flujo PCG64 independiente para (semilla, flujo)"""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=(int(stream),))))


def chunk_rng(seed, chunk_index, purpose=0):
    """Flujo del bloque `chunk_index`; `purpose` separa usos de una misma semilla"""
    return np.random.Generator(np.random.PCG64(
        np.random.SeedSequence(int(seed), spawn_key=(int(purpose), int(chunk_index)))
    ))


def _paulis_from_uniforms(u, p):
    third = p / 3.0
    x = (u < 2.0 * third).astype(np.uint8)                     # X o Y
    z = ((u >= third) & (u < p)).astype(np.uint8)              # Y o Z
    return x, z


def sample_errors(geometry, p, n, rng):
    """
    Lote de n errores: por arista identidad con prob. 1−p y X, Y, Z con p/3.

    Returns:
        tuple: (x, z) arreglos uint8 de forma (n, 2L²)
    """
    if not 0.0 <= p <= 1.0:
        raise ArgumentError(f"p={p} fuera de [0, 1]")
    u = rng.random((int(n), geometry.n_edges))
    return _paulis_from_uniforms(u, p)


def sample_error(geometry, params, rng):
    """Un error despolarizante como PauliChain"""
    x, z = sample_errors(geometry, params.p, 1, rng)
    return PauliChain(x[0], z[0])


def chunk_layout(n, chunk_size=None):
    """Lista de (índice de bloque, tamaño) que cubre n muestras"""
    chunk_size = chunk_size or config.CHUNK_SIZE
    return [(index, min(chunk_size, n - start))
            for index, start in enumerate(range(0, n, chunk_size))]


def sample_chunk(geometry, p, seed, chunk_index, size, purpose=0):
    """Errores del bloque `chunk_index` de la secuencia determinada por `seed`"""
    return sample_errors(geometry, p, size, chunk_rng(seed, chunk_index, purpose))
