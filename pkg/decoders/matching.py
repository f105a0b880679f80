"""
Decodificadores subyacentes: MWPM exacto y decodificador trivial.

Las detecciones de vértice se corrigen con cadenas Z sobre la red primal
y las de cara con cadenas X sobre la red dual; ambos pasos son
independientes (las correlaciones de Y se ignoran).
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from config.config import config
from decoders.blossom import min_weight_perfect_matching
from toric.geometry import PauliChain, Syndrome
from utils.exceptions import ArgumentError, InvalidSyndromeError
from utils.logger import logger


class SiteKind(Enum):
    """Tipo de sitio donde aparece una detección"""
    VERTEX = "vertex"
    FACE = "face"


@dataclass(frozen=True)
class Site:
    """Vértice o cara por índice lineal r·L+c"""
    kind: SiteKind
    index: int


@dataclass(frozen=True)
class DetectionList:
    """Detecciones de un síndrome en orden ascendente"""
    vertex_detections: tuple
    plaquette_detections: tuple

    @classmethod
    def from_syndrome(cls, syndrome):
        detections = cls(syndrome.vertex_detections(), syndrome.plaquette_detections())
        if len(detections.vertex_detections) % 2 or len(detections.plaquette_detections) % 2:
            raise InvalidSyndromeError(
                f"Número impar de detecciones: {len(detections.vertex_detections)} de vértice, "
                f"{len(detections.plaquette_detections)} de cara"
            )
        return detections

    def of_kind(self, kind):
        return self.vertex_detections if kind == SiteKind.VERTEX else self.plaquette_detections


def _site_distance(L, a, b):
    ra, ca = divmod(a, L)
    rb, cb = divmod(b, L)
    dr = abs(ra - rb)
    dc = abs(ca - cb)
    return min(dr, L - dr) + min(dc, L - dc)


def torus_distance(geometry, a, b):
    """Distancia taxicab con borde periódico entre dos sitios del mismo tipo"""
    if a.kind != b.kind:
        raise ArgumentError(f"Sitios de tipos distintos: {a.kind.value} y {b.kind.value}")
    for site in (a, b):
        geometry.site_coords(site.index)
    return _site_distance(geometry.L, a.index, b.index)


def _steps(L, start, end):
    """
    Dirección y número de pasos sobre un eje periódico.
    Se elige el sentido más corto; en empate, el que no cruza el borde.
    """
    forward = (end - start) % L
    backward = (start - end) % L
    if forward < backward or (forward == backward and end >= start):
        return 1, forward
    return -1, backward


@lru_cache(maxsize=config.MATCHING_CACHE_SIZE)
def _path_edges(L, kind, a, b):
    """Aristas del camino más corto: primero filas, después columnas"""
    n_sites = L * L
    r, c = divmod(a, L)
    rb, cb = divmod(b, L)
    edges = []

    step, count = _steps(L, r, rb)
    for _ in range(count):
        if kind == SiteKind.VERTEX:
            # arista vertical entre (r,c) y (r±1,c)
            row = r if step == 1 else r - 1
            edges.append(n_sites + (row % L) * L + c)
        else:
            # arista horizontal compartida por las caras (r,c) y (r±1,c)
            row = r + 1 if step == 1 else r
            edges.append((row % L) * L + c)
        r = (r + step) % L

    step, count = _steps(L, c, cb)
    for _ in range(count):
        if kind == SiteKind.VERTEX:
            col = c if step == 1 else c - 1
            edges.append(r * L + (col % L))
        else:
            col = c + 1 if step == 1 else c
            edges.append(n_sites + r * L + (col % L))
        c = (c + step) % L

    return tuple(edges)


def shortest_path_chain(geometry, a, b):
    """
    Cadena de peso torus_distance(a, b) cuyo síndrome es exactamente {a, b}:
    Z entre vértices, X entre caras.
    """
    torus_distance(geometry, a, b)
    edges = _path_edges(geometry.L, a.kind, a.index, b.index)
    if a.kind == SiteKind.VERTEX:
        return PauliChain.from_edges(geometry.n_edges, z_edges=edges)
    return PauliChain.from_edges(geometry.n_edges, x_edges=edges)


def matching_weight(geometry, pairs):
    """Suma de distancias toroidales de un emparejamiento de índices de sitio"""
    return sum(_site_distance(geometry.L, a, b) for a, b in pairs)


@lru_cache(maxsize=config.MATCHING_CACHE_SIZE)
def _mwpm_pairs(L, detections):
    n = len(detections)
    if n == 0:
        return ()
    coords = np.array([divmod(d, L) for d in detections], dtype=np.int64)
    delta = np.abs(coords[:, None, :] - coords[None, :, :])
    distances = np.minimum(delta, L - delta).sum(axis=2)
    pairs = min_weight_perfect_matching(distances.tolist())
    return tuple((detections[i], detections[j]) for i, j in pairs)


class UnderlyingDecoder(ABC):
    """
    Decodificador que propone una recuperación compatible con el síndrome.
    Sin estado tras la construcción; seguro para llamadas concurrentes.
    """

    name = "base"

    def __init__(self, geometry):
        self.geometry = geometry

    @abstractmethod
    def pair(self, detections):
        """Empareja una lista ascendente de detecciones de un mismo tipo"""

    def match(self, syndrome):
        """
        Returns:
            dict: {SiteKind: lista de pares (a, b) de índices de sitio}
        """
        if len(syndrome) != 2 * self.geometry.n_vertices:
            raise ArgumentError(
                f"Síndrome de longitud {len(syndrome)} para L={self.geometry.L}"
            )
        detections = DetectionList.from_syndrome(syndrome)
        return {kind: self.pair(detections.of_kind(kind)) for kind in SiteKind}

    def decode(self, syndrome):
        L = self.geometry.L
        x = np.zeros(self.geometry.n_edges, dtype=np.uint8)
        z = np.zeros(self.geometry.n_edges, dtype=np.uint8)
        for kind, pairs in self.match(syndrome).items():
            target = z if kind == SiteKind.VERTEX else x
            for a, b in pairs:
                edges = _path_edges(L, kind, a, b)
                if edges:
                    target[list(edges)] ^= 1
        return PauliChain(x, z)

    def __call__(self, syndrome):
        return self.decode(syndrome)

    def __repr__(self):
        return f"{type(self).__name__}(L={self.geometry.L})"


class MWPMDecoder(UnderlyingDecoder):
    """Emparejamiento perfecto de peso mínimo exacto por tipo de detección"""

    name = "mwpm"

    def pair(self, detections):
        return list(_mwpm_pairs(self.geometry.L, tuple(detections)))


class TrivialDecoder(UnderlyingDecoder):
    """Une la 1ª detección con la 2ª, la 3ª con la 4ª, ... en orden de enumeración"""

    name = "trivial"

    def pair(self, detections):
        return [(detections[i], detections[i + 1]) for i in range(0, len(detections), 2)]


DECODERS = {
    MWPMDecoder.name: MWPMDecoder,
    TrivialDecoder.name: TrivialDecoder,
}


def make_decoder(name, geometry):
    """Crea un decodificador subyacente por nombre ('mwpm' o 'trivial')"""
    try:
        decoder_class = DECODERS[name]
    except KeyError:
        raise ArgumentError(f"Decodificador desconocido '{name}'; opciones: {sorted(DECODERS)}") from None
    logger.debug(f"Decodificador {name} creado para L={geometry.L}")
    return decoder_class(geometry)


def mwpm_decode(geometry, syndrome):
    return MWPMDecoder(geometry).decode(syndrome)


def trivial_decode(geometry, syndrome):
    return TrivialDecoder(geometry).decode(syndrome)


def random_syndrome(geometry, rng, max_detections=None, kinds=(SiteKind.VERTEX, SiteKind.FACE)):
    """
    Síndrome válido aleatorio: para cada tipo, un número par de detecciones
    distintas (hasta `max_detections`) en posiciones uniformes.
    """
    n_sites = geometry.n_vertices
    limit = n_sites if max_detections is None else min(max_detections, n_sites)
    bits = np.zeros(2 * n_sites, dtype=np.uint8)
    for kind in kinds:
        count = 2 * int(rng.integers(0, limit // 2 + 1))
        sites = rng.choice(n_sites, size=count, replace=False)
        offset = 0 if kind == SiteKind.VERTEX else n_sites
        bits[offset + sites] = 1
    return Syndrome(bits)
