"""
Simetrías del toro: traslaciones y antitransposición.

Una Transform aplica primero la antitransposición (si está activa) y
luego la traslación (dr, dc). Sobre los sitios:
- vértice (r,c) → (L−1−c, L−1−r)
- cara (r,c) → (L−2−c, L−2−r)
- h(r,c) → v(L−2−c, L−1−r) y v(r,c) → h(L−1−c, L−2−r)
Con estas fórmulas syndrome_of(T(c)) = T(syndrome_of(c)) para toda cadena.

El orden de síndromes es el lexicográfico "entero": s1 < s2 si en el
primer índice donde difieren s1 tiene el 1. Los representantes
canónicos son mínimos de ese orden.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from toric.geometry import LogicalLabel, PauliChain, Syndrome
from utils.exceptions import ArgumentError


class SymmetryMode(Enum):
    """Preprocesado del síndrome antes del decodificador"""
    NONE = "none"
    CENTER = "center"
    ALIGN = "align"


@dataclass(frozen=True)
class Transform:
    """Antitransposición opcional seguida de una traslación (dr, dc)"""
    dr: int = 0
    dc: int = 0
    antitransposed: bool = False

    @classmethod
    def identity(cls):
        return cls()

    @property
    def is_identity(self):
        return self.dr == 0 and self.dc == 0 and not self.antitransposed

    def reduced(self, L):
        return Transform(self.dr % L, self.dc % L, self.antitransposed)

    def inverse(self, L):
        if self.antitransposed:
            # (Tr(a)∘A)⁻¹ = A∘Tr(−a) = Tr(a₂, a₁)∘A
            return Transform(self.dc % L, self.dr % L, True)
        return Transform(-self.dr % L, -self.dc % L, False)

    def then(self, other, L):
        """Transformación compuesta: primero self, después other"""
        dr, dc = self.dr, self.dc
        if other.antitransposed:
            # A∘Tr(a₁, a₂) = Tr(−a₂, −a₁)∘A
            dr, dc = -self.dc, -self.dr
        return Transform(
            (other.dr + dr) % L,
            (other.dc + dc) % L,
            self.antitransposed != other.antitransposed,
        )

    def apply_syndrome(self, geometry, syndrome):
        _check_syndrome(geometry, syndrome)
        return Syndrome(transform_site_bits(self, geometry.L, syndrome.bits))

    def apply_chain(self, geometry, chain):
        if len(chain) != geometry.n_edges:
            raise ArgumentError(
                f"La cadena tiene {len(chain)} aristas y la red L={geometry.L} tiene {geometry.n_edges}"
            )
        return PauliChain(
            transform_edge_bits(self, geometry.L, chain.x),
            transform_edge_bits(self, geometry.L, chain.z),
        )


# ==================== BLOQUES L×L ====================

def _antitranspose_block(block):
    """new[r', c'] = old[L−1−c', L−1−r'] sobre los dos últimos ejes"""
    return np.flip(np.swapaxes(block, -1, -2), axis=(-2, -1))


def _split_blocks(bits, L):
    n = L * L
    lead = bits.shape[:-1]
    return bits[..., :n].reshape(lead + (L, L)), bits[..., n:].reshape(lead + (L, L))


def _join_blocks(first, second, L):
    lead = first.shape[:-2]
    n = L * L
    return np.concatenate([first.reshape(lead + (n,)), second.reshape(lead + (n,))], axis=-1)


def transform_site_bits(t, L, bits):
    """Aplica t a vectores de síndrome (último eje de longitud 2L²)"""
    bits = np.asarray(bits)
    vertices, faces = _split_blocks(bits, L)
    if t.antitransposed:
        vertices = _antitranspose_block(vertices)
        faces = np.roll(_antitranspose_block(faces), (-1, -1), axis=(-2, -1))
    if t.dr % L or t.dc % L:
        vertices = np.roll(vertices, (t.dr % L, t.dc % L), axis=(-2, -1))
        faces = np.roll(faces, (t.dr % L, t.dc % L), axis=(-2, -1))
    return _join_blocks(vertices, faces, L)


def transform_edge_bits(t, L, bits):
    """Aplica t a soportes de aristas (último eje de longitud 2L²)"""
    bits = np.asarray(bits)
    horizontal, vertical = _split_blocks(bits, L)
    if t.antitransposed:
        horizontal, vertical = (
            np.roll(_antitranspose_block(vertical), -1, axis=-1),
            np.roll(_antitranspose_block(horizontal), -1, axis=-2),
        )
    if t.dr % L or t.dc % L:
        horizontal = np.roll(horizontal, (t.dr % L, t.dc % L), axis=(-2, -1))
        vertical = np.roll(vertical, (t.dr % L, t.dc % L), axis=(-2, -1))
    return _join_blocks(horizontal, vertical, L)


def _check_syndrome(geometry, syndrome):
    if len(syndrome) != 2 * geometry.n_vertices:
        raise ArgumentError(f"Síndrome de longitud {len(syndrome)} para L={geometry.L}")


def _check_offset(value):
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ArgumentError(f"Desplazamiento no entero: {value!r}")


# ==================== OPERACIONES BÁSICAS ====================

def syndrome_less(s1, s2):
    """Orden estricto: en la primera diferencia, s1 tiene el 1"""
    b1 = s1.bits if isinstance(s1, Syndrome) else np.asarray(s1, dtype=np.uint8)
    b2 = s2.bits if isinstance(s2, Syndrome) else np.asarray(s2, dtype=np.uint8)
    if b1.shape != b2.shape:
        raise ArgumentError(f"Síndromes de longitudes distintas: {b1.shape} vs {b2.shape}")
    differences = np.flatnonzero(b1 != b2)
    if len(differences) == 0:
        return False
    return bool(b1[differences[0]])


def translate_syndrome(geometry, syndrome, dr, dc):
    _check_offset(dr)
    _check_offset(dc)
    return Transform(int(dr) % geometry.L, int(dc) % geometry.L).apply_syndrome(geometry, syndrome)


def translate_chain(geometry, chain, dr, dc):
    _check_offset(dr)
    _check_offset(dc)
    return Transform(int(dr) % geometry.L, int(dc) % geometry.L).apply_chain(geometry, chain)


def antitranspose_syndrome(geometry, syndrome):
    return Transform(antitransposed=True).apply_syndrome(geometry, syndrome)


def antitranspose_chain(geometry, chain):
    return Transform(antitransposed=True).apply_chain(geometry, chain)


# ==================== CANONIZACIÓN ====================

_FIRST_BLOCK = 32


@lru_cache(maxsize=16)
def _site_positions(L):
    """(desplazamiento de bloque, fila, columna) de cada índice de síndrome"""
    n = L * L
    index = np.arange(2 * n)
    offsets = np.where(index >= n, n, 0)
    rows, cols = np.divmod(index - offsets, L)
    for array in (offsets, rows, cols):
        array.flags.writeable = False
    return offsets, rows, cols


def _shifted_bits(bits, L, positions, anchor, start, stop):
    """Bits [start, stop) del síndrome trasladado con anchor en el origen"""
    offsets, rows, cols = positions
    ar, ac = anchor
    block = slice(start, stop)
    return bits[offsets[block] + (rows[block] + ar) % L * L + (cols[block] + ac) % L]


def _translation_less(bits, L, positions, candidate, best):
    """syndrome_less entre dos traslaciones del mismo síndrome"""
    size = len(bits)
    start, step = 0, _FIRST_BLOCK
    while start < size:
        stop = min(start + step, size)
        a = _shifted_bits(bits, L, positions, candidate, start, stop)
        b = _shifted_bits(bits, L, positions, best, start, stop)
        differences = np.flatnonzero(a != b)
        if len(differences):
            return bool(a[differences[0]])
        start, step = stop, 2 * step
    return False


def center(geometry, syndrome):
    """
    Representante de la clase de traslaciones.

    Candidatos: las traslaciones que llevan una detección de vértice al
    índice 0 (o, sin detecciones de vértice, una de cara al índice L²).
    Cada candidato se compara con el mejor hasta el momento leyendo los
    bits trasladados por bloques crecientes y parando en la primera
    diferencia, sin construir el síndrome trasladado. En empate gana el
    ancla de índice menor.

    Returns:
        tuple: (síndrome centrado, Transform usada)
    """
    _check_syndrome(geometry, syndrome)
    L = geometry.L
    n = geometry.n_vertices
    bits = syndrome.bits
    detections = np.flatnonzero(bits)
    if len(detections) == 0:
        return Syndrome(bits.copy()), Transform.identity()

    anchors = detections[detections < n]
    if len(anchors) == 0:
        anchors = detections - n

    positions = _site_positions(L)
    best = divmod(int(anchors[0]), L)
    for anchor in anchors[1:]:
        candidate = divmod(int(anchor), L)
        if _translation_less(bits, L, positions, candidate, best):
            best = candidate

    centered = _shifted_bits(bits, L, positions, best, 0, len(bits))
    return Syndrome(centered), Transform(-best[0] % L, -best[1] % L)


def antitransposition_representant(geometry, syndrome):
    """min(s, A(s)); en empate se queda el síndrome sin transformar"""
    flipped = antitranspose_syndrome(geometry, syndrome)
    if syndrome_less(flipped, syndrome):
        return flipped, Transform(antitransposed=True)
    return Syndrome(syndrome.bits.copy()), Transform.identity()


def align(geometry, syndrome):
    """
    Representante bajo traslaciones y antitransposición: centra s,
    centra la antitransposición del centrado y devuelve el menor
    (en empate, el primero).
    """
    L = geometry.L
    centered, to_centered = center(geometry, syndrome)
    flipped, to_flipped = center(geometry, antitranspose_syndrome(geometry, centered))
    if syndrome_less(flipped, centered):
        transform = to_centered.then(Transform(antitransposed=True), L).then(to_flipped, L)
        return flipped, transform
    return centered, to_centered


def naive_canonical(geometry, syndrome):
    """Representante de antitransposición y después centrado (no es invariante en la órbita)"""
    representant, first = antitransposition_representant(geometry, syndrome)
    centered, second = center(geometry, representant)
    return centered, first.then(second, geometry.L)


def canonicalize(geometry, syndrome, mode):
    """(s', t) con s' = t(s) según el modo de simetría"""
    mode = SymmetryMode(mode)
    if mode == SymmetryMode.CENTER:
        return center(geometry, syndrome)
    if mode == SymmetryMode.ALIGN:
        return align(geometry, syndrome)
    _check_syndrome(geometry, syndrome)
    return syndrome, Transform.identity()


def relabel_logical(label, transform):
    """La antitransposición intercambia los qubits lógicos 1 y 2"""
    label = int(label)
    if not 0 <= label < 16:
        raise ArgumentError(f"Etiqueta lógica {label} fuera de [0, 16)")
    if transform.antitransposed:
        label = ((label & 0b0011) << 2) | ((label & 0b1100) >> 2)
    return LogicalLabel(label)


def wrapped_decode(geometry, decoder, mode, syndrome):
    """Decodifica el síndrome canónico y deshace la transformación"""
    canonical, transform = canonicalize(geometry, syndrome, mode)
    recovery = decoder(canonical)
    if transform.is_identity:
        return recovery
    return transform.inverse(geometry.L).apply_chain(geometry, recovery)


class WrappedDecoder:
    """Decodificador subyacente envuelto en un modo de simetría"""

    def __init__(self, decoder, mode=SymmetryMode.NONE):
        self.decoder = decoder
        self.geometry = decoder.geometry
        self.mode = SymmetryMode(mode)

    @property
    def name(self):
        if self.mode == SymmetryMode.NONE:
            return self.decoder.name
        return f"{self.decoder.name}+{self.mode.value}"

    def canonicalize(self, syndrome):
        return canonicalize(self.geometry, syndrome, self.mode)

    def decode_with_frame(self, syndrome):
        """
        Returns:
            tuple: (síndrome canónico, Transform, recuperación en el marco original)
        """
        canonical, transform = self.canonicalize(syndrome)
        recovery = self.decoder(canonical)
        if not transform.is_identity:
            recovery = transform.inverse(self.geometry.L).apply_chain(self.geometry, recovery)
        return canonical, transform, recovery

    def decode(self, syndrome):
        return wrapped_decode(self.geometry, self.decoder, self.mode, syndrome)

    def __call__(self, syndrome):
        return self.decode(syndrome)

    def __repr__(self):
        return f"WrappedDecoder({self.decoder!r}, mode={self.mode.value})"
