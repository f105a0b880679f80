"""
Geometría del código tórico L×L, álgebra de cadenas de Pauli y clases lógicas.

Convenciones de índices (todas con borde periódico):
- arista horizontal h(r,c): une el vértice (r,c) con (r,c+1); índice r·L+c
- arista vertical v(r,c): une el vértice (r,c) con (r+1,c); índice L²+r·L+c
- vértice (r,c) y cara (r,c) se numeran r·L+c; la cara (r,c) tiene su
  esquina superior izquierda en el vértice (r,c)
- el síndrome lista primero los L² vértices (estrellas) y luego las L² caras
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, IntEnum, IntFlag

import numpy as np

from utils.exceptions import ArgumentError, PreconditionError


class Orientation(IntEnum):
    """Orientación de una arista de la red"""
    HORIZONTAL = 0
    VERTICAL = 1


class LogicalOperator(Enum):
    """Los cuatro generadores lógicos (lazos no contractibles)"""
    X1 = "X1"
    Z1 = "Z1"
    X2 = "X2"
    Z2 = "Z2"


class LogicalLabel(IntFlag):
    """
    Clase lógica de un ciclo, 16 valores sin fase.

    Cada bit indica con qué operador lógico anticonmuta la cadena:
    bit 0 con Z₁, bit 1 con X₁, bit 2 con Z₂, bit 3 con X₂. El nombre de
    cada bit es el error lógico que lo produce (un lazo X₁ anticonmuta
    con Z₁, por eso X1 = bit 0). La composición es el XOR.
    """
    IDENTITY = 0
    X1 = 1
    Z1 = 2
    X2 = 4
    Z2 = 8


N_LOGICAL_CLASSES = 16

# Operador con el que se prueba la anticonmutación de cada bit
_PROBE_ORDER = (LogicalOperator.Z1, LogicalOperator.X1, LogicalOperator.Z2, LogicalOperator.X2)

# Operador que genera cada bit de etiqueta
_CORRECTION_ORDER = (LogicalOperator.X1, LogicalOperator.Z1, LogicalOperator.X2, LogicalOperator.Z2)


@dataclass(frozen=True, order=True)
class EdgeIndex:
    """Arista identificada por orientación, fila y columna"""
    orientation: Orientation
    row: int
    col: int

    def linear(self, L):
        """Índice lineal canónico en [0, 2L²)"""
        return int(self.orientation) * L * L + self.row * L + self.col

    @classmethod
    def from_linear(cls, L, index):
        if not 0 <= index < 2 * L * L:
            raise ArgumentError(f"Índice de arista {index} fuera de [0, {2 * L * L})")
        orientation, rest = divmod(int(index), L * L)
        row, col = divmod(rest, L)
        return cls(Orientation(orientation), row, col)

    def __str__(self):
        prefix = "h" if self.orientation == Orientation.HORIZONTAL else "v"
        return f"{prefix}({self.row},{self.col})"


class PauliChain:
    """
    Operador de Pauli sobre las 2L² aristas, sin fase.

    x marca las aristas con componente X, z las de componente Z; una Y
    tiene ambos bits. Los vectores son uint8 con valores 0/1.
    """

    __slots__ = ('x', 'z')

    def __init__(self, x, z):
        x = np.asarray(x, dtype=np.uint8)
        z = np.asarray(z, dtype=np.uint8)
        if x.ndim != 1 or x.shape != z.shape:
            raise ArgumentError(f"Soportes X/Z incompatibles: {x.shape} vs {z.shape}")
        self.x = x
        self.z = z

    @classmethod
    def identity(cls, n_edges):
        return cls(np.zeros(n_edges, dtype=np.uint8), np.zeros(n_edges, dtype=np.uint8))

    @classmethod
    def from_edges(cls, n_edges, x_edges=(), z_edges=(), y_edges=()):
        """Construye la cadena a partir de listas de índices lineales"""
        chain = cls.identity(n_edges)
        for edge in x_edges:
            chain.x[edge] ^= 1
        for edge in z_edges:
            chain.z[edge] ^= 1
        for edge in y_edges:
            chain.x[edge] ^= 1
            chain.z[edge] ^= 1
        return chain

    def __len__(self):
        return len(self.x)

    def __mul__(self, other):
        return multiply(self, other)

    def __eq__(self, other):
        if not isinstance(other, PauliChain):
            return NotImplemented
        return np.array_equal(self.x, other.x) and np.array_equal(self.z, other.z)

    def __hash__(self):
        return hash((self.x.tobytes(), self.z.tobytes()))

    @property
    def weight(self):
        """Número de aristas con un Pauli no trivial"""
        return int(np.count_nonzero(self.x | self.z))

    @property
    def is_identity(self):
        return not (self.x.any() or self.z.any())

    def copy(self):
        return PauliChain(self.x.copy(), self.z.copy())

    def __repr__(self):
        return (f"PauliChain(n={len(self)}, X={np.flatnonzero(self.x).tolist()}, "
                f"Z={np.flatnonzero(self.z).tolist()})")


class Syndrome:
    """
    Vector binario de longitud 2L²: detecciones de vértice seguidas de
    detecciones de cara, ambas en orden fila a fila.
    """

    __slots__ = ('bits',)

    def __init__(self, bits):
        bits = np.asarray(bits, dtype=np.uint8)
        if bits.ndim != 1 or len(bits) % 2:
            raise ArgumentError(f"Síndrome con forma inválida: {bits.shape}")
        self.bits = bits

    @classmethod
    def empty(cls, length):
        return cls(np.zeros(length, dtype=np.uint8))

    @classmethod
    def from_detections(cls, L, vertices=(), faces=()):
        bits = np.zeros(2 * L * L, dtype=np.uint8)
        for v in vertices:
            bits[v] ^= 1
        for f in faces:
            bits[L * L + f] ^= 1
        return cls(bits)

    def __len__(self):
        return len(self.bits)

    @property
    def n_sites(self):
        return len(self.bits) // 2

    @property
    def vertex_bits(self):
        return self.bits[:self.n_sites]

    @property
    def plaquette_bits(self):
        return self.bits[self.n_sites:]

    def vertex_detections(self):
        return tuple(int(v) for v in np.flatnonzero(self.vertex_bits))

    def plaquette_detections(self):
        return tuple(int(f) for f in np.flatnonzero(self.plaquette_bits))

    @property
    def detection_count(self):
        return int(np.count_nonzero(self.bits))

    @property
    def is_empty(self):
        return not self.bits.any()

    @property
    def is_valid(self):
        """Paridad par de detecciones de cada tipo (medidas perfectas)"""
        return (int(self.vertex_bits.sum()) % 2 == 0
                and int(self.plaquette_bits.sum()) % 2 == 0)

    def key(self):
        """Clave compacta para cachés y comparaciones"""
        return self.bits.tobytes()

    def __xor__(self, other):
        if len(self) != len(other):
            raise ArgumentError("Síndromes de longitudes distintas")
        return Syndrome(self.bits ^ other.bits)

    def __eq__(self, other):
        if not isinstance(other, Syndrome):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return (f"Syndrome(vertices={list(self.vertex_detections())}, "
                f"faces={list(self.plaquette_detections())})")


def _check_same_length(a, b):
    if len(a) != len(b):
        raise ArgumentError(f"Cadenas de longitudes distintas: {len(a)} vs {len(b)}")


def multiply(a, b):
    """Producto de Pauli sin fase: XOR de soportes"""
    _check_same_length(a, b)
    return PauliChain(a.x ^ b.x, a.z ^ b.z)


def commutes(a, b):
    """True si el producto simpléctico |a.x ∩ b.z| + |a.z ∩ b.x| es par"""
    _check_same_length(a, b)
    overlap = int(np.count_nonzero(a.x & b.z)) + int(np.count_nonzero(a.z & b.x))
    return overlap % 2 == 0


def gf2_rank(matrix):
    """Rango sobre GF(2) por eliminación gaussiana"""
    m = np.array(matrix, dtype=np.uint8) % 2
    n_rows, n_cols = m.shape
    rank = 0
    for col in range(n_cols):
        if rank == n_rows:
            break
        candidates = np.flatnonzero(m[rank:, col])
        if candidates.size == 0:
            continue
        pivot = rank + candidates[0]
        if pivot != rank:
            m[[rank, pivot]] = m[[pivot, rank]]
        others = np.flatnonzero(m[:, col])
        others = others[others != rank]
        m[others] ^= m[rank]
        rank += 1
    return rank


class ToricGeometry:
    """
    Red cuadrada L×L sobre el toro: 2L² aristas (qubits), L² vértices
    (estrellas X) y L² caras (plaquetas Z). Inmutable tras construirse.
    """

    def __init__(self, L):
        if isinstance(L, bool) or not isinstance(L, (int, np.integer)) or L < 2:
            raise ArgumentError(f"El lado de la red debe ser un entero ≥ 2, recibido {L!r}")

        self.L = int(L)
        self.n_vertices = self.L * self.L
        self.n_faces = self.L * self.L
        self.n_edges = 2 * self.L * self.L

        self.star_table = np.array(
            [self._star_linear(v) for v in range(self.n_vertices)], dtype=np.int64
        )
        self.plaquette_table = np.array(
            [self._plaquette_linear(f) for f in range(self.n_faces)], dtype=np.int64
        )

        # Matrices de incidencia sitio × arista
        self.star_matrix = np.zeros((self.n_vertices, self.n_edges), dtype=np.uint8)
        self.plaquette_matrix = np.zeros((self.n_faces, self.n_edges), dtype=np.uint8)
        for site in range(self.n_vertices):
            self.star_matrix[site, self.star_table[site]] = 1
            self.plaquette_matrix[site, self.plaquette_table[site]] = 1

        self._logicals = {op: self._build_logical(op) for op in LogicalOperator}
        self._probe_x = np.stack([self._logicals[op].x for op in _PROBE_ORDER]).astype(np.int64)
        self._probe_z = np.stack([self._logicals[op].z for op in _PROBE_ORDER]).astype(np.int64)
        self._label_weights = np.array([1, 2, 4, 8], dtype=np.int64)

    def __eq__(self, other):
        return isinstance(other, ToricGeometry) and other.L == self.L

    def __hash__(self):
        return hash(("ToricGeometry", self.L))

    def __repr__(self):
        return f"ToricGeometry(L={self.L})"

    # ==================== ÍNDICES ====================

    def h(self, row, col):
        """Índice lineal de la arista horizontal h(row, col)"""
        return (row % self.L) * self.L + (col % self.L)

    def v(self, row, col):
        """Índice lineal de la arista vertical v(row, col)"""
        return self.n_vertices + (row % self.L) * self.L + (col % self.L)

    def site_index(self, row, col):
        """Índice de vértice o de cara (misma numeración fila a fila)"""
        return (row % self.L) * self.L + (col % self.L)

    def site_coords(self, index):
        if not 0 <= index < self.n_vertices:
            raise ArgumentError(f"Sitio {index} fuera de [0, {self.n_vertices})")
        return divmod(int(index), self.L)

    def _star_linear(self, vertex):
        r, c = divmod(vertex, self.L)
        return (self.h(r, c), self.h(r, c - 1), self.v(r, c), self.v(r - 1, c))

    def _plaquette_linear(self, face):
        r, c = divmod(face, self.L)
        return (self.h(r, c), self.h(r + 1, c), self.v(r, c), self.v(r, c + 1))

    def star_edges(self, vertex):
        """Coborde ∂⁰v: las cuatro aristas que tocan el vértice"""
        self.site_coords(vertex)
        return frozenset(EdgeIndex.from_linear(self.L, e) for e in self.star_table[vertex])

    def plaquette_edges(self, face):
        """Borde ∂₁f: las cuatro aristas alrededor de la cara"""
        self.site_coords(face)
        return frozenset(EdgeIndex.from_linear(self.L, e) for e in self.plaquette_table[face])

    # ==================== OPERADORES ====================

    def star_operator(self, vertex):
        """Estabilizador X_v como cadena"""
        self.site_coords(vertex)
        return PauliChain.from_edges(self.n_edges, x_edges=self.star_table[vertex])

    def plaquette_operator(self, face):
        """Estabilizador Z_f como cadena"""
        self.site_coords(face)
        return PauliChain.from_edges(self.n_edges, z_edges=self.plaquette_table[face])

    def _build_logical(self, which):
        L = self.L
        if which == LogicalOperator.Z1:
            return PauliChain.from_edges(self.n_edges, z_edges=[self.h(0, c) for c in range(L)])
        if which == LogicalOperator.X1:
            return PauliChain.from_edges(self.n_edges, x_edges=[self.h(r, 0) for r in range(L)])
        if which == LogicalOperator.Z2:
            return PauliChain.from_edges(self.n_edges, z_edges=[self.v(r, 0) for r in range(L)])
        return PauliChain.from_edges(self.n_edges, x_edges=[self.v(0, c) for c in range(L)])

    def logical_operator(self, which):
        """
        Representante fijo de un operador lógico.

        Z₁: Z en las horizontales de la fila 0; X₁: X en h(r,0) para todo r;
        Z₂: Z en las verticales de la columna 0; X₂: X en v(0,c) para todo c.
        """
        return self._logicals[LogicalOperator(which)].copy()

    def label_correction(self, label):
        """Producto de lógicos cuya clase es exactamente `label`"""
        label = int(label)
        if not 0 <= label < N_LOGICAL_CLASSES:
            raise ArgumentError(f"Etiqueta lógica {label} fuera de [0, 16)")
        chain = PauliChain.identity(self.n_edges)
        for bit, op in enumerate(_CORRECTION_ORDER):
            if label >> bit & 1:
                chain = multiply(chain, self._logicals[op])
        return chain

    # ==================== SÍNDROMES ====================

    def _check_chain(self, chain):
        if len(chain) != self.n_edges:
            raise ArgumentError(
                f"La cadena tiene {len(chain)} aristas y la red L={self.L} tiene {self.n_edges}"
            )

    def syndrome_of(self, chain):
        """
        Estrellas detectan las componentes Z, plaquetas las componentes X.
        """
        self._check_chain(chain)
        vertex_bits = (self.star_matrix @ chain.z) % 2
        face_bits = (self.plaquette_matrix @ chain.x) % 2
        return Syndrome(np.concatenate([vertex_bits, face_bits]).astype(np.uint8))

    def syndromes_of(self, x_batch, z_batch):
        """Síndromes de un lote de cadenas (filas), forma (n, 2L²)"""
        vertex_bits = (z_batch @ self.star_matrix.T) % 2
        face_bits = (x_batch @ self.plaquette_matrix.T) % 2
        return np.concatenate([vertex_bits, face_bits], axis=1).astype(np.uint8)

    # ==================== CLASES LÓGICAS ====================

    def logical_classes(self, x_batch, z_batch):
        """Clases lógicas de un lote de ciclos, sin comprobar el síndrome"""
        x_batch = np.atleast_2d(x_batch).astype(np.int64)
        z_batch = np.atleast_2d(z_batch).astype(np.int64)
        parity = (x_batch @ self._probe_z.T + z_batch @ self._probe_x.T) % 2
        return parity @ self._label_weights

    def logical_class(self, chain):
        """Etiqueta lógica de un ciclo (síndrome nulo)"""
        if not self.syndrome_of(chain).is_empty:
            raise PreconditionError("logical_class requiere un ciclo con síndrome nulo")
        return LogicalLabel(int(self.logical_classes(chain.x, chain.z)[0]))

    def is_success(self, error, recovery):
        """
        La recuperación es correcta si error·recuperación está en el grupo
        estabilizador, es decir, si su clase lógica es la identidad.
        """
        if self.syndrome_of(error) != self.syndrome_of(recovery):
            raise PreconditionError("La recuperación no reproduce el síndrome del error")
        return self.logical_class(multiply(error, recovery)) == LogicalLabel.IDENTITY

    def independent_generators(self):
        """Rango GF(2) de los generadores estrella + plaqueta (2L² − 2)"""
        zeros = np.zeros_like(self.star_matrix)
        stars = np.concatenate([self.star_matrix, zeros], axis=1)
        plaquettes = np.concatenate([zeros, self.plaquette_matrix], axis=1)
        return gf2_rank(np.concatenate([stars, plaquettes], axis=0))
