"""
Archivo binario de datos de entrenamiento.

Cabecera little-endian (struct '<4sHHdBBQQ', 34 bytes):
    magic      4s   b'THLD'
    version    H    versión del formato (1)
    L          H    lado de la red
    p_train    d    parámetro despolarizante de las muestras
    underlying B    0 = mwpm, 1 = trivial
    symmetry   B    0 = none, 1 = center, 2 = align
    seed       Q    semilla de 64 bits
    count      Q    número de registros

Cada registro ocupa ceil(2L²/8) + 1 bytes: los 2L² bits del síndrome
canónico empaquetados con numpy.packbits (bit más significativo
primero) seguidos del byte de etiqueta lógica.
"""
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from toric.geometry import N_LOGICAL_CLASSES
from utils.exceptions import ArgumentError, DatasetFormatError
from utils.logger import logger

MAGIC = b"THLD"
FORMAT_VERSION = 1
HEADER_STRUCT = struct.Struct("<4sHHdBBQQ")

UNDERLYING_CODES = {"mwpm": 0, "trivial": 1}
SYMMETRY_CODES = {"none": 0, "center": 1, "align": 2}


@dataclass(frozen=True)
class DatasetHeader:
    L: int
    p_train: float
    underlying: str
    symmetry_mode: str
    seed: int
    count: int = 0
    version: int = FORMAT_VERSION

    @property
    def n_bits(self):
        return 2 * self.L * self.L

    @property
    def record_size(self):
        return (self.n_bits + 7) // 8 + 1

    def to_dict(self):
        return {
            "L": self.L, "p_train": self.p_train, "underlying": self.underlying,
            "symmetry_mode": self.symmetry_mode, "seed": self.seed,
            "count": self.count, "version": self.version,
        }

    @classmethod
    def from_dict(cls, document):
        """Cabecera guardada en los metadatos de un modelo"""
        try:
            header = cls(int(document["L"]), float(document["p_train"]), document["underlying"],
                         document["symmetry_mode"], int(document["seed"]), int(document.get("count", 0)),
                         int(document.get("version", FORMAT_VERSION)))
        except (KeyError, TypeError, ValueError) as e:
            raise DatasetFormatError(f"Cabecera de datos inválida: {e}") from e
        if header.underlying not in UNDERLYING_CODES or header.symmetry_mode not in SYMMETRY_CODES:
            raise DatasetFormatError(
                f"Decodificador/simetría desconocidos: {header.underlying}, {header.symmetry_mode}"
            )
        return header

    def pack(self):
        try:
            return HEADER_STRUCT.pack(
                MAGIC, self.version, self.L, self.p_train,
                UNDERLYING_CODES[self.underlying], SYMMETRY_CODES[self.symmetry_mode],
                self.seed, self.count,
            )
        except (KeyError, struct.error) as e:
            raise ArgumentError(f"Cabecera no representable: {e}") from e

    @classmethod
    def unpack(cls, raw):
        if len(raw) < HEADER_STRUCT.size:
            raise DatasetFormatError(f"Cabecera truncada: {len(raw)} de {HEADER_STRUCT.size} bytes")
        magic, version, L, p_train, underlying, symmetry, seed, count = HEADER_STRUCT.unpack(
            raw[:HEADER_STRUCT.size]
        )
        if magic != MAGIC:
            raise DatasetFormatError(f"Número mágico desconocido: {magic!r}")
        if version != FORMAT_VERSION:
            raise DatasetFormatError(f"Versión de formato {version} no soportada")
        names = {code: name for name, code in UNDERLYING_CODES.items()}
        modes = {code: name for name, code in SYMMETRY_CODES.items()}
        if underlying not in names or symmetry not in modes:
            raise DatasetFormatError(f"Códigos de decodificador/simetría inválidos: {underlying}, {symmetry}")
        if L < 2:
            raise DatasetFormatError(f"Lado de red inválido: {L}")
        return cls(L, p_train, names[underlying], modes[symmetry], seed, count, version)


def encode_dataset(header, inputs, labels):
    inputs = np.asarray(inputs, dtype=np.uint8).reshape(-1, header.n_bits)
    labels = np.asarray(labels, dtype=np.uint8).reshape(-1)
    if len(inputs) != len(labels):
        raise ArgumentError(f"{len(inputs)} entradas y {len(labels)} etiquetas")
    header = DatasetHeader(header.L, header.p_train, header.underlying, header.symmetry_mode,
                           header.seed, len(labels), header.version)
    records = np.concatenate([np.packbits(inputs, axis=1), labels[:, None]], axis=1)
    return header.pack() + records.tobytes()


def decode_dataset(raw):
    """
    Returns:
        tuple: (DatasetHeader, entradas uint8 (n, 2L²), etiquetas uint8 (n,))
    """
    header = DatasetHeader.unpack(raw)
    body = raw[HEADER_STRUCT.size:]
    expected = header.count * header.record_size
    if len(body) != expected:
        raise DatasetFormatError(
            f"Se esperaban {header.count} registros ({expected} bytes), hay {len(body)} bytes"
        )
    records = np.frombuffer(body, dtype=np.uint8).reshape(header.count, header.record_size)
    inputs = np.unpackbits(records[:, :-1], axis=1, count=header.n_bits)
    labels = records[:, -1].copy()
    if len(labels) and labels.max() >= N_LOGICAL_CLASSES:
        raise DatasetFormatError(f"Etiqueta {int(labels.max())} fuera de [0, 16)")
    return header, inputs, labels


def write_dataset(path, header, inputs, labels):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    raw = encode_dataset(header, inputs, labels)
    path.write_bytes(raw)
    logger.success(f"Datos guardados en {path}: {len(labels)} registros, {len(raw)} bytes")
    return path


def read_dataset(path):
    path = Path(path)
    header, inputs, labels = decode_dataset(path.read_bytes())
    logger.info(f"Datos cargados desde {path}: L={header.L}, {header.count} registros")
    return header, inputs, labels
