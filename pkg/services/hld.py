"""
Decodificador de alto nivel (HLD): decodificador subyacente más una red
que predice la clase lógica residual y la corrige a posteriori.

Genera los datos de entrenamiento (síndrome canónico → etiqueta lógica
en el marco canónico), decodifica de extremo a extremo y estima tasas de
error lógico por Monte Carlo.
"""
from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed

from config.config import config
from database.dataset_file import DatasetHeader
from decoders.matching import DECODERS, make_decoder
from decoders.symmetry import SymmetryMode, WrappedDecoder, relabel_logical
from network.mlp import NetworkParams, predict
from toric.geometry import LogicalLabel, N_LOGICAL_CLASSES, Syndrome, ToricGeometry
from toric.noise import chunk_layout, sample_chunk
from utils.exceptions import ArgumentError, ConfigMismatchError, PreconditionError
from utils.logger import logger
from utils.time_utils import Stopwatch

# Flujo de las muestras de entrenamiento; las de prueba usan evaluation_purpose(p)
TRAINING_PURPOSE = 0


def evaluation_purpose(p):
    """Clave de flujo de las pruebas a ruido p, distinta de la de entrenamiento"""
    return 1 + int(round(p * 1e9))


@dataclass(frozen=True)
class HldConfig:
    """Configuración de un HLD y de su conjunto de entrenamiento"""
    L: int
    underlying: str = "mwpm"
    symmetry_mode: SymmetryMode = SymmetryMode.NONE
    p_train: float = config.P_TRAIN
    n_samples: int = 0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "symmetry_mode", SymmetryMode(self.symmetry_mode))
        if self.underlying not in DECODERS:
            raise ArgumentError(f"Decodificador subyacente desconocido: {self.underlying}")
        if not 0.0 <= self.p_train <= 1.0:
            raise ArgumentError(f"p_train={self.p_train} fuera de [0, 1]")
        if self.n_samples < 0:
            raise ArgumentError(f"n_samples={self.n_samples} negativo")
        if not 0 <= self.seed < 2 ** 64:
            raise ArgumentError(f"La semilla {self.seed} no cabe en 64 bits")

    @property
    def variant_name(self):
        return f"hld-{self.underlying}+{self.symmetry_mode.value}"

    def header(self, count=0):
        return DatasetHeader(self.L, self.p_train, self.underlying,
                             self.symmetry_mode.value, self.seed, count)

    @classmethod
    def from_header(cls, header):
        return cls(header.L, header.underlying, header.symmetry_mode,
                   header.p_train, header.count, header.seed)

    def wrapped_decoder(self, geometry):
        if geometry.L != self.L:
            raise ConfigMismatchError(f"Configuración para L={self.L} y red L={geometry.L}")
        return WrappedDecoder(make_decoder(self.underlying, geometry), self.symmetry_mode)


@dataclass(frozen=True)
class TrainingSample:
    input: np.ndarray
    label: LogicalLabel


def relabel_batch(labels, antitransposed):
    """relabel_logical vectorizado: intercambia los bits 0↔2 y 1↔3 donde corresponda"""
    labels = np.asarray(labels, dtype=np.int64)
    swapped = ((labels & 0b0011) << 2) | ((labels & 0b1100) >> 2)
    return np.where(antitransposed, swapped, labels)


def make_sample(geometry, cfg, error):
    """Muestra de entrenamiento para un error concreto"""
    decoder = cfg.wrapped_decoder(geometry)
    canonical, transform, recovery = decoder.decode_with_frame(geometry.syndrome_of(error))
    original = geometry.logical_class(error * recovery)
    return TrainingSample(canonical.bits.copy(), relabel_logical(original, transform))


def _check_recoveries(geometry, syndromes, recovery_x, recovery_z):
    """Cada recuperación debe reproducir el síndrome de su error"""
    mismatched = np.flatnonzero((geometry.syndromes_of(recovery_x, recovery_z) != syndromes).any(axis=1))
    if len(mismatched):
        raise PreconditionError(
            f"{len(mismatched)} recuperaciones no reproducen el síndrome (primera en la fila {mismatched[0]})"
        )


def _label_errors(geometry, decoder, x, z):
    """Entradas canónicas y etiquetas de un lote de errores"""
    syndromes = geometry.syndromes_of(x, z)
    inputs = np.zeros_like(syndromes)
    recovery_x = np.zeros_like(x)
    recovery_z = np.zeros_like(z)
    antitransposed = np.zeros(len(x), dtype=bool)
    for i, bits in enumerate(syndromes):
        canonical, transform, recovery = decoder.decode_with_frame(Syndrome(bits))
        inputs[i] = canonical.bits
        recovery_x[i] = recovery.x
        recovery_z[i] = recovery.z
        antitransposed[i] = transform.antitransposed
    _check_recoveries(geometry, syndromes, recovery_x, recovery_z)
    classes = geometry.logical_classes(x ^ recovery_x, z ^ recovery_z)
    return inputs, relabel_batch(classes, antitransposed).astype(np.uint8)


def _generate_chunk(cfg, chunk_index, size):
    geometry = ToricGeometry(cfg.L)
    decoder = cfg.wrapped_decoder(geometry)
    x, z = sample_chunk(geometry, cfg.p_train, cfg.seed, chunk_index, size, TRAINING_PURPOSE)
    return _label_errors(geometry, decoder, x, z)


def run_chunks(function, tasks, jobs=None):
    """Aplica function(*task) a cada bloque, en orden, con `jobs` procesos"""
    jobs = jobs or config.DEFAULT_JOBS
    if jobs <= 1 or len(tasks) <= 1:
        return [function(*task) for task in tasks]
    return Parallel(n_jobs=jobs)(delayed(function)(*task) for task in tasks)


def generate_dataset(geometry, cfg, jobs=None):
    """
    Genera cfg.n_samples muestras a p_train. El resultado solo depende de
    (seed, L, p_train, underlying, symmetry_mode), no de `jobs`.

    Returns:
        tuple: (entradas uint8 (n, 2L²), etiquetas uint8 (n,))
    """
    if geometry.L != cfg.L:
        raise ConfigMismatchError(f"Configuración para L={cfg.L} y red L={geometry.L}")
    stopwatch = Stopwatch()
    tasks = [(cfg, index, size) for index, size in chunk_layout(cfg.n_samples)]
    results = run_chunks(_generate_chunk, tasks, jobs)
    if results:
        inputs = np.concatenate([inputs for inputs, _ in results])
        labels = np.concatenate([labels for _, labels in results])
    else:
        inputs = np.zeros((0, 2 * geometry.n_vertices), dtype=np.uint8)
        labels = np.zeros(0, dtype=np.uint8)
    logger.info(f"{len(labels)} muestras generadas ({cfg.variant_name}, p={cfg.p_train}) en {stopwatch}")
    return inputs, labels


def dataset_summary(inputs, labels):
    """Histograma de etiquetas, fracción de síndromes vacíos y entradas distintas"""
    labels = np.asarray(labels, dtype=np.int64)
    inputs = np.asarray(inputs, dtype=np.uint8)
    n = len(labels)
    histogram = np.bincount(labels, minlength=N_LOGICAL_CLASSES).tolist() if n else [0] * N_LOGICAL_CLASSES
    empty = int(np.count_nonzero(~inputs.any(axis=1))) if n else 0
    distinct = len(np.unique(inputs, axis=0)) if n else 0
    return {
        "count": n,
        "label_histogram": histogram,
        "empty_share": empty / n if n else 0.0,
        "distinct_inputs": distinct,
    }


class HighLevelDecoder:
    """
    Recuperación = decodificador subyacente (con simetrías) · corrección
    lógica predicha. `classifier` es una red entrenada o cualquier
    invocable bits → etiqueta.
    """

    def __init__(self, geometry, classifier, underlying="mwpm", symmetry_mode=SymmetryMode.NONE):
        self.geometry = geometry
        self.wrapped = WrappedDecoder(make_decoder(underlying, geometry), symmetry_mode)
        if isinstance(classifier, NetworkParams) and classifier.input_size != 2 * geometry.n_vertices:
            raise ConfigMismatchError(
                f"La red espera {classifier.input_size} bits y L={geometry.L} produce {2 * geometry.n_vertices}"
            )
        self.classifier = classifier
        self._corrections = [geometry.label_correction(label) for label in range(N_LOGICAL_CLASSES)]

    @property
    def name(self):
        return f"hld-{self.wrapped.decoder.name}+{self.wrapped.mode.value}"

    def predict(self, bits):
        if isinstance(self.classifier, NetworkParams):
            return predict(self.classifier, bits)
        return LogicalLabel(int(self.classifier(bits)))

    def decode(self, syndrome):
        canonical, transform, recovery = self.wrapped.decode_with_frame(syndrome)
        label = relabel_logical(self.predict(canonical.bits), transform)
        if label == LogicalLabel.IDENTITY:
            return recovery
        return recovery * self._corrections[int(label)]

    def __call__(self, syndrome):
        return self.decode(syndrome)


def hld_decode(geometry, net, cfg, syndrome):
    return HighLevelDecoder(geometry, net, cfg.underlying, cfg.symmetry_mode).decode(syndrome)


def _count_failures(decoder, p, seed, chunk_index, size):
    geometry = decoder.geometry
    x, z = sample_chunk(geometry, p, seed, chunk_index, size, evaluation_purpose(p))
    syndromes = geometry.syndromes_of(x, z)
    recovery_x = np.zeros_like(x)
    recovery_z = np.zeros_like(z)
    for i, bits in enumerate(syndromes):
        recovery = decoder(Syndrome(bits))
        recovery_x[i] = recovery.x
        recovery_z[i] = recovery.z
    _check_recoveries(geometry, syndromes, recovery_x, recovery_z)
    classes = geometry.logical_classes(x ^ recovery_x, z ^ recovery_z)
    return int(np.count_nonzero(classes))


def logical_error_rate(geometry, decoder, p, n_trials, seed, jobs=None):
    """
    Monte Carlo: fallos k en n pruebas. Para una misma (seed, L, p) todos
    los decodificadores ven los mismos errores.

    Returns:
        tuple: (k, n)
    """
    if n_trials < 1:
        raise ArgumentError(f"n_trials={n_trials} debe ser ≥ 1")
    if decoder.geometry != geometry:
        raise ConfigMismatchError("El decodificador pertenece a otra geometría")
    tasks = [(decoder, p, seed, index, size) for index, size in chunk_layout(n_trials)]
    failures = sum(run_chunks(_count_failures, tasks, jobs))
    logger.debug(f"{getattr(decoder, 'name', decoder)} a p={p}: {failures}/{n_trials} fallos")
    return failures, n_trials
