"""
Estadística de tasas de error lógico: cociente de tasas con intervalo de
confianza (aproximación normal del logaritmo del cociente de dos
proporciones binomiales), barridos en p y pseudo-umbral.
"""
import math
from dataclasses import dataclass, asdict

from scipy import stats

from config.config import config
from services.hld import logical_error_rate
from utils.exceptions import ArgumentError
from utils.logger import logger
from utils.time_utils import Stopwatch


@dataclass(frozen=True)
class RatioInterval:
    """Cociente p̂₁/p̂₂ y sus cotas; None si algún k es 0"""
    ratio: float = None
    lower: float = None
    upper: float = None

    @property
    def degenerate(self):
        return self.ratio is None


@dataclass(frozen=True)
class ExperimentRecord:
    """Una fila de resultados: variante frente a la referencia a ruido p"""
    variant: str
    L: int
    p: float
    n: int
    k: int
    rate: float
    ref_variant: str
    ref_k: int
    ref_n: int
    ratio: float = None
    ci_lo: float = None
    ci_hi: float = None
    seed: int = 0

    @property
    def degenerate(self):
        return self.ratio is None

    def to_dict(self):
        return asdict(self)


def z_for_confidence(level):
    """Cuantil normal bilateral: 0.95 → 1.95996..."""
    if not 0.0 < level < 1.0:
        raise ArgumentError(f"Nivel de confianza {level} fuera de (0, 1)")
    return float(stats.norm.ppf(0.5 + level / 2.0))


def log_ratio_ci(k1, n1, k2, n2, z=None):
    """
    exp(ln(p̂₁/p̂₂) ± z·se), se² = (1−p̂₁)/(n₁p̂₁) + (1−p̂₂)/(n₂p̂₂).
    """
    z = config.CI_Z if z is None else z
    if n1 < 1 or n2 < 1:
        raise ArgumentError(f"Tamaños de muestra inválidos: n1={n1}, n2={n2}")
    if not (0 <= k1 <= n1 and 0 <= k2 <= n2):
        raise ArgumentError(f"Fallos fuera de rango: k1={k1}/{n1}, k2={k2}/{n2}")
    if k1 == 0 or k2 == 0:
        return RatioInterval()

    p1 = k1 / n1
    p2 = k2 / n2
    se = math.sqrt((1.0 - p1) / (n1 * p1) + (1.0 - p2) / (n2 * p2))
    log_ratio = math.log(p1 / p2)
    return RatioInterval(p1 / p2, math.exp(log_ratio - z * se), math.exp(log_ratio + z * se))


def two_qubit_failure_rate(p):
    """Probabilidad de que falle al menos uno de dos qubits sin codificar"""
    return 1.0 - (1.0 - p) ** 2


def make_record(variant, L, p, k, n, ref_variant, ref_k, ref_n, seed, z=None):
    interval = log_ratio_ci(k, n, ref_k, ref_n, z)
    return ExperimentRecord(variant, L, p, n, k, k / n, ref_variant, ref_k, ref_n,
                            interval.ratio, interval.lower, interval.upper, seed)


def sweep(geometry, variants, p_list, n, seed, reference=None, jobs=None):
    """
    Evalúa cada variante en cada p con los mismos errores (números
    aleatorios comunes) y la compara con la variante de referencia.

    Args:
        variants: dict nombre → decodificador invocable (síndrome → recuperación)
        reference: nombre de la variante de referencia (config.REFERENCE_DECODER)

    Returns:
        list: ExperimentRecord ordenados por (variante, p)
    """
    if not p_list:
        raise ArgumentError("La lista de p está vacía")
    reference = reference or config.REFERENCE_DECODER
    if reference not in variants:
        raise ArgumentError(f"La referencia '{reference}' no está entre las variantes {sorted(variants)}")

    records = []
    for p in p_list:
        stopwatch = Stopwatch()
        counts = {name: logical_error_rate(geometry, decoder, p, n, seed, jobs)
                  for name, decoder in variants.items()}
        ref_k, ref_n = counts[reference]
        for name, (k, trials) in counts.items():
            records.append(make_record(name, geometry.L, p, k, trials, reference, ref_k, ref_n, seed))
        summary = ", ".join(f"{name}={k}/{trials}" for name, (k, trials) in counts.items())
        logger.info(f"p={p:.3f}: {summary} ({stopwatch})")
    records.sort(key=lambda record: (record.variant, record.p))
    return records


@dataclass(frozen=True)
class PseudoThreshold:
    p: float
    lower: float
    upper: float


def pseudo_threshold(records):
    """
    Cruce entre la tasa del decodificador y 1−(1−p)², interpolado
    linealmente entre los puntos de la malla que lo encierran. Si la tasa
    coincide exactamente en un punto se devuelve el primero; sin cruce,
    None. Los puntos con p = 0 se ignoran.
    """
    points = sorted((record.p, record.rate) for record in records if record.p > 0)
    differences = [(p, rate - two_qubit_failure_rate(p)) for p, rate in points]

    for p, difference in differences:
        if difference == 0.0:
            return PseudoThreshold(p, p, p)

    for (p0, d0), (p1, d1) in zip(differences, differences[1:]):
        if (d0 < 0.0 < d1) or (d1 < 0.0 < d0):
            crossing = p0 + (p1 - p0) * (-d0) / (d1 - d0)
            return PseudoThreshold(crossing, p0, p1)
    return None
