"""
Tiempos de canonización y de decodificación en función de L, con ajuste
de la pendiente log-log.
"""
import time
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy import stats

from decoders.matching import make_decoder
from decoders.symmetry import align
from toric.geometry import Syndrome, ToricGeometry
from toric.noise import make_rng, sample_errors
from utils.exceptions import ArgumentError
from utils.logger import logger

BENCH_COLUMNS = ["L", "p", "n_samples", "mean_ns", "stddev_ns"]


@dataclass(frozen=True)
class ScalingFit:
    slope: float
    intercept: float
    r_value: float


def _sample_syndromes(geometry, p, n, seed):
    x, z = sample_errors(geometry, p, n, make_rng(seed, geometry.L))
    return [Syndrome(bits) for bits in geometry.syndromes_of(x, z)]


def _time_calls(function, arguments):
    """Tiempo de cada llamada en nanosegundos"""
    times = np.empty(len(arguments), dtype=np.float64)
    for i, argument in enumerate(arguments):
        start = time.perf_counter_ns()
        function(argument)
        times[i] = time.perf_counter_ns() - start
    return times


def _timing_table(L_list, p, n_samples, seed, make_function):
    if list(L_list) != sorted(L_list):
        raise ArgumentError(f"La lista de L debe estar ordenada: {L_list}")
    if n_samples < 1:
        raise ArgumentError("n_samples debe ser ≥ 1")
    rows = []
    for L in L_list:
        geometry = ToricGeometry(L)
        syndromes = _sample_syndromes(geometry, p, n_samples, seed)
        times = _time_calls(make_function(geometry), syndromes)
        rows.append({"L": L, "p": p, "n_samples": n_samples,
                     "mean_ns": float(times.mean()), "stddev_ns": float(times.std())})
        logger.info(f"L={L}: {times.mean() / 1e3:.1f} µs por síndrome")
    return pd.DataFrame(rows, columns=BENCH_COLUMNS)


def bench_centering(L_list, p, n_samples, seed=0):
    """Tiempo medio de align sobre síndromes de errores despolarizantes"""
    return _timing_table(L_list, p, n_samples, seed,
                         lambda geometry: lambda syndrome: align(geometry, syndrome))


def bench_decoder(name, L_list, p, n_samples, seed=0):
    """Tiempo medio de un decodificador subyacente sobre la misma malla"""
    return _timing_table(L_list, p, n_samples, seed,
                         lambda geometry: make_decoder(name, geometry).decode)


def bench_detection_count(L, counts, n_samples, seed=0, name="trivial"):
    """Tiempo del decodificador frente al número de detecciones de vértice"""
    geometry = ToricGeometry(L)
    decoder = make_decoder(name, geometry)
    rng = make_rng(seed, L)
    rows = []
    for count in counts:
        if count % 2 or count > geometry.n_vertices:
            raise ArgumentError(f"Número de detecciones inválido: {count}")
        syndromes = []
        for _ in range(n_samples):
            sites = rng.choice(geometry.n_vertices, size=count, replace=False)
            syndromes.append(Syndrome.from_detections(L, vertices=sites))
        times = _time_calls(decoder.decode, syndromes)
        rows.append({"detections": count, "mean_ns": float(times.mean()), "stddev_ns": float(times.std())})
    return pd.DataFrame(rows, columns=["detections", "mean_ns", "stddev_ns"])


def fit_scaling(x_values, times):
    """Pendiente de log(tiempo) frente a log(x)"""
    if len(x_values) < 2:
        raise ArgumentError("Se necesitan al menos dos puntos para el ajuste")
    result = stats.linregress(np.log(np.asarray(x_values, dtype=float)),
                              np.log(np.asarray(times, dtype=float)))
    return ScalingFit(float(result.slope), float(result.intercept), float(result.rvalue))
