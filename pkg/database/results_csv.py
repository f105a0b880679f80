"""
Tablas CSV de resultados, curvas de entrenamiento y benchmarks (pandas).
"""
from pathlib import Path

import pandas as pd

from services.evaluator import ExperimentRecord
from utils.exceptions import DatasetFormatError
from utils.logger import logger

RESULT_COLUMNS = ["variant", "L", "p", "n", "k", "rate", "ref_variant", "ref_k", "ref_n",
                  "ratio", "ci_lo", "ci_hi", "seed"]

_INTEGER_COLUMNS = ["L", "n", "k", "ref_k", "ref_n", "seed"]
_OPTIONAL_COLUMNS = ["ratio", "ci_lo", "ci_hi"]


def records_to_frame(records):
    return pd.DataFrame([record.to_dict() for record in records], columns=RESULT_COLUMNS)


def frame_to_records(frame):
    missing = [column for column in RESULT_COLUMNS if column not in frame.columns]
    if missing:
        raise DatasetFormatError(f"Faltan columnas en la tabla de resultados: {missing}")
    records = []
    for row in frame.to_dict(orient="records"):
        for column in _INTEGER_COLUMNS:
            row[column] = int(row[column])
        for column in _OPTIONAL_COLUMNS:
            row[column] = None if pd.isna(row[column]) else float(row[column])
        row["p"] = float(row["p"])
        row["rate"] = float(row["rate"])
        records.append(ExperimentRecord(**{column: row[column] for column in RESULT_COLUMNS}))
    return records


def write_table(path, frame):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False)
    logger.success(f"Tabla guardada en {path} ({len(frame)} filas)")
    return path


def read_table(path):
    return pd.read_csv(path, float_precision="round_trip")


def write_records(path, records):
    return write_table(path, records_to_frame(records))


def read_records(path):
    return frame_to_records(read_table(path))
