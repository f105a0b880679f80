"""
Documento JSON del modelo entrenado.
"""
import json
from pathlib import Path

import numpy as np

from network.mlp import NetworkParams
from utils.exceptions import DatasetFormatError
from utils.logger import logger

MODEL_FORMAT_VERSION = 1


def model_to_dict(net, metadata=None):
    """Pesos en orden fila a fila: weights[i] es una lista de filas (salida × entrada)"""
    return {
        "format_version": MODEL_FORMAT_VERSION,
        "layer_sizes": list(net.layer_sizes),
        "weights": [w.tolist() for w in net.weights],
        "biases": [b.tolist() for b in net.biases],
        "metadata": metadata or {},
    }


def model_from_dict(document):
    try:
        version = document["format_version"]
        if version != MODEL_FORMAT_VERSION:
            raise DatasetFormatError(f"Versión de modelo {version} no soportada")
        net = NetworkParams(
            document["layer_sizes"],
            [np.array(w, dtype=np.float64) for w in document["weights"]],
            [np.array(b, dtype=np.float64) for b in document["biases"]],
        )
    except (KeyError, TypeError, ValueError) as e:
        raise DatasetFormatError(f"Documento de modelo inválido: {e}") from e
    return net, document.get("metadata", {})


def save_model(path, net, metadata=None):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(model_to_dict(net, metadata), handle)
    logger.success(f"Modelo guardado en {path} ({net.n_parameters} parámetros)")
    return path


def load_model(path):
    """
    Returns:
        tuple: (NetworkParams, dict de metadatos)
    """
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as handle:
            document = json.load(handle)
    except json.JSONDecodeError as e:
        raise DatasetFormatError(f"{path} no es un JSON válido: {e}") from e
    net, metadata = model_from_dict(document)
    logger.info(f"Modelo cargado desde {path}: capas {net.layer_sizes}")
    return net, metadata
