"""
Manifiesto de ejecución: comando, configuración completa, semillas,
archivos producidos, versión y marca de tiempo.
"""
import json
from dataclasses import dataclass, field, asdict
from pathlib import Path

from config.config import config
from utils.logger import logger
from utils.time_utils import format_datetime, get_local_now


@dataclass
class RunManifest:
    command: str
    settings: dict = field(default_factory=dict)
    seeds: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    code_version: str = config.CODE_VERSION
    timestamp: str = field(default_factory=lambda: format_datetime(get_local_now()))

    def add_output(self, path):
        self.outputs.append(str(path))

    def to_dict(self):
        return asdict(self)


def manifest_path(output):
    output = Path(output)
    return output.with_name(output.name + ".manifest.json")


def write_manifest(manifest):
    """Escribe el manifiesto junto al primer archivo de salida"""
    if not manifest.outputs:
        raise ValueError("El manifiesto no lista ningún archivo de salida")
    path = manifest_path(manifest.outputs[0])
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(manifest.to_dict(), handle, indent=2, ensure_ascii=False, default=str)
    logger.info(f"Manifiesto escrito en {path}")
    return path


def read_manifest(path):
    with open(path, "r", encoding="utf-8") as handle:
        return RunManifest(**json.load(handle))
