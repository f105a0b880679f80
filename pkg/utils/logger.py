"""
Sistema de logging con loguru

La consola recibe los mensajes de progreso de los comandos; el archivo
guarda además la traza de módulo y línea. La línea de comandos puede
volver a configurar ambos destinos con --log-level y --log-file.
"""
import sys
from pathlib import Path
from loguru import logger
from config.config import config

CONSOLE_FORMAT = (
    "<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | "
    "<cyan>{name}</cyan> - <level>{message}</level>"
)
FILE_FORMAT = "{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {process} | {name}:{function}:{line} - {message}"


def setup_logging(level=None, log_file=None):
    """
    (Re)configura los destinos del logger.

    Args:
        level: nivel mínimo (por defecto config.LOG_LEVEL)
        log_file: ruta del archivo de log; "" desactiva el archivo
    """
    level = (level or config.LOG_LEVEL).upper()
    log_file = config.LOG_FILE if log_file is None else log_file

    logger.remove()
    # stderr: stdout queda libre para los resúmenes de los comandos
    logger.add(sys.stderr, format=CONSOLE_FORMAT, level=level, colorize=True)

    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        logger.add(
            str(log_path),
            format=FILE_FORMAT,
            level=level,
            rotation=config.LOG_ROTATION,
            retention=config.LOG_RETENTION,
            compression="zip",
            encoding="utf-8",
            enqueue=True
        )
    return logger


setup_logging()

# Exportar logger configurado
__all__ = ['logger', 'setup_logging']
