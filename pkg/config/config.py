"""
Configuración global del banco de trabajo del código tórico
"""
import os
from pathlib import Path
from dotenv import load_dotenv

# Cargar variables de entorno
env_path = Path(__file__).parent.parent / '.env'
load_dotenv(env_path)


def _float_list(raw):
    return [float(item) for item in raw.split(',') if item.strip()]


def _int_list(raw):
    return [int(item) for item in raw.split(',') if item.strip()]


class Config:
    """Configuración centralizada de la aplicación"""

    # ==================== SIMULACIÓN ====================
    # Muestras por bloque de RNG; fija qué semilla ve cada muestra
    CHUNK_SIZE = int(os.getenv('CHUNK_SIZE', 10000))
    DEFAULT_JOBS = int(os.getenv('DEFAULT_JOBS', 1))

    # Entradas máximas en la caché de emparejamientos por tipo de detección
    MATCHING_CACHE_SIZE = int(os.getenv('MATCHING_CACHE_SIZE', 1 << 18))

    # ==================== RED NEURONAL ====================
    HIDDEN_LAYERS = _int_list(os.getenv('HIDDEN_LAYERS', '500,250'))
    LEARNING_RATE = float(os.getenv('LEARNING_RATE', 0.001))
    BATCH_SIZE = int(os.getenv('BATCH_SIZE', 1000))
    N_ITERATIONS = int(os.getenv('N_ITERATIONS', 100000))
    INIT_WIDTH = float(os.getenv('INIT_WIDTH', 0.01))
    WEIGHT_DECAY = float(os.getenv('WEIGHT_DECAY', 0.0))
    VALIDATION_FRACTION = float(os.getenv('VALIDATION_FRACTION', 0.05))
    VALIDATION_INTERVAL = int(os.getenv('VALIDATION_INTERVAL', 1000))

    # Muestras usadas para la curva de pérdida de entrenamiento y de validación
    CURVE_SAMPLE_SIZE = int(os.getenv('CURVE_SAMPLE_SIZE', 20000))

    # ==================== EVALUACIÓN ====================
    P_TRAIN = float(os.getenv('P_TRAIN', 0.1))
    P_LIST = _float_list(os.getenv(
        'P_LIST', ','.join(f"{0.01 * i:.2f}" for i in range(1, 19))
    ))
    CI_Z = float(os.getenv('CI_Z', 1.96))
    REFERENCE_DECODER = os.getenv('REFERENCE_DECODER', 'mwpm')

    # ==================== BASE DE DATOS ====================
    DATABASE_URL = os.getenv('DATABASE_URL', 'sqlite:///results/experiments.db')

    # ==================== APLICACIÓN ====================
    TIMEZONE = os.getenv('TIMEZONE', 'America/La_Paz')
    CODE_VERSION = "1.0.0"

    # ==================== LOGGING ====================
    LOG_LEVEL = os.getenv('LOG_LEVEL', "INFO")
    LOG_FILE = os.getenv('LOG_FILE', "logs/toric_hld.log")
    LOG_ROTATION = "10 MB"
    LOG_RETENTION = "1 month"

    @classmethod
    def validate(cls):
        """Valida que la configuración sea correcta"""
        errors = []

        if cls.CHUNK_SIZE <= 0:
            errors.append("CHUNK_SIZE debe ser positivo")

        if cls.DEFAULT_JOBS <= 0:
            errors.append("DEFAULT_JOBS debe ser positivo")

        if not cls.HIDDEN_LAYERS or any(size <= 0 for size in cls.HIDDEN_LAYERS):
            errors.append("HIDDEN_LAYERS debe contener tamaños positivos")

        if not 0.0 <= cls.VALIDATION_FRACTION < 1.0:
            errors.append("VALIDATION_FRACTION debe estar en [0, 1)")

        if any(not 0.0 <= p <= 1.0 for p in cls.P_LIST):
            errors.append("P_LIST contiene probabilidades fuera de [0, 1]")

        if cls.CI_Z <= 0:
            errors.append("CI_Z debe ser positivo")

        if errors:
            raise ValueError(f"Errores de configuración: {', '.join(errors)}")

        return True


# Crear instancia global
config = Config()
