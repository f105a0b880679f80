"""
Jerarquía de errores del banco de trabajo.
"""


class ToricError(Exception):
    """Error base de todos los módulos"""


class ArgumentError(ToricError, ValueError):
    """Argumento fuera de rango o longitudes incompatibles"""


class PreconditionError(ToricError, ValueError):
    """Se violó una precondición de la operación"""


class InvalidSyndromeError(PreconditionError):
    """Síndrome con un número impar de detecciones de algún tipo"""


class DatasetFormatError(ToricError):
    """Archivo de datos o de modelo corrupto o con formato desconocido"""


class ConfigMismatchError(ToricError):
    """El modelo no corresponde a la geometría o configuración pedida"""


class UsageError(ToricError):
    """Uso incorrecto de la línea de comandos"""
