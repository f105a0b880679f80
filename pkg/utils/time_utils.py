"""
Utilidades para manejo de tiempo y zona horaria
"""
import time
from datetime import datetime
import pytz
from config.config import config

# Zona horaria de los manifiestos
LOCAL_TZ = pytz.timezone(config.TIMEZONE)


def get_local_now():
    """Obtiene la hora actual en la zona horaria configurada"""
    return datetime.now(LOCAL_TZ)


def format_datetime(dt):
    """Formatea un datetime para manifiestos y logs"""
    if dt is None:
        return "N/A"
    return dt.strftime("%Y-%m-%d %H:%M:%S %Z")


def format_duration(seconds):
    """
    Formatea una duración en segundos de forma legible.
    Ej: "850 ms", "12.3 s", "4 min 05 s", "2 h 03 min"
    """
    if seconds < 1:
        return f"{seconds * 1000:.0f} ms"
    elif seconds < 60:
        return f"{seconds:.1f} s"
    elif seconds < 3600:
        minutes, secs = divmod(int(seconds), 60)
        return f"{minutes} min {secs:02d} s"
    else:
        hours, rest = divmod(int(seconds), 3600)
        return f"{hours} h {rest // 60:02d} min"


class Stopwatch:
    """Cronómetro simple basado en perf_counter"""

    def __init__(self):
        self.start_time = time.perf_counter()

    def elapsed(self):
        """Segundos transcurridos desde la creación"""
        return time.perf_counter() - self.start_time

    def __str__(self):
        return format_duration(self.elapsed())
