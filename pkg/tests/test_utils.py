from datetime import datetime

import pytest

from config.config import Config, config
from utils.exceptions import ArgumentError, InvalidSyndromeError, PreconditionError, ToricError
from utils.time_utils import Stopwatch, format_datetime, format_duration, get_local_now


@pytest.mark.parametrize("seconds, expected", [
    (0.25, "250 ms"),
    (12.34, "12.3 s"),
    (245, "4 min 05 s"),
    (7380, "2 h 03 min"),
])
def test_format_duration(seconds, expected):
    assert format_duration(seconds) == expected


def test_format_datetime():
    assert format_datetime(None) == "N/A"
    assert format_datetime(datetime(2024, 3, 1, 8, 5, 9)).startswith("2024-03-01 08:05:09")
    assert get_local_now().tzinfo is not None


def test_stopwatch_is_monotonic():
    stopwatch = Stopwatch()
    assert stopwatch.elapsed() >= 0.0
    assert str(stopwatch).endswith("ms") or str(stopwatch).endswith("s")


def test_default_configuration_is_valid():
    assert config.validate()
    assert all(size > 0 for size in config.HIDDEN_LAYERS)


def test_invalid_configuration_is_reported(monkeypatch):
    monkeypatch.setattr(Config, "CHUNK_SIZE", 0)
    monkeypatch.setattr(Config, "CI_Z", -1.0)
    with pytest.raises(ValueError, match="CHUNK_SIZE"):
        Config.validate()


def test_exception_hierarchy():
    assert issubclass(InvalidSyndromeError, PreconditionError)
    assert issubclass(ArgumentError, ValueError)
    assert issubclass(PreconditionError, ToricError)
