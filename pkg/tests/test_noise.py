import numpy as np
import pytest

from toric.geometry import ToricGeometry
from toric.noise import (
    NoiseParams, channel_rate_from_q, chunk_layout, chunk_rng, make_rng, sample_chunk,
    sample_error, sample_errors,
)
from utils.exceptions import ArgumentError


def test_noise_params_validation():
    NoiseParams(0.1, 7)
    with pytest.raises(ArgumentError):
        NoiseParams(1.5)
    with pytest.raises(ArgumentError):
        NoiseParams(0.1, -1)
    with pytest.raises(ArgumentError):
        NoiseParams(0.1, 2 ** 64)


def test_channel_rate_from_q():
    assert channel_rate_from_q(0.0) == 0.0
    assert channel_rate_from_q(1.0) == pytest.approx(0.75)
    with pytest.raises(ArgumentError):
        channel_rate_from_q(-0.1)


def test_zero_noise_gives_identity(geometry3):
    x, z = sample_errors(geometry3, 0.0, 100, make_rng(1))
    assert not x.any() and not z.any()


def test_full_noise_never_gives_identity(geometry3):
    x, z = sample_errors(geometry3, 1.0, 100, make_rng(1))
    assert np.all(x | z)


def test_pauli_frequencies_are_balanced():
    g = ToricGeometry(5)
    x, z = sample_errors(g, 0.3, 4000, make_rng(3))
    total = x.size
    only_x = np.count_nonzero(x & ~z) / total
    only_z = np.count_nonzero(z & ~x) / total
    both = np.count_nonzero(x & z) / total
    for share in (only_x, only_z, both):
        assert share == pytest.approx(0.1, abs=0.005)


def test_sampling_is_deterministic_per_seed(geometry3):
    a = sample_errors(geometry3, 0.2, 50, make_rng(9))
    b = sample_errors(geometry3, 0.2, 50, make_rng(9))
    c = sample_errors(geometry3, 0.2, 50, make_rng(10))
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
    assert not np.array_equal(a[0], c[0])


def test_chunk_layout_covers_all_samples():
    assert chunk_layout(0, 10) == []
    assert chunk_layout(25, 10) == [(0, 10), (1, 10), (2, 5)]
    assert sum(size for _, size in chunk_layout(12345, 1000)) == 12345


def test_chunks_are_independent_streams(geometry3):
    first = sample_chunk(geometry3, 0.2, 5, 0, 20)
    second = sample_chunk(geometry3, 0.2, 5, 1, 20)
    again = sample_chunk(geometry3, 0.2, 5, 0, 20)
    assert np.array_equal(first[0], again[0])
    assert not np.array_equal(first[0], second[0])


def test_purpose_separates_streams():
    a = chunk_rng(1, 0, purpose=0).random(8)
    b = chunk_rng(1, 0, purpose=1).random(8)
    assert not np.array_equal(a, b)


def test_single_error_sample(geometry3):
    chain = sample_error(geometry3, NoiseParams(0.5, 1), make_rng(1))
    assert len(chain) == geometry3.n_edges
