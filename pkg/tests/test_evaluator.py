import math

import pytest

from decoders.matching import MWPMDecoder, TrivialDecoder
from decoders.symmetry import WrappedDecoder
from services.evaluator import (
    ExperimentRecord, log_ratio_ci, make_record, pseudo_threshold, sweep, two_qubit_failure_rate,
    z_for_confidence,
)
from toric.noise import make_rng
from utils.exceptions import ArgumentError


def _record(p, rate, variant="mwpm"):
    return ExperimentRecord(variant, 3, p, 1000, int(rate * 1000), rate, "mwpm", 1, 1000)


def test_z_for_confidence():
    assert z_for_confidence(0.95) == pytest.approx(1.959964, abs=1e-6)
    with pytest.raises(ArgumentError):
        z_for_confidence(1.0)


def test_log_ratio_interval_values():
    interval = log_ratio_ci(100, 1000, 200, 1000, z=1.96)
    assert interval.ratio == pytest.approx(0.5)
    assert interval.lower == pytest.approx(0.39987, rel=1e-3)
    assert interval.upper == pytest.approx(0.62521, rel=1e-3)


def test_equal_rates_give_symmetric_interval():
    interval = log_ratio_ci(37, 500, 37, 500)
    assert interval.ratio == 1.0
    assert interval.lower < 1.0 < interval.upper
    assert interval.lower * interval.upper == pytest.approx(1.0)


def test_zero_failures_are_degenerate():
    assert log_ratio_ci(0, 100, 5, 100).degenerate
    assert log_ratio_ci(5, 100, 0, 100).degenerate
    record = make_record("hld", 3, 0.01, 0, 100, "mwpm", 3, 100, seed=1)
    assert record.degenerate
    assert record.rate == 0.0
    assert record.to_dict()["ci_lo"] is None


def test_interval_arguments():
    with pytest.raises(ArgumentError):
        log_ratio_ci(1, 0, 1, 10)
    with pytest.raises(ArgumentError):
        log_ratio_ci(11, 10, 1, 10)


def test_all_failures_have_zero_width():
    interval = log_ratio_ci(10, 10, 10, 10)
    assert interval.lower == interval.upper == 1.0


def test_sweep_compares_against_reference(geometry3):
    variants = {
        "mwpm": MWPMDecoder(geometry3),
        "mwpm+center": WrappedDecoder(MWPMDecoder(geometry3), "center"),
        "trivial": TrivialDecoder(geometry3),
    }
    records = sweep(geometry3, variants, [0.05, 0.15], 200, seed=4)
    assert [(r.variant, r.p) for r in records] == [
        ("mwpm", 0.05), ("mwpm", 0.15), ("mwpm+center", 0.05), ("mwpm+center", 0.15),
        ("trivial", 0.05), ("trivial", 0.15),
    ]
    for record in records:
        assert record.n == 200 and record.ref_variant == "mwpm" and record.seed == 4
        if record.variant == "mwpm":
            assert record.ratio == 1.0
            assert record.k == record.ref_k


def test_sweep_arguments(geometry3):
    variants = {"trivial": TrivialDecoder(geometry3)}
    with pytest.raises(ArgumentError):
        sweep(geometry3, variants, [0.1], 10, seed=1)
    with pytest.raises(ArgumentError):
        sweep(geometry3, variants, [], 10, seed=1, reference="trivial")


def test_two_qubit_failure_rate():
    assert two_qubit_failure_rate(0.0) == 0.0
    assert two_qubit_failure_rate(0.1) == pytest.approx(0.19)


def test_pseudo_threshold_interpolates():
    records = [_record(0.10, 0.29), _record(0.05, 0.05)]
    threshold = pseudo_threshold(records)
    assert threshold.lower == 0.05 and threshold.upper == 0.10
    assert threshold.p == pytest.approx(0.05 + 0.05 * 0.0475 / 0.1475)


def test_pseudo_threshold_exact_hit_and_missing():
    exact = [_record(0.05, 0.01), _record(0.1, two_qubit_failure_rate(0.1))]
    assert pseudo_threshold(exact).p == 0.1
    assert pseudo_threshold([_record(0.05, 0.01), _record(0.1, 0.02)]) is None
    assert pseudo_threshold([_record(0.0, 0.0), _record(0.05, 0.01)]) is None
    assert pseudo_threshold([]) is None


def test_interval_contains_ratio():
    interval = log_ratio_ci(45, 1000, 60, 1200)
    assert interval.lower < interval.ratio < interval.upper
    assert math.isclose(interval.ratio, (45 / 1000) / (60 / 1200))


def test_reference_interval_for_equal_counts():
    interval = log_ratio_ci(100, 10 ** 6, 100, 10 ** 6, z=1.96)
    assert interval.ratio == 1.0
    assert interval.lower == pytest.approx(0.758, abs=1e-3)
    assert interval.upper == pytest.approx(1.320, abs=1e-3)


def test_interval_shrinks_with_sample_size():
    widths = [log_ratio_ci(n // 10, n, n // 20, n).upper - log_ratio_ci(n // 10, n, n // 20, n).lower
              for n in (10 ** 3, 10 ** 5, 10 ** 7)]
    assert widths[0] > widths[1] > widths[2]
    assert widths[2] < 0.02


def test_interval_coverage_for_identical_streams():
    rng = make_rng(2024)
    k1 = rng.binomial(10 ** 5, 0.01, size=1000)
    k2 = rng.binomial(10 ** 5, 0.01, size=1000)
    covered = 0
    for a, b in zip(k1, k2):
        interval = log_ratio_ci(int(a), 10 ** 5, int(b), 10 ** 5)
        covered += interval.lower <= 1.0 <= interval.upper
    assert 0.93 <= covered / 1000 <= 0.97


def test_zero_noise_point_is_degenerate(geometry3):
    records = sweep(geometry3, {"mwpm": MWPMDecoder(geometry3)}, [0.0], 20, seed=1)
    assert records[0].k == 0
    assert records[0].degenerate
