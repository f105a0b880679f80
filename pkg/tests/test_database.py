"""
Pruebas de persistencia: archivo binario de datos, tablas CSV,
manifiestos y archivo SQL de ejecuciones.
"""
import numpy as np
import pytest

from database.dataset_file import (
    HEADER_STRUCT, DatasetHeader, decode_dataset, encode_dataset, read_dataset, write_dataset,
)
from database.db_manager import DatabaseManager
from database.manifest import RunManifest, manifest_path, read_manifest, write_manifest
from database.results_csv import (
    RESULT_COLUMNS, frame_to_records, read_records, read_table, records_to_frame, write_records,
)
from services.evaluator import make_record
from toric.noise import make_rng
from utils.exceptions import ArgumentError, DatasetFormatError


@pytest.fixture
def header():
    return DatasetHeader(3, 0.1, "mwpm", "align", 2 ** 64 - 1)


@pytest.fixture
def records():
    return [
        make_record("mwpm", 3, 0.05, 12, 1000, "mwpm", 12, 1000, seed=2 ** 63 + 5),
        make_record("hld-mwpm+align", 3, 0.05, 0, 1000, "mwpm", 12, 1000, seed=2 ** 63 + 5),
    ]


# ==================== ARCHIVO DE DATOS ====================

def test_dataset_round_trip(tmp_path, header):
    rng = make_rng(1)
    inputs = rng.integers(0, 2, size=(25, 18)).astype(np.uint8)
    labels = rng.integers(0, 16, size=25).astype(np.uint8)
    path = write_dataset(tmp_path / "data" / "train.bin", header, inputs, labels)
    loaded, loaded_inputs, loaded_labels = read_dataset(path)
    assert loaded.count == 25
    assert loaded.seed == 2 ** 64 - 1
    assert (loaded.L, loaded.underlying, loaded.symmetry_mode) == (3, "mwpm", "align")
    assert np.array_equal(loaded_inputs, inputs)
    assert np.array_equal(loaded_labels, labels)
    assert path.stat().st_size == HEADER_STRUCT.size + 25 * header.record_size


def test_record_size_rounds_up(header):
    assert header.n_bits == 18
    assert header.record_size == 4
    assert DatasetHeader(2, 0.1, "mwpm", "none", 0).record_size == 2


def test_empty_dataset_round_trip(header):
    raw = encode_dataset(header, np.zeros((0, 18), dtype=np.uint8), [])
    loaded, inputs, labels = decode_dataset(raw)
    assert loaded.count == 0
    assert inputs.shape == (0, 18)
    assert len(labels) == 0


def test_truncated_dataset_is_rejected(header):
    raw = encode_dataset(header, np.ones((3, 18), dtype=np.uint8), [1, 2, 3])
    with pytest.raises(DatasetFormatError):
        decode_dataset(raw[:-1])
    with pytest.raises(DatasetFormatError):
        decode_dataset(raw[:10])


def test_wrong_magic_and_version(header):
    raw = encode_dataset(header, np.zeros((1, 18), dtype=np.uint8), [0])
    with pytest.raises(DatasetFormatError):
        decode_dataset(b"XXXX" + raw[4:])
    bumped = DatasetHeader(3, 0.1, "mwpm", "align", 0, 0, version=2).pack()
    with pytest.raises(DatasetFormatError):
        decode_dataset(bumped)


def test_label_out_of_range_is_rejected(header):
    raw = bytearray(encode_dataset(header, np.zeros((1, 18), dtype=np.uint8), [0]))
    raw[-1] = 16
    with pytest.raises(DatasetFormatError):
        decode_dataset(bytes(raw))


def test_unrepresentable_header():
    with pytest.raises(ArgumentError):
        DatasetHeader(3, 0.1, "union-find", "none", 0).pack()
    with pytest.raises(ArgumentError):
        encode_dataset(DatasetHeader(3, 0.1, "mwpm", "none", 0), np.zeros((2, 18)), [0])


def test_header_from_model_metadata(header):
    assert DatasetHeader.from_dict(header.to_dict()) == header
    document = header.to_dict()
    del document["seed"]
    with pytest.raises(DatasetFormatError):
        DatasetHeader.from_dict(document)
    with pytest.raises(DatasetFormatError):
        DatasetHeader.from_dict({**header.to_dict(), "symmetry_mode": "rotate"})


# ==================== TABLAS CSV ====================

def test_results_csv_round_trip(tmp_path, records):
    path = write_records(tmp_path / "out" / "results.csv", records)
    assert list(read_table(path).columns) == RESULT_COLUMNS
    loaded = read_records(path)
    assert loaded == records
    assert loaded[0].ratio == 1.0
    assert loaded[1].degenerate


def test_frame_without_columns_is_rejected(records):
    frame = records_to_frame(records).drop(columns=["ci_hi"])
    with pytest.raises(DatasetFormatError):
        frame_to_records(frame)


# ==================== MANIFIESTOS ====================

def test_manifest_sits_next_to_output(tmp_path):
    output = tmp_path / "results.csv"
    manifest = RunManifest("eval", settings={"L": 3}, seeds={"seed": 7})
    manifest.add_output(output)
    path = write_manifest(manifest)
    assert path == manifest_path(output)
    assert path.name == "results.csv.manifest.json"
    loaded = read_manifest(path)
    assert loaded.command == "eval"
    assert loaded.seeds == {"seed": 7}
    assert loaded.outputs == [str(output)]
    assert loaded.timestamp == manifest.timestamp


def test_manifest_requires_an_output():
    with pytest.raises(ValueError):
        write_manifest(RunManifest("eval"))


# ==================== BASE DE DATOS ====================

def test_database_archives_runs(tmp_path, records):
    manager = DatabaseManager()
    assert manager.initialize(f"sqlite:///{tmp_path / 'db' / 'runs.db'}")
    try:
        manifest = RunManifest("eval", settings={"L": 3})
        manifest.add_output(tmp_path / "results.csv")
        run_id = manager.save_run(manifest, records)
        assert run_id is not None
        runs = manager.get_runs(command="eval")
        assert runs[0]["id"] == run_id
        assert runs[0]["n_records"] == 2
        rows = manager.get_records(run_id)
        assert [row["variant"] for row in rows] == ["hld-mwpm+align", "mwpm"]
        assert rows[1]["seed"] == 2 ** 63 + 5
        assert rows[0]["ratio"] is None
        assert manager.get_runs(command="train") == []
    finally:
        manager.close()
    assert not manager.is_initialized


def test_session_requires_initialization():
    with pytest.raises(RuntimeError):
        with DatabaseManager().get_session():
            pass
