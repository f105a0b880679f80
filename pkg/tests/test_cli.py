import json

import pytest

from cli.commands import EXIT_CONFIG, EXIT_IO, EXIT_OK, EXIT_USAGE, main
from config.config import config
from database.dataset_file import HEADER_STRUCT, read_dataset
from database.db_manager import db_manager
from database.manifest import manifest_path, read_manifest
from database.results_csv import read_records, read_table
from utils.logger import setup_logging


def _gen(tmp_path, name="train.bin", n=20, seed=3):
    out = tmp_path / name
    code = main(["gen-data", "--L", "3", "--p", "0.1", "--n", str(n), "--seed", str(seed),
                 "--symmetry", "align", "--out", str(out)])
    return code, out


def test_gen_data_with_no_samples(tmp_path):
    code, out = _gen(tmp_path, n=0)
    assert code == EXIT_OK
    assert out.stat().st_size == HEADER_STRUCT.size
    header, inputs, _ = read_dataset(out)
    assert inputs.shape == (0, 18)
    assert header.count == 0 and header.symmetry_mode == "align"
    assert read_manifest(manifest_path(out)).command == "gen-data"


def test_gen_data_is_reproducible(tmp_path):
    _, first = _gen(tmp_path, "a.bin")
    _, second = _gen(tmp_path, "b.bin")
    _, third = _gen(tmp_path, "c.bin", seed=4)
    assert first.read_bytes() == second.read_bytes()
    assert first.read_bytes() != third.read_bytes()


@pytest.mark.parametrize("argv", [
    ["gen-data", "--L", "3", "--n", "5", "--out", "x.bin"],
    ["gen-data", "--L", "3", "--n", "5", "--seed", "-1", "--out", "x.bin"],
    ["gen-data", "--L", "1", "--n", "5", "--seed", "1", "--out", "x.bin"],
    ["eval", "--L", "3", "--n", "5", "--seed", "1", "--out", "x.csv", "--p-list", "a,b"],
    ["repro", "--case", "fig9"],
    ["bench"],
    [],
])
def test_usage_errors(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(argv) == EXIT_USAGE


def test_train_without_iterations(tmp_path):
    _, data = _gen(tmp_path)
    model = tmp_path / "model.json"
    curves = tmp_path / "curves.csv"
    code = main(["train", "--data", str(data), "--layers", "4", "--iters", "0", "--seed", "1",
                 "--out-model", str(model), "--out-curves", str(curves)])
    assert code == EXIT_OK
    document = json.loads(model.read_text())
    assert document["layer_sizes"] == [18, 4, 16]
    assert document["metadata"]["dataset"]["symmetry_mode"] == "align"
    assert len(read_table(curves)) == 1
    manifest = read_manifest(manifest_path(model))
    assert manifest.outputs == [str(model), str(curves)]


def test_train_on_missing_or_corrupt_data(tmp_path):
    argv = ["train", "--iters", "0", "--seed", "1", "--out-model", str(tmp_path / "m.json"),
            "--out-curves", str(tmp_path / "c.csv")]
    assert main([*argv, "--data", str(tmp_path / "missing.bin")]) == EXIT_IO
    corrupt = tmp_path / "corrupt.bin"
    corrupt.write_bytes(b"not a dataset at all, not even close")
    assert main([*argv, "--data", str(corrupt)]) == EXIT_IO


def test_eval_reference_only(tmp_path):
    out = tmp_path / "results.csv"
    code = main(["eval", "--L", "3", "--p-list", "0.1,0.2", "--n", "100", "--seed", "5",
                 "--out", str(out)])
    assert code == EXIT_OK
    records = read_records(out)
    assert [record.variant for record in records] == ["mwpm", "mwpm"]
    assert all(record.ratio == 1.0 or record.k == 0 for record in records)
    assert read_manifest(manifest_path(out)).settings["common_random_numbers"] is True


def test_eval_with_model(tmp_path):
    _, data = _gen(tmp_path)
    model = tmp_path / "model.json"
    main(["train", "--data", str(data), "--layers", "4", "--iters", "5", "--batch", "4", "--seed", "1",
          "--out-model", str(model), "--out-curves", str(tmp_path / "curves.csv")])
    out = tmp_path / "results.csv"
    code = main(["eval", "--model", str(model), "--L", "3", "--symmetry", "align", "--p-list", "0.1",
                 "--n", "50", "--seed", "5", "--out", str(out)])
    assert code == EXIT_OK
    variants = {record.variant for record in read_records(out)}
    assert variants == {"mwpm", "mwpm+align", "hld-mwpm+align"}


def _train_model(tmp_path, symmetry, iters="5"):
    data = tmp_path / f"train-{symmetry}.bin"
    main(["gen-data", "--L", "3", "--p", "0.1", "--n", "20", "--seed", "3", "--symmetry", symmetry,
          "--out", str(data)])
    model = tmp_path / f"model-{symmetry}.json"
    code = main(["train", "--data", str(data), "--layers", "4", "--iters", iters, "--batch", "4",
                 "--seed", "1", "--out-model", str(model), "--out-curves", str(tmp_path / f"curves-{symmetry}.csv")])
    assert code == EXIT_OK
    return model


def test_eval_with_mismatched_model(tmp_path):
    model = _train_model(tmp_path, "align", iters="0")
    base = ["eval", "--model", str(model), "--p-list", "0.1", "--n", "10", "--seed", "5",
            "--out", str(tmp_path / "r.csv")]
    assert main([*base, "--L", "5", "--symmetry", "align"]) == EXIT_CONFIG


def test_model_symmetry_comes_from_its_metadata(tmp_path):
    model = _train_model(tmp_path, "align", iters="0")
    out = tmp_path / "r.csv"
    code = main(["eval", "--model", str(model), "--L", "3", "--symmetry", "center", "--p-list", "0.1",
                 "--n", "10", "--seed", "5", "--out", str(out)])
    assert code == EXIT_OK
    assert {record.variant for record in read_records(out)} == {"mwpm", "mwpm+center", "hld-mwpm+align"}
    assert read_manifest(manifest_path(model)).settings["variant"] == "hld-mwpm+align"


def test_eval_compares_two_models(tmp_path):
    aligned = _train_model(tmp_path, "align")
    uncentered = _train_model(tmp_path, "none")
    out = tmp_path / "results.csv"
    code = main(["eval", "--model", str(aligned), "--model", str(uncentered), "--L", "3",
                 "--p-list", "0.1,0.2", "--n", "60", "--seed", "5", "--reference", "hld-mwpm+none",
                 "--out", str(out)])
    assert code == EXIT_OK
    records = read_records(out)
    assert {record.variant for record in records} == {"mwpm", "hld-mwpm+align", "hld-mwpm+none"}
    assert all(record.ref_variant == "hld-mwpm+none" for record in records)
    reference_k = {record.p: record.k for record in records if record.variant == "hld-mwpm+none"}
    assert all(record.ref_k == reference_k[record.p] for record in records)
    assert read_manifest(manifest_path(out)).settings["models"] == [str(aligned), str(uncentered)]


def test_eval_rejects_duplicate_model_variants(tmp_path):
    model = _train_model(tmp_path, "align", iters="0")
    code = main(["eval", "--model", str(model), "--model", str(model), "--L", "3", "--p-list", "0.1",
                 "--n", "10", "--seed", "5", "--out", str(tmp_path / "r.csv")])
    assert code == EXIT_USAGE


def test_eval_archives_in_database(tmp_path, monkeypatch):
    monkeypatch.setattr(config, "DATABASE_URL", f"sqlite:///{tmp_path / 'runs.db'}")
    try:
        code = main(["eval", "--L", "3", "--p-list", "0.1", "--n", "20", "--seed", "2",
                     "--out", str(tmp_path / "r.csv"), "--store-db"])
        assert code == EXIT_OK
        runs = db_manager.get_runs(command="eval")
        assert runs and runs[0]["n_records"] == 1
    finally:
        db_manager.close()


def test_repro_case_writes_report(tmp_path):
    out = tmp_path / "fig3.txt"
    assert main(["repro", "--case", "fig3", "--out", str(out)]) == EXIT_OK
    assert out.read_text(encoding="utf-8").strip().endswith("passed=True")
    assert read_manifest(manifest_path(out)).summary == {"passed": True}


def test_bench_writes_table(tmp_path):
    out = tmp_path / "bench.csv"
    code = main(["bench", "--L-list", "3,5", "--n", "5", "--seed", "1", "--out", str(out),
                 "--detections", "2,4"])
    assert code == EXIT_OK
    table = read_table(out)
    assert set(table["method"]) == {"align", "trivial", "mwpm"}
    assert len(table) == 6
    assert (tmp_path / "bench.detections.csv").exists()


def test_global_logging_options(tmp_path):
    log_file = tmp_path / "logs" / "run.log"
    try:
        code = main(["--log-level", "WARNING", "--log-file", str(log_file), "repro", "--case", "fig3"])
        assert code == EXIT_OK
        assert log_file.exists()
    finally:
        setup_logging()
    assert main(["--log-level", "LOUD", "repro", "--case", "fig3"]) == EXIT_USAGE
