"""
Línea de comandos: gen-data, train, eval, repro y bench.

Códigos de salida: 0 éxito, 1 uso, 2 E/S o formato, 3 configuración
incompatible, 4 fallo de un caso de reproducción.
"""
import argparse
from pathlib import Path

import pandas as pd

from config.config import config
from database.dataset_file import DatasetHeader, read_dataset, write_dataset
from database.db_manager import db_manager
from database.manifest import RunManifest, write_manifest
from database.results_csv import write_records, write_table
from decoders.matching import DECODERS, make_decoder
from decoders.symmetry import SymmetryMode, WrappedDecoder
from network.mlp import TrainConfig, train
from network.model_io import load_model, save_model
from services.benchmark import bench_centering, bench_decoder, bench_detection_count, fit_scaling
from services.evaluator import pseudo_threshold, sweep
from services.hld import HighLevelDecoder, HldConfig, dataset_summary, generate_dataset
from services.repro import REPRO_CASES, run_case
from toric.geometry import ToricGeometry
from utils.exceptions import (
    ArgumentError, ConfigMismatchError, DatasetFormatError, UsageError,
)
from utils.logger import logger, setup_logging
from utils.time_utils import Stopwatch

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_CONFIG = 3
EXIT_REPRO = 4

SYMMETRY_CHOICES = [mode.value for mode in SymmetryMode]
LOG_LEVELS = ["TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR"]


class CliParser(argparse.ArgumentParser):
    """ArgumentParser que lanza UsageError en lugar de terminar el proceso"""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _int_list(raw):
    try:
        values = [int(item) for item in raw.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"lista de enteros inválida: '{raw}'") from None
    if not values:
        raise argparse.ArgumentTypeError("la lista está vacía")
    return values


def _float_list(raw):
    try:
        values = [float(item) for item in raw.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"lista de números inválida: '{raw}'") from None
    if not values:
        raise argparse.ArgumentTypeError("la lista está vacía")
    return values


def _seed(raw):
    try:
        value = int(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"semilla inválida: '{raw}'") from None
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("la semilla debe estar en [0, 2⁶⁴)")
    return value


# ==================== COMANDOS ====================

def cmd_gen_data(args):
    cfg = HldConfig(args.L, args.underlying, args.symmetry, args.p, args.n, args.seed)
    geometry = ToricGeometry(args.L)
    inputs, labels = generate_dataset(geometry, cfg, jobs=args.jobs)
    output = write_dataset(args.out, cfg.header(), inputs, labels)

    summary = dataset_summary(inputs, labels)
    print(f"{summary['count']} muestras, {summary['distinct_inputs']} entradas distintas, "
          f"{summary['empty_share']:.2%} síndromes vacíos")
    print("Histograma de etiquetas: " + " ".join(
        f"{label}:{count}" for label, count in enumerate(summary["label_histogram"]) if count
    ))

    manifest = RunManifest("gen-data", settings=cfg.header(len(labels)).to_dict(),
                           seeds={"seed": args.seed}, summary=summary)
    manifest.add_output(output)
    write_manifest(manifest)
    return EXIT_OK


def cmd_train(args):
    header, inputs, labels = read_dataset(args.data)
    cfg = HldConfig.from_header(header)
    logger.info(f"Entrenando {cfg.variant_name} con {cfg.n_samples} muestras de L={cfg.L}")
    train_config = TrainConfig(
        n_iterations=args.iters, learning_rate=args.lr, batch_size=args.batch,
        weight_decay=args.weight_decay, init_width=args.init_width, seed=args.seed,
        validation_fraction=args.val_fraction, validation_interval=args.val_interval,
    )
    net, curves = train(inputs, labels, args.layers, train_config)

    metadata = {"train_config": train_config.to_dict(), "dataset": header.to_dict()}
    model_path = save_model(args.out_model, net, metadata)
    curves_path = write_table(args.out_curves, curves.to_frame())

    manifest = RunManifest("train", settings={**metadata, "variant": cfg.variant_name,
                                              "layers": args.layers, "data": str(args.data)},
                           seeds={"seed": args.seed},
                           summary={"final_training_loss": curves.training_loss[-1]})
    manifest.add_output(model_path)
    manifest.add_output(curves_path)
    write_manifest(manifest)
    return EXIT_OK


def _load_hld(path, args, geometry):
    """HLD de un modelo; decodificador y simetría salen de la cabecera de sus datos"""
    net, metadata = load_model(path)
    if net.input_size != 2 * geometry.n_vertices:
        raise ConfigMismatchError(
            f"El modelo {path} espera {net.input_size} bits y L={geometry.L} produce {2 * geometry.n_vertices}"
        )
    if "dataset" not in metadata:
        return HighLevelDecoder(geometry, net, args.underlying, args.symmetry)
    cfg = HldConfig.from_header(DatasetHeader.from_dict(metadata["dataset"]))
    if cfg.L != geometry.L:
        raise ConfigMismatchError(f"El modelo {path} se entrenó con L={cfg.L}, se pidió L={geometry.L}")
    return HighLevelDecoder(geometry, net, cfg.underlying, cfg.symmetry_mode)


def build_variants(args, geometry):
    """Decodificadores a comparar, por nombre"""
    variants = {}
    if args.reference in DECODERS:
        variants[args.reference] = make_decoder(args.reference, geometry)
    underlying = WrappedDecoder(make_decoder(args.underlying, geometry), args.symmetry)
    variants.setdefault(underlying.name, underlying)
    for path in args.model or []:
        hld = _load_hld(path, args, geometry)
        if hld.name in variants:
            raise UsageError(f"Dos variantes se llamarían '{hld.name}' ({path})")
        variants[hld.name] = hld
    if args.reference not in variants:
        raise UsageError(f"La referencia '{args.reference}' no es ninguna de las variantes {sorted(variants)}")
    return variants


def cmd_eval(args):
    geometry = ToricGeometry(args.L)
    variants = build_variants(args, geometry)
    records = sweep(geometry, variants, args.p_list, args.n, args.seed, args.reference, args.jobs)
    output = write_records(args.out, records)

    thresholds = {}
    for name in variants:
        found = pseudo_threshold([record for record in records if record.variant == name])
        thresholds[name] = None if found is None else found.p
        print(f"{name}: pseudo-umbral " + ("no encontrado" if found is None
                                           else f"≈ {found.p:.4f} (entre {found.lower} y {found.upper})"))

    manifest = RunManifest("eval", settings={
        "L": args.L, "p_list": args.p_list, "n": args.n, "underlying": args.underlying,
        "symmetry": args.symmetry, "reference": args.reference, "models": args.model or [],
        "variants": sorted(variants), "common_random_numbers": True,
    }, seeds={"seed": args.seed}, summary={"pseudo_thresholds": thresholds})
    manifest.add_output(output)
    write_manifest(manifest)

    if args.store_db:
        if not db_manager.is_initialized and not db_manager.initialize():
            logger.warning("No se pudo abrir la base de resultados; se omite el archivado")
        else:
            db_manager.save_run(manifest, records)
    return EXIT_OK


def cmd_repro(args):
    result = run_case(args.case, args.seed)
    for line in result.details:
        print(line)
    print(f"{args.case}: {'OK' if result.passed else 'FALLO'}")

    if args.out:
        output = Path(args.out)
        output.parent.mkdir(parents=True, exist_ok=True)
        output.write_text("\n".join(result.details + [f"passed={result.passed}"]) + "\n", encoding="utf-8")
        manifest = RunManifest("repro", settings={"case": args.case}, seeds={"seed": args.seed},
                               summary={"passed": result.passed})
        manifest.add_output(output)
        write_manifest(manifest)
    return EXIT_OK if result.passed else EXIT_REPRO


def cmd_bench(args):
    stopwatch = Stopwatch()
    tables = {
        "align": bench_centering(args.L_list, args.p, args.n, args.seed),
        "trivial": bench_decoder("trivial", args.L_list, args.p, args.n, args.seed),
        "mwpm": bench_decoder("mwpm", args.L_list, args.p, args.n, args.seed),
    }
    frames = []
    slopes = {}
    for method, table in tables.items():
        table.insert(0, "method", method)
        frames.append(table)
        if len(table) >= 3:
            slopes[method] = fit_scaling(table["L"], table["mean_ns"]).slope
            print(f"{method}: pendiente log-log {slopes[method]:.2f}")

    output = write_table(args.out, pd.concat(frames, ignore_index=True))
    manifest = RunManifest("bench", settings={"L_list": args.L_list, "p": args.p, "n": args.n},
                           seeds={"seed": args.seed}, summary={"slopes": slopes})
    manifest.add_output(output)

    if args.detections:
        table = bench_detection_count(args.L_list[-1], args.detections, args.n, args.seed)
        fit = fit_scaling(table["detections"], table["mean_ns"])
        print(f"trivial frente a detecciones (L={args.L_list[-1]}): pendiente {fit.slope:.2f}")
        manifest.add_output(write_table(Path(args.out).with_suffix(".detections.csv"), table))

    write_manifest(manifest)
    logger.info(f"Benchmark terminado en {stopwatch}")
    return EXIT_OK


# ==================== PARSER ====================

def build_parser():
    parser = CliParser(prog="toric-hld", description="Decodificadores de alto nivel para el código tórico")
    parser.add_argument("--log-level", choices=LOG_LEVELS, help="Nivel mínimo de log (por defecto LOG_LEVEL)")
    parser.add_argument("--log-file", help="Archivo de log; una cadena vacía lo desactiva")
    subparsers = parser.add_subparsers(dest="command", required=True)

    gen = subparsers.add_parser("gen-data", help="Genera datos de entrenamiento")
    gen.add_argument("--L", type=int, required=True)
    gen.add_argument("--p", type=float, default=config.P_TRAIN)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--underlying", choices=sorted(DECODERS), default="mwpm")
    gen.add_argument("--symmetry", choices=SYMMETRY_CHOICES, default="none")
    gen.add_argument("--seed", type=_seed, required=True)
    gen.add_argument("--out", required=True)
    gen.add_argument("--jobs", type=int, default=config.DEFAULT_JOBS)
    gen.set_defaults(handler=cmd_gen_data)

    tr = subparsers.add_parser("train", help="Entrena la red")
    tr.add_argument("--data", required=True)
    tr.add_argument("--layers", type=_int_list, default=list(config.HIDDEN_LAYERS))
    tr.add_argument("--iters", type=int, default=config.N_ITERATIONS)
    tr.add_argument("--lr", type=float, default=config.LEARNING_RATE)
    tr.add_argument("--batch", type=int, default=config.BATCH_SIZE)
    tr.add_argument("--weight-decay", type=float, default=config.WEIGHT_DECAY)
    tr.add_argument("--init-width", type=float, default=config.INIT_WIDTH)
    tr.add_argument("--val-fraction", type=float, default=config.VALIDATION_FRACTION)
    tr.add_argument("--val-interval", type=int, default=config.VALIDATION_INTERVAL)
    tr.add_argument("--seed", type=_seed, required=True)
    tr.add_argument("--out-model", required=True)
    tr.add_argument("--out-curves", required=True)
    tr.set_defaults(handler=cmd_train)

    ev = subparsers.add_parser("eval", help="Barrido de tasas de error lógico")
    ev.add_argument("--model", action="append", help="Modelo entrenado; se puede repetir")
    ev.add_argument("--L", type=int, required=True)
    ev.add_argument("--p-list", type=_float_list, default=list(config.P_LIST))
    ev.add_argument("--n", type=int, required=True)
    ev.add_argument("--underlying", choices=sorted(DECODERS), default="mwpm")
    ev.add_argument("--symmetry", choices=SYMMETRY_CHOICES, default="none")
    ev.add_argument("--reference", default=config.REFERENCE_DECODER)
    ev.add_argument("--seed", type=_seed, required=True)
    ev.add_argument("--out", required=True)
    ev.add_argument("--jobs", type=int, default=config.DEFAULT_JOBS)
    ev.add_argument("--store-db", action="store_true", help="Archiva los resultados en DATABASE_URL")
    ev.set_defaults(handler=cmd_eval)

    rp = subparsers.add_parser("repro", help="Casos de regresión")
    rp.add_argument("--case", choices=sorted(REPRO_CASES), required=True)
    rp.add_argument("--seed", type=_seed, default=0)
    rp.add_argument("--out")
    rp.set_defaults(handler=cmd_repro)

    bn = subparsers.add_parser("bench", help="Tiempos de canonización y decodificación")
    bn.add_argument("--L-list", type=_int_list, required=True)
    bn.add_argument("--p", type=float, default=config.P_TRAIN)
    bn.add_argument("--n", type=int, required=True)
    bn.add_argument("--seed", type=_seed, required=True)
    bn.add_argument("--out", required=True)
    bn.add_argument("--detections", type=_int_list)
    bn.set_defaults(handler=cmd_bench)

    return parser


def main(argv=None):
    """Ejecuta la línea de comandos y devuelve el código de salida"""
    try:
        args = build_parser().parse_args(argv)
        if args.log_level or args.log_file is not None:
            setup_logging(args.log_level, args.log_file)
        return args.handler(args)
    except (UsageError, ArgumentError) as e:
        logger.error(f"Uso incorrecto: {e}")
        return EXIT_USAGE
    except (OSError, DatasetFormatError) as e:
        logger.error(f"Error de E/S o de formato: {e}")
        return EXIT_IO
    except ConfigMismatchError as e:
        logger.error(f"Configuración incompatible: {e}")
        return EXIT_CONFIG
