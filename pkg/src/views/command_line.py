#!/usr/bin/env python3
"""Command-line surface: subcommands, flag parsing and config merging"""
import argparse
import sys
from typing import List, Optional

from ..controllers.download_controller import DownloadController
from ..controllers.experiment_controller import (SWEEP_PARAMETERS, ExperimentController,
                                                 compare_solvers, trend_check)
from ..models.config import ExperimentConfig
from ..models.errors import (ConfigError, CsrrError, DivergenceError, NumericFailureError)
from ..utils.constants import DATA_FORMATS, PRESETS, SOLVER_KINDS
from ..utils.logger import logger
from .report_view import render_metrics, render_table, render_trend, write_report_csv

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SOLVER = 3
EXIT_DATA = 4

# flag destination -> config key
_FLAG_KEYS = {
    'data': 'data.path', 'format': 'data.format', 'threshold': 'data.threshold',
    'fraction': 'data.fraction', 'seeds': 'data.seeds', 'data_dir': 'data.data_dir',
    'solver': 'solver.kind', 'c_p': 'solver.c_p', 'eta': 'solver.eta',
    'lambda1': 'solver.lambda1', 'lambda2': 'solver.lambda2', 'max_iters': 'solver.max_iters',
    'rel_tol': 'solver.rel_tol', 'latent_dim': 'solver.latent_dim',
    'inner_max_iters': 'solver.inner_max_iters', 'inner_rel_tol': 'solver.inner_rel_tol',
    'ns': 'evaluation.ns', 'q': 'evaluation.q',
    'output': 'output.report_path', 'model': 'output.model_path',
    'manifest': 'output.manifest_path', 'log_dir': 'output.log_dir',
}


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--config', help="JSON or 'key = value' config file")
    parser.add_argument('--preset', choices=sorted(PRESETS), help="documented solver setting")
    parser.add_argument('--verbose', action='store_true', help="log every iteration to the console")

    data = parser.add_argument_group('data')
    data.add_argument('--data', help="ratings file (relative paths also tried under the data dir)")
    data.add_argument('--format', choices=DATA_FORMATS)
    data.add_argument('--data-dir', help="default data directory (env CSRR_DATA_DIR)")
    data.add_argument('--threshold', type=float, help="ratings above this are positives")
    data.add_argument('--fraction', type=float, help="per-user train fraction")
    data.add_argument('--seeds', type=int, nargs='+', help="split/initialization seeds")

    solver = parser.add_argument_group('solver')
    solver.add_argument('--solver', choices=SOLVER_KINDS)
    solver.add_argument('--c-p', dest='c_p', type=float, help="false-negative cost, alpha = c_p / (1 - c_p)")
    solver.add_argument('--eta', type=float, help="step size")
    solver.add_argument('--lambda1', type=float, help="low-rank (nuclear or Frobenius) weight")
    solver.add_argument('--lambda2', type=float, help="outlier (l1) weight")
    solver.add_argument('--max-iters', dest='max_iters', type=int)
    solver.add_argument('--rel-tol', dest='rel_tol', type=float)
    solver.add_argument('--latent-dim', dest='latent_dim', type=int, help="bilinear rank d")
    solver.add_argument('--inner-max-iters', dest='inner_max_iters', type=int)
    solver.add_argument('--inner-rel-tol', dest='inner_rel_tol', type=float)

    evaluation = parser.add_argument_group('evaluation and output')
    evaluation.add_argument('--ns', type=int, nargs='+', help="top-N cutoffs")
    evaluation.add_argument('--q', type=float, help="classification threshold for cost metrics")
    evaluation.add_argument('--output', help="CSV report path")
    evaluation.add_argument('--model', help="model file path")
    evaluation.add_argument('--manifest', help="write split manifests next to this path")
    evaluation.add_argument('--log-dir', dest='log_dir')
    evaluation.add_argument('--dataset-name', dest='dataset_name', choices=('ml-100k', 'ml-1m'),
                            help="print the published rows for this dataset beside the results")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='csrr', description="Robust cost-sensitive low-rank plus sparse recommendation")
    commands = parser.add_subparsers(dest='command', required=True)

    fit = commands.add_parser('fit', help="train on one seed's split and save the model")
    _add_common(fit)
    evaluate = commands.add_parser('evaluate', help="evaluate a saved model on its split")
    _add_common(evaluate)
    experiment = commands.add_parser('experiment', help="train and evaluate over all seeds")
    _add_common(experiment)
    sweep = commands.add_parser('sweep', help="sensitivity sweep over one hyperparameter")
    _add_common(sweep)
    sweep.add_argument('parameter', choices=SWEEP_PARAMETERS)
    synth = commands.add_parser('synth-check', help="synthetic solver cross-check and size trend")
    _add_common(synth)
    download = commands.add_parser('download', help="fetch a MovieLens archive")
    download.add_argument('dataset', choices=('ml-100k', 'ml-1m'))
    download.add_argument('--data-dir', help="target directory (env CSRR_DATA_DIR)")
    download.add_argument('--force', action='store_true')
    download.add_argument('--verbose', action='store_true')
    return parser


def build_config(args: argparse.Namespace, default_preset: Optional[str] = None) -> ExperimentConfig:
    """Defaults, then the config file, then the preset, then explicit flags"""
    config = ExperimentConfig.load_from_file(args.config) if args.config else ExperimentConfig()
    preset = getattr(args, 'preset', None) or default_preset
    if preset:
        config = config.with_preset(preset)
    for dest, key in _FLAG_KEYS.items():
        value = getattr(args, dest, None)
        if value is not None:
            config = config.with_value(key, value)
    config.validate()
    return config


def _run(args: argparse.Namespace) -> int:
    if args.command == 'download':
        data_dir = args.data_dir or ExperimentConfig().data.data_dir
        path = DownloadController(data_dir).fetch(args.dataset, force=args.force)
        print(path)
        return EXIT_OK

    config = build_config(args, 'synthetic' if args.command == 'synth-check' else None)
    logger.configure(config.output.log_dir, verbose=args.verbose)

    if args.command == 'synth-check':
        for kind, value in compare_solvers(config).items():
            print(f"{kind}: NDCG@{min(config.evaluation.ns)} = {value:.4f}")
        print(render_trend(trend_check(config)))
        return EXIT_OK

    controller = ExperimentController(config)
    if args.command == 'fit':
        path = controller.fit_and_save(config.data.seeds[0])
        print(path)
    elif args.command == 'evaluate':
        print(render_metrics(controller.evaluate_saved(config.output.model_path)))
    elif args.command == 'experiment':
        result = controller.run()
        write_report_csv([result], config.output.report_path)
        render_table([result], args.dataset_name or "", sys.stdout)
    elif args.command == 'sweep':
        results = controller.run_sweep(args.parameter)
        write_report_csv(results, config.output.report_path)
        render_table(results, "", sys.stdout)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run the command and map failures to exit codes"""
    args = build_parser().parse_args(argv)
    if getattr(args, 'verbose', False):
        logger.configure(verbose=True)
    try:
        return _run(args)
    except ConfigError as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_USAGE
    except (DivergenceError, NumericFailureError) as e:
        logger.error(f"Solver failed: {e}")
        return EXIT_SOLVER
    except (CsrrError, OSError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_DATA
