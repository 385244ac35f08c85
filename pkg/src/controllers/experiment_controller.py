#!/usr/bin/env python3
"""Experiment pipeline: load, split, train, score and evaluate across seeds"""
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from ..models.config import ExperimentConfig, config_echo
from ..models.dataset import (RatingDataset, Split, binarize, parse_ratings, pop_rank,
                              split_per_user, write_manifest)
from ..models.errors import ConfigError
from ..models.matrices import DenseMatrix, ObservationMatrix
from ..models.model_file import ModelFile, load_model, save_model
from ..models.synthetic import TrendReport, generate, indicator_loss, thresholded_loss
from ..utils.constants import (CP_GRID, LAMBDA1_SWEEP, LAMBDA2_SWEEP, LATENT_DIM_GRID,
                               STEP_MULTIPLIERS, SWEEP_FIXED_LAMBDA)
from ..utils.formatters import format_duration
from ..utils.logger import logger
from .bf_solver import fit_bf, predict_bf, BfState
from .evaluator import MetricValues, MetricsReport, evaluate_scores
from .nnm_solver import fit, predict

SWEEP_PARAMETERS = ('c_p', 'eta', 'lambda1', 'lambda2', 'latent_dim')
# settings that decide which positives a model was trained on
SPLIT_KEYS = ('data.format', 'data.threshold', 'data.fraction')


@dataclass
class ExperimentResult:
    """Per-seed reports plus their mean and standard deviation"""
    solver: str
    per_seed: Dict[int, MetricsReport] = field(default_factory=dict)
    setting: str = ""

    @property
    def label(self) -> str:
        return f"{self.solver}[{self.setting}]" if self.setting else self.solver

    def _aggregate(self, reducer) -> MetricsReport:
        reports = list(self.per_seed.values())
        aggregate = MetricsReport(n_users=int(np.mean([r.n_users for r in reports])))
        for n in sorted(reports[0].by_n):
            values = np.array([[r.by_n[n].precision, r.by_n[n].recall, r.by_n[n].f1, r.by_n[n].ndcg]
                               for r in reports])
            precision, recall, f1, ndcg = (float(v) for v in reducer(values))
            aggregate.by_n[n] = MetricValues(precision=precision, recall=recall, f1=f1, ndcg=ndcg)
        return aggregate

    @property
    def mean(self) -> MetricsReport:
        return self._aggregate(lambda values: values.mean(axis=0))

    @property
    def std(self) -> MetricsReport:
        return self._aggregate(lambda values: values.std(axis=0))


def train_model(kind: str, train: ObservationMatrix, config: ExperimentConfig, seed: int) -> ModelFile:
    """Fit one solver on a training matrix and package the result"""
    echo = config_echo(config)
    if kind == 'poprank':
        counts = train.row_counts().astype(np.float64)[:, None]
        logger.info(f"Most popular items: {pop_rank(train)[:5].tolist()}")
        return ModelFile(kind=kind, rows=train.rows, cols=train.cols, seed=seed,
                         matrices={'popularity': counts}, config=echo)
    if kind == 'csrr-e':
        bf_config = config.to_bf_config(seed)
        state = fit_bf(train, bf_config)
        return ModelFile(kind=kind, rows=train.rows, cols=train.cols, seed=seed,
                         latent_dim=bf_config.latent_dim, config=echo,
                         matrices={'p': state.p, 'q': state.q, 'v': state.v})
    state = fit(train, config.to_solver_config(seed))
    return ModelFile(kind=kind, rows=train.rows, cols=train.cols, seed=seed, config=echo,
                     matrices={'u': state.u, 'v': state.v})


def model_scores(model: ModelFile) -> DenseMatrix:
    """Raw (unclamped) ranking scores of a trained model"""
    if model.kind == 'poprank':
        return np.repeat(model.matrices['popularity'], model.cols, axis=1)
    if model.kind == 'csrr-e':
        return predict_bf(BfState(p=model.matrices['p'], q=model.matrices['q'], v=model.matrices['v']))
    return model.matrices['u'] + model.matrices['v']


class ExperimentController:
    """Coordinates data loading, training and evaluation for one configuration"""

    def __init__(self, config: ExperimentConfig):
        config.validate()
        self.config = config
        self.dataset: Optional[RatingDataset] = None
        self.observations: Optional[ObservationMatrix] = None

        logger.info(f"Experiment controller initialized for {config.solver.kind}")

    def load_data(self) -> ObservationMatrix:
        """Parse and binarize the configured ratings file once"""
        if self.observations is None:
            data = self.config.data
            if not data.path:
                raise ConfigError("no dataset path configured (data.path / --data)")
            self.dataset = parse_ratings(data.resolved_path(), data.format)
            self.observations = binarize(self.dataset, data.threshold)
            logger.info(f"Density before binarization {self.dataset.density():.4e}, "
                        f"after {self.observations.density():.4e}")
        return self.observations

    def make_split(self, seed: int) -> Split:
        split = split_per_user(self.load_data(), self.config.data.fraction, seed)
        manifest = self.config.output.manifest_path
        if manifest:
            path = Path(manifest)
            write_manifest(split, path.with_name(f"{path.stem}.seed{seed}{path.suffix or '.txt'}"),
                           self.dataset)
        return split

    def evaluate_model(self, model: ModelFile, split: Split) -> MetricsReport:
        return evaluate_scores(model_scores(model), split.train, split.test, self.config.evaluation.ns)

    def fit_seed(self, seed: int) -> Tuple[ModelFile, Split]:
        split = self.make_split(seed)
        start = time.perf_counter()
        model = train_model(self.config.solver.kind, split.train, self.config, seed)
        logger.info(f"Trained {model.kind} for seed {seed} in "
                    f"{format_duration(time.perf_counter() - start)}")
        return model, split

    def fit_and_save(self, seed: int, model_path: Optional[str] = None) -> Path:
        """Train on one seed's split and write the model file"""
        model, _ = self.fit_seed(seed)
        return save_model(model, model_path or self.config.output.model_path)

    def evaluate_saved(self, model_path: str) -> MetricsReport:
        """Re-create the split a saved model was trained on and evaluate it

        Binarization and split settings come from the model header, so the held-out
        items are exactly the ones the model never saw.
        """
        model = load_model(model_path)
        controller = self._for_model(model)
        observations = controller.load_data()
        if (model.rows, model.cols) != observations.shape:
            raise ConfigError(f"model is {model.rows}x{model.cols} but the dataset is "
                              f"{observations.rows}x{observations.cols}")
        split = controller.make_split(model.seed)
        report = controller.evaluate_model(model, split)
        self._log_report(model.kind, model.seed, report)
        return report

    def _for_model(self, model: ModelFile) -> 'ExperimentController':
        """This controller, or a copy whose split settings match the model's training run"""
        current = config_echo(self.config)
        config = self.config
        for key in SPLIT_KEYS:
            if key not in model.config or model.config[key] == current[key]:
                continue
            logger.warning(f"Using {key}={model.config[key]!r} recorded in the model "
                           f"instead of {current[key]!r}")
            config = config.with_value(key, model.config[key])
        if config is self.config:
            return self
        return ExperimentController(config)

    def run(self, setting: str = "") -> ExperimentResult:
        """Train and evaluate once per configured seed"""
        result = ExperimentResult(solver=self.config.solver.kind, setting=setting)
        seeds = self.config.data.seeds
        for seed in tqdm(seeds, desc=result.label, disable=len(seeds) < 2, leave=False):
            model, split = self.fit_seed(seed)
            report = self.evaluate_model(model, split)
            result.per_seed[seed] = report
            self._log_report(result.label, seed, report)
        return result

    def run_sweep(self, parameter: str) -> List[ExperimentResult]:
        """Vary one hyperparameter over its sensitivity grid, everything else fixed"""
        if parameter not in SWEEP_PARAMETERS:
            raise ConfigError(f"unknown sweep parameter '{parameter}', expected one of "
                              f"{', '.join(SWEEP_PARAMETERS)}")
        base = self.config
        if parameter == 'c_p':
            settings = [(f"c_p={v:g}", base.with_value('solver.c_p', v)) for v in CP_GRID]
        elif parameter == 'eta':
            settings = [(f"eta=x{v:g}", base.with_value('solver.eta', base.solver.eta * v))
                        for v in STEP_MULTIPLIERS]
        elif parameter == 'lambda1':
            fixed = base.with_value('solver.lambda2', SWEEP_FIXED_LAMBDA)
            settings = [(f"lambda1={v:g}", fixed.with_value('solver.lambda1', v)) for v in LAMBDA1_SWEEP]
        elif parameter == 'lambda2':
            fixed = base.with_value('solver.lambda1', SWEEP_FIXED_LAMBDA)
            settings = [(f"lambda2={v:g}", fixed.with_value('solver.lambda2', v)) for v in LAMBDA2_SWEEP]
        else:
            limit = min(self.load_data().shape)
            settings = [(f"d={v}", base.with_value('solver.latent_dim', v))
                        for v in LATENT_DIM_GRID if v <= limit]
            if not settings:
                raise ConfigError(f"no latent dimension in {LATENT_DIM_GRID} fits a "
                                  f"{self.observations.rows}x{self.observations.cols} matrix")

        results = []
        for label, config in settings:
            controller = ExperimentController(config)
            controller.dataset, controller.observations = self.dataset, self.observations
            results.append(controller.run(setting=label))
            self.dataset, self.observations = controller.dataset, controller.observations
        return results

    def _log_report(self, label: str, seed: int, report: MetricsReport) -> None:
        summary = ", ".join(f"P@{n}={v.precision:.4f} R@{n}={v.recall:.4f} NDCG@{n}={v.ndcg:.4f}"
                            for n, v in report.as_rows())
        logger.info(f"{label} seed {seed} ({report.n_users} users): {summary}")


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    return ExperimentController(config).run()


def evaluate_synthetic(kind: str, config: ExperimentConfig, n: int, m: int, rank: int,
                       outlier_frac: float, rho: float, seed: int, q: float = 0.5) -> MetricsReport:
    """Rank-metric evaluation of one solver on a generated problem, split per user"""
    truth = generate(n, m, rank, outlier_frac, q, rho, seed)
    split = split_per_user(truth.a, config.data.fraction, seed)
    model = train_model(kind, split.train, config, seed)
    return evaluate_scores(model_scores(model), split.train, split.test, config.evaluation.ns)


def compare_solvers(config: ExperimentConfig, kinds: Sequence[str] = ('csrr-i', 'csrr-e'),
                    n: int = 30, m: int = 20, rank: int = 2, outlier_frac: float = 0.02,
                    rho: float = 0.5, seeds: Sequence[int] = (0, 1, 2)) -> Dict[str, float]:
    """Seed-averaged NDCG at the smallest cutoff for each solver on the same synthetic data"""
    cutoff = min(config.evaluation.ns)
    means = {}
    for kind in kinds:
        scores = [evaluate_synthetic(kind, config, n, m, rank, outlier_frac, rho, seed).by_n[cutoff].ndcg
                  for seed in seeds]
        means[kind] = float(np.mean(scores))
        logger.info(f"{kind} synthetic NDCG@{cutoff} = {means[kind]:.4f}")
    return means


def trend_check(config: ExperimentConfig, sizes: Sequence[Tuple[int, int]] = ((20, 16), (80, 64)),
                rank: int = 2, outlier_frac: float = 0.02, rho: float = 0.5, q: float = 0.5,
                seeds: Sequence[int] = (0, 1, 2, 3, 4)) -> TrendReport:
    """Per-entry thresholded loss of fitted models at growing sizes"""
    solver_config = config.to_solver_config(seeds[0])
    alpha = solver_config.cost.alpha
    report = TrendReport(alpha=alpha)
    for n, m in sizes:
        losses, truth_losses = [], []
        for seed in seeds:
            truth = generate(n, m, rank, outlier_frac, q, rho, seed)
            x = predict(fit(truth.a, config.to_solver_config(seed)))
            losses.append(thresholded_loss(x, truth, alpha) / (n * m))
            truth_losses.append(indicator_loss(x, truth.y, q, alpha) / (n * m))
        report.mean_loss[(n, m)] = float(np.mean(losses))
        report.mean_truth_loss[(n, m)] = float(np.mean(truth_losses))
        logger.info(f"{n}x{m}: loss per entry vs A {report.mean_loss[(n, m)]:.4f}, "
                    f"vs Y {report.mean_truth_loss[(n, m)]:.4f}")
    return report
