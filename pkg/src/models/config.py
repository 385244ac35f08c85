#!/usr/bin/env python3
"""Configuration management for csrr-rec"""
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any, Dict, List, Optional, Tuple
import json
import os
from pathlib import Path

from .costs import CostModel, LossVariant
from .errors import ConfigError
from ..utils.constants import (DATA_DIR_ENV, DEFAULT_CUTOFFS, DEFAULT_DATA_DIR,
                               DEFAULT_SEEDS, PRESETS)
from ..utils.validators import (validate_count, validate_cost_positive, validate_cutoffs,
                                validate_data_format, validate_fraction, validate_non_negative,
                                validate_positive, validate_solver_kind, validate_threshold)


def _require(result: Tuple[bool, Optional[str]]) -> None:
    valid, error = result
    if not valid:
        raise ConfigError(error)


@dataclass(frozen=True)
class SolverConfig:
    """Step size, regularizers, iteration budget and costs shared by both solvers"""
    eta: float = 0.1
    lambda1: float = 1.0
    lambda2: float = 1.0
    max_iters: int = 200
    rel_tol: float = 1e-5
    seed: int = 0
    cost: CostModel = field(default_factory=lambda: CostModel.from_cp(0.8))
    # Holds the outlier component at zero (the V-disabled ablation)
    disable_outliers: bool = False

    def __post_init__(self):
        _require(validate_positive('eta', self.eta))
        _require(validate_positive('rel_tol', self.rel_tol))
        _require(validate_non_negative('lambda1', self.lambda1))
        _require(validate_non_negative('lambda2', self.lambda2))
        _require(validate_count('max_iters', self.max_iters))


@dataclass(frozen=True)
class BfConfig:
    """Bilinear-factorization settings on top of a SolverConfig"""
    base: SolverConfig = field(default_factory=SolverConfig)
    latent_dim: int = 20
    inner_max_iters: int = 50
    inner_rel_tol: float = 1e-4

    def __post_init__(self):
        _require(validate_count('latent_dim', self.latent_dim))
        _require(validate_count('inner_max_iters', self.inner_max_iters))
        _require(validate_positive('inner_rel_tol', self.inner_rel_tol))

    def check_dims(self, rows: int, cols: int) -> None:
        if self.latent_dim > min(rows, cols):
            raise ConfigError(f"latent_dim={self.latent_dim} exceeds min(n, m)={min(rows, cols)}")


@dataclass
class DataConfig:
    """Dataset and split settings"""
    path: str = ""
    format: str = "tab"
    threshold: float = 3.0
    fraction: float = 0.8
    seeds: List[int] = field(default_factory=lambda: list(DEFAULT_SEEDS))
    data_dir: str = field(default_factory=lambda: os.environ.get(DATA_DIR_ENV, DEFAULT_DATA_DIR))

    def resolved_path(self) -> Path:
        """Relative dataset paths are looked up under the data directory when not found as given"""
        path = Path(self.path)
        if not path.is_absolute() and not path.exists():
            candidate = Path(self.data_dir) / path
            if candidate.exists():
                return candidate
        return path


@dataclass
class SolverSection:
    """Solver selector and hyperparameters"""
    kind: str = "csrr-i"
    c_p: float = 0.8
    eta: float = 0.1
    lambda1: float = 5.0
    lambda2: float = 1.0
    max_iters: int = 200
    rel_tol: float = 1e-5
    latent_dim: int = 20
    inner_max_iters: int = 50
    inner_rel_tol: float = 1e-4


@dataclass
class EvaluationConfig:
    """Metric settings"""
    ns: List[int] = field(default_factory=lambda: list(DEFAULT_CUTOFFS))
    q: float = 0.5


@dataclass
class OutputConfig:
    """Where reports, models and logs go"""
    report_path: str = "results/report.csv"
    model_path: str = "results/model.csrr"
    manifest_path: str = ""
    log_dir: str = "logs"


_SECTIONS = {
    'data': DataConfig,
    'solver': SolverSection,
    'evaluation': EvaluationConfig,
    'output': OutputConfig,
}


@dataclass
class ExperimentConfig:
    """Main experiment configuration"""
    data: DataConfig = field(default_factory=DataConfig)
    solver: SolverSection = field(default_factory=SolverSection)
    evaluation: EvaluationConfig = field(default_factory=EvaluationConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    @classmethod
    def load_from_file(cls, config_path: str = "config.json") -> 'ExperimentConfig':
        """Load configuration from a sectioned JSON file or a key = value text file"""
        path = Path(config_path)
        if not path.exists():
            raise ConfigError(f"config file not found: {config_path}")

        if path.suffix == '.json':
            try:
                data = json.loads(path.read_text())
            except json.JSONDecodeError as e:
                raise ConfigError(f"invalid JSON in {config_path}: {e}") from e
            if not isinstance(data, dict):
                raise ConfigError(f"{config_path}: top level must be an object of sections")
            config = cls()
            for section, values in data.items():
                if not isinstance(values, dict):
                    raise ConfigError(f"{config_path}: section '{section}' must be an object")
                for key, value in values.items():
                    config = config.with_value(f"{section}.{key}", value)
        else:
            config = cls()
            for line_number, raw in enumerate(path.read_text().splitlines(), start=1):
                line = raw.split('#', 1)[0].strip()
                if not line:
                    continue
                if '=' not in line:
                    raise ConfigError(f"{config_path}:{line_number}: expected 'key = value'")
                key, value = (part.strip() for part in line.split('=', 1))
                config = config.with_value(key, value)

        config.validate()
        return config

    def save_to_file(self, config_path: str = "config.json") -> bool:
        """Save configuration to JSON file"""
        try:
            Path(config_path).parent.mkdir(parents=True, exist_ok=True)
            with open(config_path, 'w') as f:
                json.dump(asdict(self), f, indent=2)
            return True
        except OSError:
            return False

    def with_value(self, key: str, value: Any) -> 'ExperimentConfig':
        """Return a copy with one setting replaced; key is 'section.name' or a unique bare name"""
        section_name, name = self._locate(key)
        section = getattr(self, section_name)
        current = getattr(section, name)
        updated = replace(section, **{name: _coerce(value, current, key)})
        return replace(self, **{section_name: updated})

    def with_preset(self, preset: str) -> 'ExperimentConfig':
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset '{preset}', expected one of {', '.join(PRESETS)}")
        config = self
        for name, value in PRESETS[preset].items():
            config = config.with_value(f"solver.{name}", value)
        return config

    def _locate(self, key: str) -> Tuple[str, str]:
        if '.' in key:
            section_name, name = key.split('.', 1)
            if section_name not in _SECTIONS or name not in _field_names(_SECTIONS[section_name]):
                raise ConfigError(f"unknown setting '{key}'")
            return section_name, name
        owners = [s for s, cls in _SECTIONS.items() if key in _field_names(cls)]
        if len(owners) != 1:
            raise ConfigError(f"unknown or ambiguous setting '{key}'")
        return owners[0], key

    def validate(self) -> None:
        """Raise ConfigError for any invalid setting"""
        _require(validate_solver_kind(self.solver.kind))
        _require(validate_data_format(self.data.format))
        _require(validate_fraction(self.data.fraction))
        _require(validate_cutoffs(self.evaluation.ns))
        _require(validate_threshold(self.evaluation.q))
        if not self.data.seeds:
            raise ConfigError("at least one seed is required")
        if self.solver.kind != 'poprank':
            _require(validate_cost_positive(self.solver.c_p))
            self.to_bf_config(self.data.seeds[0])

    @property
    def loss_variant(self) -> LossVariant:
        return LossVariant.TYPE_II if self.solver.kind == 'csrr-ii' else LossVariant.TYPE_I

    def to_solver_config(self, seed: int) -> SolverConfig:
        s = self.solver
        return SolverConfig(
            eta=s.eta, lambda1=s.lambda1, lambda2=s.lambda2, max_iters=s.max_iters,
            rel_tol=s.rel_tol, seed=seed, cost=CostModel.from_cp(s.c_p, self.loss_variant),
            disable_outliers=(s.kind == 'csrr-i-v0'),
        )

    def to_bf_config(self, seed: int) -> BfConfig:
        s = self.solver
        return BfConfig(base=self.to_solver_config(seed), latent_dim=s.latent_dim,
                        inner_max_iters=s.inner_max_iters, inner_rel_tol=s.inner_rel_tol)


def _field_names(cls) -> List[str]:
    return [f.name for f in fields(cls)]


def _coerce(value: Any, current: Any, key: str) -> Any:
    """Convert text values from key = value files and CLI flags to the type of the default"""
    if not isinstance(value, str):
        if isinstance(current, float) and isinstance(value, int) and not isinstance(value, bool):
            return float(value)
        return value
    try:
        if isinstance(current, bool):
            return value.lower() in ('1', 'true', 'yes', 'on')
        if isinstance(current, int):
            return int(value)
        if isinstance(current, float):
            return float(value)
        if isinstance(current, list):
            return [int(item) for item in value.replace(',', ' ').split()]
    except ValueError as e:
        raise ConfigError(f"invalid value '{value}' for '{key}'") from e
    return value


def config_echo(config: ExperimentConfig) -> Dict[str, Any]:
    """Flat dictionary of the settings, for model headers and report footers"""
    return {f"{section}.{k}": v for section, values in asdict(config).items() for k, v in values.items()}
