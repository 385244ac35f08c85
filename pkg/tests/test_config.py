import json

import pytest

from src.models.config import BfConfig, ExperimentConfig, SolverConfig, config_echo
from src.models.costs import LossVariant
from src.models.errors import ConfigError
from src.utils.constants import DATA_DIR_ENV, PRESETS
from src.utils.validators import (validate_cost_positive, validate_count, validate_cutoffs,
                                  validate_fraction, validate_positive, validate_solver_kind)


def test_defaults_follow_protocol():
    config = ExperimentConfig()
    assert config.data.threshold == 3.0
    assert config.data.fraction == 0.8
    assert config.data.seeds == [0, 1, 2, 3, 4]
    assert config.evaluation.ns == [5, 10, 15]
    config.validate()


def test_data_dir_from_environment(monkeypatch, tmp_path):
    monkeypatch.setenv(DATA_DIR_ENV, str(tmp_path))
    assert ExperimentConfig().data.data_dir == str(tmp_path)


def test_resolved_path_falls_back_to_data_dir(tmp_path, monkeypatch):
    (tmp_path / 'ml-100k').mkdir()
    (tmp_path / 'ml-100k' / 'u.data').write_text("1\t1\t5\t0\n")
    monkeypatch.chdir(tmp_path.parent)
    config = ExperimentConfig().with_value('data.data_dir', str(tmp_path))
    config = config.with_value('data.path', 'ml-100k/u.data')
    assert config.data.resolved_path() == tmp_path / 'ml-100k' / 'u.data'


def test_with_value_coerces_text():
    config = ExperimentConfig()
    config = config.with_value('solver.eta', '0.5')
    config = config.with_value('max_iters', '30')
    config = config.with_value('data.seeds', '1, 2 3')
    assert config.solver.eta == 0.5
    assert config.solver.max_iters == 30
    assert config.data.seeds == [1, 2, 3]


def test_with_value_rejects_unknown_and_bad_values():
    config = ExperimentConfig()
    with pytest.raises(ConfigError):
        config.with_value('solver.momentum', 1)
    with pytest.raises(ConfigError):
        config.with_value('solver.eta', 'fast')


def test_load_key_value_file(tmp_path):
    path = tmp_path / 'run.conf'
    path.write_text("# experiment\nsolver.kind = csrr-ii\nc_p = 0.9  # aggressive\n\nns = 5 10\n")
    config = ExperimentConfig.load_from_file(str(path))
    assert config.solver.kind == 'csrr-ii'
    assert config.solver.c_p == 0.9
    assert config.evaluation.ns == [5, 10]
    assert config.loss_variant is LossVariant.TYPE_II


def test_load_key_value_file_requires_equals(tmp_path):
    path = tmp_path / 'run.conf'
    path.write_text("solver.kind csrr-i\n")
    with pytest.raises(ConfigError):
        ExperimentConfig.load_from_file(str(path))


def test_json_round_trip(tmp_path):
    config = ExperimentConfig().with_value('solver.kind', 'csrr-e').with_value('latent_dim', 10)
    path = tmp_path / 'config.json'
    assert config.save_to_file(str(path))
    assert json.loads(path.read_text())['solver']['latent_dim'] == 10
    assert ExperimentConfig.load_from_file(str(path)) == config


@pytest.mark.parametrize('content', ['[1, 2]', '"text"', '{"solver": 3}', '{"data": ["path"]}'])
def test_json_must_be_sectioned_objects(tmp_path, content):
    path = tmp_path / 'config.json'
    path.write_text(content)
    with pytest.raises(ConfigError):
        ExperimentConfig.load_from_file(str(path))


def test_missing_file_raises():
    with pytest.raises(ConfigError):
        ExperimentConfig.load_from_file('does-not-exist.json')


def test_validate_rejects_bad_settings():
    with pytest.raises(ConfigError):
        ExperimentConfig().with_value('solver.kind', 'svd').validate()
    with pytest.raises(ConfigError):
        ExperimentConfig().with_value('solver.c_p', 0.3).validate()
    with pytest.raises(ConfigError):
        ExperimentConfig().with_value('data.fraction', 1.0).validate()
    with pytest.raises(ConfigError):
        ExperimentConfig().with_value('solver.eta', -1.0).validate()


def test_presets_apply_to_solver_section():
    config = ExperimentConfig().with_preset('synthetic')
    for name, value in PRESETS['synthetic'].items():
        assert getattr(config.solver, name) == value
    with pytest.raises(ConfigError):
        ExperimentConfig().with_preset('netflix')


def test_solver_configs_from_experiment():
    config = ExperimentConfig().with_value('solver.kind', 'csrr-i-v0').with_value('c_p', 0.75)
    solver = config.to_solver_config(seed=3)
    assert isinstance(solver, SolverConfig)
    assert solver.disable_outliers
    assert solver.seed == 3
    assert solver.cost.alpha == pytest.approx(3.0)
    bf = config.to_bf_config(seed=1)
    assert isinstance(bf, BfConfig) and bf.latent_dim == 20


def test_bf_config_dimension_check():
    with pytest.raises(ConfigError):
        BfConfig(latent_dim=5).check_dims(10, 4)
    with pytest.raises(ConfigError):
        BfConfig(latent_dim=0)


def test_config_echo_is_flat():
    echo = config_echo(ExperimentConfig())
    assert echo['solver.kind'] == 'csrr-i'
    assert echo['evaluation.ns'] == [5, 10, 15]


def test_validators():
    assert validate_positive('eta', 0.1) == (True, None)
    assert not validate_positive('eta', float('nan'))[0]
    assert not validate_count('max_iters', True)[0]
    assert not validate_fraction(0.0)[0]
    assert validate_cost_positive(0.5)[0] and not validate_cost_positive(1.0)[0]
    assert not validate_cutoffs([])[0]
    assert not validate_cutoffs([5, 0])[0]
    assert not validate_solver_kind('wrmf')[0]
