import numpy as np
import pytest

from src.controllers.experiment_controller import (ExperimentController, ExperimentResult,
                                                   compare_solvers, evaluate_synthetic,
                                                   model_scores, run_experiment, train_model,
                                                   trend_check)
from src.controllers.evaluator import MetricValues, MetricsReport
from src.models.config import ExperimentConfig
from src.models.dataset import pop_rank
from src.models.errors import ConfigError
from src.models.matrices import ObservationMatrix
from src.utils.constants import CP_GRID, REFERENCE_RESULTS, REPORT_COLUMNS


def small_config(path, tmp_path, kind='csrr-i', seeds=(0, 1), **solver):
    config = (ExperimentConfig()
              .with_value('data.path', str(path))
              .with_value('data.seeds', list(seeds))
              .with_value('solver.kind', kind)
              .with_value('solver.max_iters', solver.pop('max_iters', 30))
              .with_value('solver.latent_dim', solver.pop('latent_dim', 3))
              .with_value('output.report_path', str(tmp_path / 'report.csv'))
              .with_value('output.model_path', str(tmp_path / 'model.csrr')))
    for name, value in solver.items():
        config = config.with_value(f"solver.{name}", value)
    return config


def assert_report_in_range(report: MetricsReport):
    assert report.n_users > 0
    for _, values in report.as_rows():
        for value in (values.precision, values.recall, values.f1, values.ndcg):
            assert 0.0 <= value <= 1.0


@pytest.mark.parametrize('kind', ['csrr-i', 'csrr-ii', 'csrr-e', 'poprank', 'csrr-i-v0'])
def test_run_every_solver(synthetic_ratings, tmp_path, kind):
    result = run_experiment(small_config(synthetic_ratings, tmp_path, kind=kind))
    assert result.solver == kind
    assert sorted(result.per_seed) == [0, 1]
    for report in result.per_seed.values():
        assert_report_in_range(report)
    assert sorted(result.mean.by_n) == [5, 10, 15]


def test_runs_are_deterministic(synthetic_ratings, tmp_path):
    config = small_config(synthetic_ratings, tmp_path, seeds=(2,))
    first = run_experiment(config).per_seed[2]
    second = run_experiment(config).per_seed[2]
    assert first.by_n == second.by_n


def test_missing_dataset_path_is_config_error(tmp_path):
    with pytest.raises(ConfigError):
        ExperimentController(ExperimentConfig()).load_data()


def test_poprank_scores_follow_popularity():
    train = ObservationMatrix.from_positives(4, 3, [(1, 0), (1, 1), (2, 2), (1, 2), (2, 0)])
    model = train_model('poprank', train, ExperimentConfig().with_value('solver.kind', 'poprank'), 0)
    scores = model_scores(model)
    assert scores.shape == (4, 3)
    assert np.argsort(-scores[:, 0], kind='stable').tolist() == pop_rank(train).tolist()


def test_fit_and_evaluate_saved_model(synthetic_ratings, tmp_path):
    config = small_config(synthetic_ratings, tmp_path, kind='csrr-e', seeds=(1,))
    controller = ExperimentController(config)
    path = controller.fit_and_save(1)
    model, split = controller.fit_seed(1)
    expected = controller.evaluate_model(model, split)
    reloaded = ExperimentController(config).evaluate_saved(str(path))
    assert reloaded.by_n == expected.by_n


def test_evaluate_saved_uses_recorded_split_settings(synthetic_ratings, tmp_path):
    strict = small_config(synthetic_ratings, tmp_path, seeds=(0,), max_iters=5).with_value('data.threshold', 4.0)
    controller = ExperimentController(strict)
    path = controller.fit_and_save(0)
    model, split = controller.fit_seed(0)
    expected = controller.evaluate_model(model, split)

    lenient = ExperimentController(small_config(synthetic_ratings, tmp_path, seeds=(0,), max_iters=5))
    assert lenient.config.data.threshold == 3.0
    assert lenient.evaluate_saved(str(path)).by_n == expected.by_n
    train = split.train.positives
    assert all((item, user) not in train for user, items in split.test.items() for item in items)


def test_manifest_written_per_seed(synthetic_ratings, tmp_path):
    config = small_config(synthetic_ratings, tmp_path, seeds=(0,), max_iters=5)
    config = config.with_value('output.manifest_path', str(tmp_path / 'split.txt'))
    ExperimentController(config).make_split(0)
    assert (tmp_path / 'split.seed0.txt').read_text().startswith("seed\t0\n")


def test_sweep_over_cost(synthetic_ratings, tmp_path):
    config = small_config(synthetic_ratings, tmp_path, seeds=(0,), max_iters=5)
    results = ExperimentController(config).run_sweep('c_p')
    assert len(results) == len(CP_GRID)
    assert results[0].label == 'csrr-i[c_p=0.5]'
    with pytest.raises(ConfigError):
        ExperimentController(config).run_sweep('d')


def test_latent_dim_sweep_stays_within_matrix(synthetic_ratings, tmp_path):
    config = small_config(synthetic_ratings, tmp_path, kind='csrr-e', seeds=(0,), max_iters=3)
    controller = ExperimentController(config)
    limit = min(controller.load_data().shape)
    labels = [result.label for result in controller.run_sweep('latent_dim')]
    assert labels[0] == 'csrr-e[d=10]'
    assert all(int(label.split('=')[1].rstrip(']')) <= limit for label in labels)


def test_result_aggregates():
    result = ExperimentResult(solver='csrr-i')
    result.per_seed[0] = MetricsReport(by_n={5: MetricValues(0.2, 0.4, 0.3, 0.5)}, n_users=10)
    result.per_seed[1] = MetricsReport(by_n={5: MetricValues(0.4, 0.2, 0.1, 0.7)}, n_users=10)
    assert result.mean.by_n[5].precision == pytest.approx(0.3)
    assert result.mean.by_n[5].ndcg == pytest.approx(0.6)
    assert result.std.by_n[5].recall == pytest.approx(0.1)


def test_evaluate_synthetic_smoke():
    config = ExperimentConfig().with_preset('synthetic').with_value('max_iters', 20)
    report = evaluate_synthetic('csrr-i', config, 30, 20, 2, 0.02, 0.5, seed=0)
    assert_report_in_range(report)


@pytest.mark.slow
def test_bilinear_solver_tracks_nuclear_norm_solver():
    config = ExperimentConfig().with_preset('synthetic')
    means = compare_solvers(config)
    assert abs(means['csrr-i'] - means['csrr-e']) <= 0.05


@pytest.mark.slow
def test_thresholded_loss_shrinks_with_size():
    report = trend_check(ExperimentConfig().with_preset('synthetic'))
    small, large = report.mean_truth_loss[(20, 16)], report.mean_truth_loss[(80, 64)]
    assert small > 0.0
    assert large <= small
    assert report.decreasing


@pytest.mark.slow
def test_ml100k_reproduction(ml100k_path, tmp_path):
    config = (ExperimentConfig().with_preset('ml100k')
              .with_value('data.path', str(ml100k_path))
              .with_value('output.report_path', str(tmp_path / 'report.csv')))
    result = run_experiment(config)
    assert result.mean.by_n[5].ndcg >= 0.65
    assert result.mean.by_n[5].f1 >= 0.18


def ml100k_config(path, tmp_path, kind):
    return (ExperimentConfig().with_preset('ml100k')
            .with_value('data.path', str(path))
            .with_value('solver.kind', kind)
            .with_value('output.report_path', str(tmp_path / 'report.csv')))


@pytest.mark.slow
def test_ml100k_poprank_reference(ml100k_path, tmp_path):
    result = run_experiment(ml100k_config(ml100k_path, tmp_path, 'poprank'))
    published = REFERENCE_RESULTS['ml-100k']['poprank'][REPORT_COLUMNS.index('NDCG@5')]
    assert result.mean.by_n[5].ndcg == pytest.approx(published, abs=0.06)


@pytest.mark.slow
def test_ml100k_outlier_component_helps(ml100k_path, tmp_path):
    full = run_experiment(ml100k_config(ml100k_path, tmp_path, 'csrr-i'))
    low_rank_only = run_experiment(ml100k_config(ml100k_path, tmp_path, 'csrr-i-v0'))
    assert sorted(full.per_seed) == sorted(low_rank_only.per_seed) == [0, 1, 2, 3, 4]
    assert low_rank_only.mean.by_n[5].ndcg < full.mean.by_n[5].ndcg
