import itertools
from fractions import Fraction

import numpy as np
import pytest

from src.controllers.evaluator import confusion_counts, weighted_cost_metric
from src.models.costs import (CostModel, LossVariant, SumWeights, alpha_from_sum, loss_entry,
                              loss_matrix, subgrad_entry, total_loss)
from src.models.errors import DimensionMismatchError, InvalidCostError, InvalidWeightsError
from src.models.matrices import ObservationMatrix


def type_i(alpha):
    return CostModel.from_alpha(alpha, LossVariant.TYPE_I)


def type_ii(alpha):
    return CostModel.from_alpha(alpha, LossVariant.TYPE_II)


def test_alpha_from_sum_examples():
    assert alpha_from_sum(SumWeights(0.5, 0.5, 10, 90)) == pytest.approx(9.0)
    assert alpha_from_sum(SumWeights(0.5, 0.5, 40, 40)) == pytest.approx(1.0)
    assert alpha_from_sum(SumWeights(0.9, 0.1, 100, 100)) == pytest.approx(9.0)


def test_alpha_from_sum_zero_denominator():
    with pytest.raises(InvalidWeightsError):
        alpha_from_sum(SumWeights(1.0, 0.0, 10, 10))
    with pytest.raises(InvalidWeightsError):
        alpha_from_sum(SumWeights(0.5, 0.5, 0, 10))


def test_sum_weights_must_sum_to_one():
    with pytest.raises(InvalidWeightsError):
        SumWeights(0.6, 0.6, 1, 1)


def test_cost_model_constructors():
    assert CostModel.from_cp(0.8).alpha == pytest.approx(4.0)
    model = CostModel.from_alpha(3.0)
    assert model.c_p == pytest.approx(0.75)
    assert model.c_n == pytest.approx(0.25)
    derived = CostModel.from_sum_weights(SumWeights(0.5, 0.5, 10, 90))
    assert derived.alpha == pytest.approx(9.0)


@pytest.mark.parametrize('c_p, c_n', [(0.4, 0.6), (0.7, 0.4), (1.0, 0.0)])
def test_cost_model_rejects_invalid(c_p, c_n):
    with pytest.raises(InvalidCostError):
        CostModel(c_p=c_p, c_n=c_n)


def test_cost_model_rejects_alpha_below_one():
    with pytest.raises(InvalidCostError):
        CostModel.from_alpha(0.5)


def test_loss_entry_examples():
    assert loss_entry(1.0, 1, type_i(3.0)) == pytest.approx(0.0)
    assert loss_entry(0.5, 1, type_i(2.0)) == pytest.approx(0.25)
    assert loss_entry(0.5, 1, type_ii(2.0)) == pytest.approx(1.125)
    assert loss_entry(0.4, 0, type_i(2.0)) == pytest.approx(0.08)
    assert loss_entry(0.4, 0, type_ii(5.0)) == pytest.approx(0.08)


def test_subgrad_entry_examples():
    assert subgrad_entry(0.5, 1, type_i(2.0)) == pytest.approx(-1.0)
    assert subgrad_entry(1.0, 1, type_i(2.0)) == 0.0
    assert subgrad_entry(0.4, 0, type_i(2.0)) == pytest.approx(0.4)
    assert subgrad_entry(0.0, 0, type_ii(2.0)) == 0.0


@pytest.mark.parametrize('variant', list(LossVariant))
@pytest.mark.parametrize('alpha', [1.0, 2.0, 9.0])
def test_subgradient_matches_finite_difference(rng, variant, alpha):
    model = CostModel.from_alpha(alpha, variant)
    step = 1e-5
    xs = rng.uniform(-0.5, 1.5, size=1000)
    labels = rng.integers(0, 2, size=1000)
    for x, a in zip(xs, labels):
        numeric = (loss_entry(x + step, a, model) - loss_entry(x - step, a, model)) / (2 * step)
        assert subgrad_entry(x, a, model) == pytest.approx(numeric, abs=1e-6)


@pytest.mark.parametrize('model', [type_i(3.0), type_ii(3.0)])
def test_losses_are_convex(rng, model):
    for _ in range(200):
        x1, x2 = rng.uniform(-1.0, 2.0, size=2)
        t = rng.uniform(0.0, 1.0)
        for a in (0, 1):
            mixed = loss_entry(t * x1 + (1 - t) * x2, a, model)
            bound = t * loss_entry(x1, a, model) + (1 - t) * loss_entry(x2, a, model)
            assert mixed <= bound + 1e-12


def test_variants_coincide_at_unit_alpha(rng):
    x = rng.uniform(-1.0, 2.0, size=(5, 5))
    labels = rng.integers(0, 2, size=(5, 5))
    np.testing.assert_allclose(loss_matrix(x, labels, type_i(1.0)), loss_matrix(x, labels, type_ii(1.0)))


def test_total_loss_examples():
    a = ObservationMatrix.from_positives(1, 2, [(0, 0)])
    assert total_loss(np.array([[0.5, 0.4]]), a, type_i(2.0)) == pytest.approx(0.33)
    assert total_loss(a.dense(), a, type_i(7.0)) == 0.0
    empty = ObservationMatrix.from_positives(2, 2, [])
    assert total_loss(np.zeros((2, 2)), empty, type_i(2.0)) == 0.0


def test_total_loss_dimension_mismatch():
    a = ObservationMatrix.from_positives(2, 2, [])
    with pytest.raises(DimensionMismatchError):
        total_loss(np.zeros((2, 3)), a, type_i(2.0))


def binary_matrices(n=2, m=3):
    for bits in itertools.product((0, 1), repeat=n * m):
        yield np.array(bits, dtype=float).reshape(n, m)


@pytest.mark.parametrize('c_p', [0.5, 0.8, 0.95])
def test_cost_identity_over_all_binary_instances(c_p):
    """c_p FN + c_n FP == c_n (alpha FN + FP) for every 2x3 truth and prediction"""
    model = CostModel.from_cp(c_p)
    exact_p, exact_n = Fraction(model.c_p), Fraction(model.c_n)
    predictions = list(binary_matrices())
    for labels in binary_matrices():
        truth = ObservationMatrix.from_positives(2, 3, [tuple(p) for p in np.argwhere(labels == 1).tolist()])
        metric, rewritten = [], []
        for b in predictions:
            counts = confusion_counts(b, truth, 0.5)
            fn, fp = counts['fn'], counts['fp']
            assert exact_p * fn + exact_n * fp == exact_n * (exact_p / exact_n * fn + fp)
            metric.append(weighted_cost_metric(b, truth, 0.5, model))
            rewritten.append(model.c_n * (model.alpha * fn + fp))
        np.testing.assert_allclose(metric, rewritten, rtol=1e-12, atol=1e-12)
        best_metric = np.flatnonzero(np.isclose(metric, min(metric), rtol=0, atol=1e-12))
        best_rewritten = np.flatnonzero(np.isclose(rewritten, min(rewritten), rtol=0, atol=1e-12))
        assert best_metric.tolist() == best_rewritten.tolist()
        np.testing.assert_array_equal(predictions[best_metric[0]], labels)


@pytest.mark.parametrize('c_p', [0.5, 0.6, 0.75, 0.8, 0.9, 0.95, 0.99])
def test_alpha_reproduces_positive_cost_to_rounding(c_p):
    model = CostModel.from_cp(c_p)
    assert model.c_n * model.alpha == pytest.approx(model.c_p, rel=1e-15)
