import numpy as np
import pytest

from emoforge.errors import ParameterError
from emoforge.metrics import confusion_matrix, evaluate


def test_worked_four_example_case():
    truth = np.array([0, 0, 1, 1])
    pred = np.array([0, 1, 1, 1])
    report = evaluate(pred, truth, 2)
    assert report.accuracy == 0.75
    c0, c1 = report.per_class
    assert (c0.precision, c0.recall) == (1.0, 0.5)
    assert c0.f1 == pytest.approx(2 / 3)
    assert (c1.precision, c1.recall) == (pytest.approx(2 / 3), 1.0)
    assert c1.f1 == pytest.approx(0.8)
    assert report.macro_f1 == pytest.approx(11 / 15)


def test_perfect_predictions():
    truth = np.array([2, 0, 1, 2, 1])
    report = evaluate(truth, truth, 3)
    assert report.accuracy == 1.0
    assert report.macro_precision == report.macro_recall == report.macro_f1 == 1.0
    off_diagonal = report.confusion - np.diag(np.diag(report.confusion))
    assert off_diagonal.sum() == 0


def test_confusion_identities_on_random_pairs():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        c = int(rng.integers(2, 7))
        n = int(rng.integers(1, 60))
        truth = rng.integers(0, c, size=n)
        pred = rng.integers(0, c, size=n)
        matrix = confusion_matrix(truth, pred, c)
        supports = np.bincount(truth, minlength=c)
        assert np.array_equal(matrix.sum(axis=1), supports)
        accuracy = np.trace(matrix) / matrix.sum()
        assert accuracy == (truth == pred).mean()
        # micro-averaged precision and recall both collapse to accuracy
        tp = np.diag(matrix).sum()
        assert tp / matrix.sum(axis=0).sum() == accuracy
        assert tp / matrix.sum(axis=1).sum() == accuracy


def test_zero_support_class_excluded_from_macro():
    truth = np.array([0, 0, 2, 2])
    pred = np.array([0, 0, 2, 2])
    report = evaluate(pred, truth, 3)
    assert report.per_class[1].support == 0
    assert report.macro_f1 == 1.0  # class 1 must not drag the average down


def test_f1_zero_when_precision_and_recall_zero():
    truth = np.array([0, 0, 1])
    pred = np.array([1, 1, 0])
    report = evaluate(pred, truth, 2)
    assert report.per_class[0].f1 == 0.0
    assert report.per_class[1].f1 == 0.0


def test_label_out_of_range():
    with pytest.raises(ParameterError):
        evaluate(np.array([0, 3]), np.array([0, 1]), 3)
    with pytest.raises(ParameterError):
        evaluate(np.array([0]), np.array([0, 1]), 2)
    with pytest.raises(ParameterError):
        evaluate(np.array([], dtype=int), np.array([], dtype=int), 2)


def test_report_dict_structure():
    report = evaluate(np.array([0, 1]), np.array([0, 1]), 2, class_names=["neg", "pos"])
    payload = report.to_dict()
    assert list(payload) == [
        "accuracy", "macro_precision", "macro_recall", "macro_f1",
        "per_class", "class_names", "confusion_matrix",
    ]
    assert payload["per_class"][0]["label"] == "neg"
    assert payload["confusion_matrix"] == [[1, 0], [0, 1]]
