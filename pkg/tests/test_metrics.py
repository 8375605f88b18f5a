import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from colcat.metrics import (
    jaccard_per_type,
    jaccard_sets,
    mcnemar,
    overall_accuracy,
    paired_t_test,
    pr_curve,
    pr_curve_micro,
)

from oracles import t_two_sided_p


def test_accuracy_extremes():
    assert overall_accuracy(["a", "b"], ["a", "b"]) == 1.0
    assert overall_accuracy(["a", "b"], ["b", "a"]) == 0.0
    with pytest.raises(ValueError):
        overall_accuracy([], [])


def test_jaccard_per_type_hand_counts():
    assert jaccard_per_type(["int", "cat"], ["cat", "cat"], "cat") == pytest.approx(0.5)
    assert jaccard_per_type(["int", "int"], ["int", "int"], "int") == 1.0
    assert jaccard_per_type(["int", "int"], ["int", "int"], "date") == 1.0  # absent


def test_jaccard_sets_examples():
    assert jaccard_sets({"0", "1"}, {"0", "1", "NULL"}) == pytest.approx(2 / 3)
    assert jaccard_sets({"a"}, {"a"}) == 1.0
    assert jaccard_sets({"a"}, {"b"}) == 0.0
    assert jaccard_sets(set(), set()) == 1.0


@given(
    st.sets(st.sampled_from("abcdefgh")),
    st.sets(st.sampled_from("abcdefgh")),
)
@settings(max_examples=200)
def test_jaccard_sets_symmetric_and_identity(a, b):
    assert jaccard_sets(a, b) == jaccard_sets(b, a)
    assert (jaccard_sets(a, b) == 1.0) == (a == b)
    assert 0.0 <= jaccard_sets(a, b) <= 1.0


def test_average_precision_hand_example():
    curve = pr_curve([(0.9, 1), (0.8, 0), (0.1, 1)])
    assert curve.average_precision == pytest.approx(0.5 + 0.5 * 2 / 3, abs=1e-9)


def test_ap_all_positive_is_one():
    assert pr_curve([(0.5, 1), (0.2, 1)]).average_precision == 1.0


def test_hard_scores_give_at_most_two_points():
    pairs = [(1.0, 1), (1.0, 0), (0.0, 1), (0.0, 0), (1.0, 1)]
    curve = pr_curve(pairs)
    assert len(curve.points) <= 2


def test_tied_scores_collapse():
    curve = pr_curve([(0.5, 1), (0.5, 0), (0.5, 1)])
    assert len(curve.points) == 1
    threshold, precision, recall = curve.points[0]
    assert (threshold, precision, recall) == (0.5, pytest.approx(2 / 3), 1.0)


def test_pr_curve_micro_pools_records():
    records = [
        ("c1", "cat", 0.9, True),
        ("c1", "int", 0.8, False),
        ("c2", "cat", 0.1, True),
    ]
    assert pr_curve_micro(records).average_precision == pytest.approx(0.5 + 0.5 * 2 / 3)


@given(
    st.lists(
        st.tuples(st.floats(0, 1), st.integers(0, 1)), min_size=1, max_size=60
    )
)
@settings(max_examples=100)
def test_pr_curve_validity(pairs):
    curve = pr_curve(pairs)
    assert 0.0 <= curve.average_precision <= 1.0 + 1e-12
    recalls = [r for _, _, r in curve.points]
    assert recalls == sorted(recalls)  # non-decreasing in the ranked sweep
    for _, precision, recall in curve.points:
        assert 0.0 <= precision <= 1.0
        assert 0.0 <= recall <= 1.0


def test_mcnemar_reproduces_published_statistic():
    result = mcnemar(185, 44)
    assert result.statistic == pytest.approx(140**2 / 229, abs=1e-12)
    assert result.statistic == pytest.approx(85.6, abs=0.05)
    assert result.significant


def test_mcnemar_uncorrected_variant():
    assert mcnemar(185, 44, corrected=False).statistic == pytest.approx(141**2 / 229)


def test_mcnemar_symmetric_disagreement_is_zero():
    result = mcnemar(7, 7)
    assert result.statistic == 0.0
    assert not result.significant


def test_mcnemar_small_counts():
    result = mcnemar(10, 0)
    assert result.statistic == pytest.approx(8.1)
    assert result.significant


def test_mcnemar_undefined_without_disagreements():
    with pytest.raises(ValueError):
        mcnemar(0, 0)


def test_paired_t_closed_form():
    result = paired_t_test([1.0, 2.0, 3.0], [0.0, 0.0, 0.0])
    assert result.statistic == pytest.approx(2 / (1 / 3**0.5), rel=1e-12)
    assert result.p_value == pytest.approx(0.0742, abs=5e-5)
    assert result.dof == 2


def test_paired_t_zero_mean_difference():
    result = paired_t_test([1.0, -1.0, 1.0, -1.0], [0.0, 0.0, 0.0, 0.0])
    assert result.statistic == 0.0
    assert result.p_value == pytest.approx(1.0)


def test_paired_t_constant_differences_error():
    with pytest.raises(ValueError):
        paired_t_test([0.1, 0.1, 0.1, 0.1], [0.0, 0.0, 0.0, 0.0])


def test_paired_t_matches_quadrature_oracle():
    cases = [
        ([1.0, 2.0, 3.0], [0.0, 0.0, 0.0]),
        ([0.9, 0.8, 0.95, 0.7, 0.85], [0.5, 0.6, 0.55, 0.65, 0.6]),
        ([0.2, 0.4, 0.1, 0.5, 0.3, 0.35], [0.25, 0.3, 0.2, 0.4, 0.45, 0.3]),
    ]
    for xs, ys in cases:
        result = paired_t_test(xs, ys)
        assert result.p_value == pytest.approx(
            t_two_sided_p(result.statistic, result.dof), abs=1e-6
        )
