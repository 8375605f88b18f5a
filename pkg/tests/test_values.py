import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from colcat.ingest import DataColumn
from colcat.values import categorical_values, unique_baseline


def col(*cells):
    return DataColumn.from_cells("c", cells)


def test_chemox_values_and_excluded(chemox):
    report = categorical_values(chemox, "integer")
    assert [v.value for v in report.values] == ["0", "1"]  # count-desc order
    assert [(e.value, e.label) for e in report.excluded] == [("NULL", "missing")]
    assert all(v.clean_posterior > 0.99 for v in report.values)


def test_string_coded_levels_with_sentinel():
    column = col(*(["Y"] * 30 + ["N"] * 20 + ["NULL"] * 2))
    report = categorical_values(column, "string")
    assert report.value_set == {"Y", "N"}
    assert report.excluded[0].value == "NULL"


def test_all_clean_blood_types():
    column = col(*(["A"] * 4 + ["B"] * 3 + ["AB"] * 2 + ["O"] * 2))
    report = categorical_values(column, "string")
    assert [v.value for v in report.values] == ["A", "B", "AB", "O"]
    assert report.excluded == ()


def test_base_type_must_be_integer_or_string(chemox):
    with pytest.raises(ValueError):
        categorical_values(chemox, "date")


def test_unique_baseline_keeps_sentinels(chemox):
    report = unique_baseline(chemox)
    assert report.value_set == {"0", "1", "NULL"}
    assert report.excluded == ()


def test_unique_baseline_empty_cells():
    report = unique_baseline(col("", "", ""))
    assert report.value_set == {""}


def test_report_json_shape(chemox):
    doc = categorical_values(chemox, "integer").to_dict()
    assert json.dumps(doc)  # serializable
    assert doc["values"][0] == {
        "value": "0",
        "count": 50,
        "clean_posterior": pytest.approx(0.9995, abs=1e-3),
    }
    assert doc["excluded"] == [{"value": "NULL", "count": 1, "label": "missing"}]


def test_ordering_count_desc_then_lexicographic():
    column = col("b", "b", "a", "a", "c")
    report = categorical_values(column, "string")
    assert [v.value for v in report.values] == ["a", "b", "c"]  # a before b at count 2


values_pool = st.lists(
    st.sampled_from(["0", "1", "22", "NULL", "NA", "abc xyz", "x"]),
    min_size=1,
    max_size=30,
)


@given(values_pool)
@settings(max_examples=50, deadline=None)
def test_partition_and_subset_properties(cells):
    column = col(*cells)
    report = categorical_values(column, "string")
    baseline = unique_baseline(column)
    accepted = report.value_set
    excluded = {e.value for e in report.excluded}
    assert accepted | excluded == set(column.tallies)
    assert not accepted & excluded
    assert accepted <= baseline.value_set
    assert len(baseline.values) == column.n_unique
    total = sum(v.count for v in report.values) + sum(e.count for e in report.excluded)
    assert total == column.size
