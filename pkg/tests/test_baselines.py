from colcat.baselines import (
    BotParams,
    OpenMLParams,
    bot_infer,
    bot_values,
    naive_parse_type,
    openml_infer,
    openml_values,
    posterior_numeric_disambiguator,
    weka_infer,
    weka_values,
)
from colcat.ingest import DataColumn


def col(*cells):
    return DataColumn.from_cells("c", cells)


# ---------------------------------------------------------------------------
# naive parse
# ---------------------------------------------------------------------------


def test_naive_parse_integers():
    assert naive_parse_type(col("1", "2", "3")) == "integer"


def test_naive_parse_float_rendered_ordinals():
    assert naive_parse_type(col("1.0", "2.0", "5.0")) == "float"


def test_naive_parse_sentinel_breaks_integer():
    # NA coercion upstream turns integer columns into floats
    assert naive_parse_type(col("1", "2", "NULL")) == "float"


def test_naive_parse_datetime_unsupported():
    assert naive_parse_type(col("2020-01-01T10:00:00", "2020-01-02T11:00:00")) == "string"


def test_naive_parse_date_only():
    assert naive_parse_type(col("2020-01-01", "2020-01-02")) == "date-limited"


def test_naive_parse_textual_month_unsupported():
    assert naive_parse_type(col("July", "August")) == "string"


# ---------------------------------------------------------------------------
# Bot
# ---------------------------------------------------------------------------


def test_bot_small_unique_integer_is_categorical():
    column = col(*[str(i % 5) for i in range(50)])
    assert bot_infer(column, BotParams()) == "categorical"


def test_bot_gap_condition():
    # U = 50 consecutive integers: mean gap 1 < mean value 25.5
    column = col(*[str(i) for i in range(1, 51)])
    assert bot_infer(column, BotParams(t_int=60)) == "categorical"


def test_bot_large_ids_stay_integer():
    column = col(*[str(10**9 + i * 10**7) for i in range(200)])
    assert bot_infer(column, BotParams(t_int=120)) == "integer"


def test_bot_float_branch_is_never_categorical():
    column = col(*[f"{i % 5 + 1}.0" for i in range(60)])
    assert bot_infer(column, BotParams()) == "float"


def test_bot_string_threshold():
    column = col(*[f"w{i % 10}" for i in range(60)])
    assert bot_infer(column, BotParams(t_str=25)) == "categorical"
    wide = col(*[f"w{i}" for i in range(60)])
    assert bot_infer(wide, BotParams(t_str=25)) == "string"


def test_bot_values_threshold_filter():
    column = col(*(["0"] * 50 + ["1"] * 49 + ["NULL"] * 1))
    assert bot_values(column, BotParams(value_min_count=5)) == {"0", "1"}


def test_bot_values_keeps_frequent_sentinel():
    column = col(*(["0"] * 50 + ["NULL"] * 10))
    assert bot_values(column, BotParams(value_min_count=5)) == {"0", "NULL"}


def test_bot_values_drops_rare_true_category():
    column = col(*(["0"] * 50 + ["1"] * 48 + ["X"] * 2))
    assert "X" not in bot_values(column, BotParams(value_min_count=5))


def test_bot_values_subset_of_uniques():
    column = col(*(["a"] * 3 + ["b"] * 2 + ["c"]))
    for vmin in (1, 2, 3, 10):
        assert bot_values(column, BotParams(value_min_count=vmin)) <= set(column.tallies)


# ---------------------------------------------------------------------------
# OpenML
# ---------------------------------------------------------------------------


def test_openml_thirteen_levels_become_integer():
    column = col(*[str(i % 13) for i in range(130)])
    assert openml_infer(column, OpenMLParams(t_unique=10)) == "integer"


def test_openml_boundary_unique_count_is_categorical():
    column = col(*[str(i % 10) for i in range(100)])
    assert openml_infer(column, OpenMLParams(t_unique=10)) == "categorical"


def test_openml_float_via_disambiguator():
    column = col(*[f"{i}.{i}5" for i in range(40)])
    assert openml_infer(column, OpenMLParams(t_unique=10)) == "float"


def test_openml_never_dates():
    column = col(*[f"2020-01-{d:02d}" for d in range(1, 29)])
    assert openml_infer(column, OpenMLParams(t_unique=10)) == "string"


def test_openml_zero_threshold_never_categorical():
    for cells in (["a"], ["a", "b"], [str(i % 3) for i in range(30)]):
        assert openml_infer(col(*cells), OpenMLParams(t_unique=0)) != "categorical"


def test_openml_values_drop_sentinels(chemox):
    assert openml_values(chemox) == {"0", "1"}


def test_openml_values_identity_without_sentinels():
    column = col("a", "b", "c")
    assert openml_values(column) == {"a", "b", "c"}


def test_openml_values_all_sentinels_empty():
    assert openml_values(col("NA", "NULL", "")) == frozenset()


# ---------------------------------------------------------------------------
# Weka
# ---------------------------------------------------------------------------


def test_weka_iso_datetime_is_date():
    column = col("2020-01-01T10:00:00", "2020-01-02T11:30:00")
    assert weka_infer(column) == "date"
    assert weka_values(column) == frozenset()


def test_weka_date_without_time_is_nominal():
    column = col("2020-01-01", "2020-01-02")
    assert weka_infer(column) == "categorical"


def test_weka_numeric_yields_empty_value_list():
    column = col(*[str(i % 4 + 1) for i in range(40)])
    assert weka_infer(column) in ("integer", "float")
    assert weka_values(column) == frozenset()


def test_weka_never_string():
    for cells in (["x", "y"], ["free text here", "more text"], ["a"] * 30):
        assert weka_infer(col(*cells)) == "categorical"


def test_shared_disambiguator_is_cached():
    disambiguate = posterior_numeric_disambiguator()
    column = col("1", "2", "3")
    assert disambiguate(column) == "integer"
    assert disambiguate(column) == "integer"  # second call hits the cache
    floats = col("1.5", "2.5")
    assert disambiguate(floats) == "float"
