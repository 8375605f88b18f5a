import random
from pathlib import Path

import pytest

from colcat.arff import emit_arff, excluded_values, parse_arff
from colcat.categorical import infer_column
from colcat.errors import ArffError
from colcat.ingest import DataColumn, DataTable, read_table

DATA = Path(__file__).parent / "data"


def infer_table(table, model):
    return [infer_column(c, model) for c in table.columns]


@pytest.fixture(scope="module")
def blood_table():
    return read_table(DATA / "bloodtype.csv")


def test_golden_blood_type_byte_exact(blood_table, model):
    text = emit_arff(blood_table, infer_table(blood_table, model))
    golden = (DATA / "bloodtype.arff").read_bytes()
    assert text.encode("utf-8") == golden
    assert "@ATTRIBUTE bloodtype {A,B,AB,O}" in text
    assert ",?," in text or text.rstrip().endswith("?")


def test_emitted_arff_reparses(blood_table, model):
    doc = parse_arff(emit_arff(blood_table, infer_table(blood_table, model)))
    assert doc.relation == "bloodtype"
    assert [a.kind for a in doc.attributes] == ["numeric", "nominal", "date"]
    assert doc.attributes[1].values == ("A", "B", "AB", "O")
    assert len(doc.rows) == 12


def test_chemox_cells_render_missing(model, chemox):
    table = DataTable("chemox", (chemox,))
    text = emit_arff(table, infer_table(table, model))
    assert "@ATTRIBUTE Chemox {0,1}" in text
    assert "\n?\n" in text  # the NULL row
    assert "NULL" not in text


def test_value_with_spaces_is_quoted(model):
    cells = ["San Luis Potosi"] * 6 + ["Morelos"] * 5 + ["S.L.P."] * 4
    table = DataTable("places", (DataColumn.from_cells("State", cells),))
    text = emit_arff(table, infer_table(table, model))
    assert "'San Luis Potosi'" in text


def test_header_only_omits_data(blood_table, model):
    text = emit_arff(blood_table, infer_table(blood_table, model), header_only=True)
    assert "@DATA" not in text
    assert "@ATTRIBUTE" in text


def test_relation_override(blood_table, model):
    text = emit_arff(blood_table, infer_table(blood_table, model), relation="other name")
    assert text.startswith("@RELATION 'other name'\n")


def test_duplicate_column_names_rejected(model):
    col = DataColumn.from_cells("x", ["1", "2"])
    table = DataTable("t", (col, DataColumn.from_cells("x", ["3", "4"])))
    with pytest.raises(ArffError, match="duplicate"):
        emit_arff(table, infer_table(table, model))


def test_emission_deterministic(blood_table, model):
    a = emit_arff(blood_table, infer_table(blood_table, model))
    b = emit_arff(blood_table, infer_table(blood_table, model))
    assert a == b
    assert "\r" not in a  # LF separators only


def test_date_cells_normalized_to_declared_format(model):
    cells = ["24/07/1969", "1 January 2000", "1969-07-24", "2020-02-15T10:30:00"] * 3
    table = DataTable("d", (DataColumn.from_cells("when", cells),))
    inferences = infer_table(table, model)
    assert inferences[0].predicted_type == "date"
    doc = parse_arff(emit_arff(table, inferences))
    assert doc.rows[0][0] == "1969-07-24T00:00:00"
    assert doc.rows[1][0] == "2000-01-01T00:00:00"
    assert doc.rows[3][0] == "2020-02-15T10:30:00"


def test_excluded_values_cover_sentinels_and_anomalies(model):
    column = DataColumn.from_cells("c", ["1", "2", "NULL", "weird!", "1"] * 8)
    excluded = excluded_values(infer_column(column, model))
    assert "NULL" in excluded and "weird!" in excluded
    assert "1" not in excluded


# ---------------------------------------------------------------------------
# grammar checker
# ---------------------------------------------------------------------------


def test_checker_rejects_wrong_field_count():
    text = "@RELATION t\n@ATTRIBUTE a NUMERIC\n@ATTRIBUTE b NUMERIC\n@DATA\n1\n"
    with pytest.raises(ArffError, match="fields"):
        parse_arff(text)


def test_checker_rejects_undeclared_nominal_value():
    text = "@RELATION t\n@ATTRIBUTE a {x,y}\n@DATA\nz\n"
    with pytest.raises(ArffError, match="not declared"):
        parse_arff(text)


def test_checker_rejects_non_numeric_cell():
    text = "@RELATION t\n@ATTRIBUTE a NUMERIC\n@DATA\nfoo\n"
    with pytest.raises(ArffError, match="non-numeric"):
        parse_arff(text)


def test_checker_rejects_duplicate_nominal_levels():
    with pytest.raises(ArffError, match="duplicate"):
        parse_arff("@RELATION t\n@ATTRIBUTE a {x,x}\n@DATA\n")


def test_checker_accepts_quoted_values_and_comments():
    text = (
        "% comment\n@RELATION 'my rel'\n@ATTRIBUTE 'a b' {'x y',z}\n@DATA\n"
        "'x y'\nz\n?\n"
    )
    doc = parse_arff(text)
    assert doc.relation == "my rel"
    assert doc.attributes[0].name == "a b"
    assert doc.rows == (("x y",), ("z",), ("?",))


def test_fuzzed_tables_reparse(model):
    rng = random.Random(21)
    pools = {
        "int": lambda: str(rng.randint(-5000, 5000)),
        "float": lambda: f"{rng.uniform(-10, 10):.3f}",
        "word": lambda: rng.choice(["alpha", "be ta", "g{mm}a", "d,lt", "e%ps", "f'g"]),
        "date": lambda: f"20{rng.randint(10, 25)}-0{rng.randint(1, 9)}-1{rng.randint(0, 9)}",
        "sentinel": lambda: rng.choice(["NULL", "NA", "", "?"]),
    }
    for _ in range(60):
        n_rows = rng.randint(1, 12)
        columns = []
        for i in range(rng.randint(1, 5)):
            kind = rng.choice(list(pools))
            cells = [pools[kind]() for _ in range(n_rows)]
            columns.append(DataColumn.from_cells(f"c{i}", cells))
        table = DataTable("fuzz", tuple(columns))
        text = emit_arff(table, infer_table(table, model))
        doc = parse_arff(text)
        assert len(doc.rows) == n_rows
