import pytest

from colcat.categorical import bundled_model
from colcat.ingest import DataColumn
from colcat.machines import builtin_machines


@pytest.fixture(scope="session")
def machines():
    return builtin_machines()


@pytest.fixture(scope="session")
def model():
    return bundled_model()


@pytest.fixture()
def chemox():
    # 0 x50, 1 x49, NULL x1: a binary categorical with one missing sentinel
    return DataColumn.from_cells("Chemox", ["0"] * 50 + ["1"] * 49 + ["NULL"])
