from pathlib import Path

import pytest

from padefit import Dataset
from padefit.cli import read_points

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="session")
def table1() -> Dataset:
    """Shipped failure-time fixture: 10 sorted times with Benard ranks."""
    x, f = read_points(str(DATA_DIR / "table1.csv"))
    return Dataset(x, f)
