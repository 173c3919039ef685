import pathlib

import pytest

from sandlab.nilpotency import make_collapse

DATA = pathlib.Path(__file__).parent / "data"


@pytest.fixture
def data_dir() -> pathlib.Path:
    return DATA


@pytest.fixture
def collapse1():
    return make_collapse(1, 1)
