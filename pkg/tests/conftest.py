from importlib import resources
from pathlib import Path

import pytest

DATA = Path(str(resources.files("etcs").joinpath("data")))


@pytest.fixture
def data_dir() -> Path:
    return DATA
