import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from popforecast.series import PopulationSeries  # noqa: E402

GOLDEN_DIR = Path(__file__).parent / "golden"


@pytest.fixture
def small_series():
    return PopulationSeries.from_values([100, 102, 101, 105, 104, 107, 110, 108, 112, 115], center_id="demo")


@pytest.fixture
def linear_series():
    return PopulationSeries.from_values([5 + 2 * t for t in range(1, 13)], center_id="linear")
