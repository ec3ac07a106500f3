from collections.abc import Iterator
from pathlib import Path

import numpy as np
import pytest

from conelab.functionals import BackgroundData
from conelab.geometry import SphereGrid, TorusGrid
from conelab.utils.logger import configure_logging


@pytest.fixture(scope="session", autouse=True)
def _quiet_logs(tmp_path_factory: pytest.TempPathFactory) -> Iterator[Path]:
    """
    Keep the console quiet during tests and send the debug log to a
    temporary directory instead of /tmp/conelab_logs.
    """
    log_dir = tmp_path_factory.mktemp("logs")
    configure_logging("WARNING", log_dir)
    yield log_dir
    configure_logging()


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded random stream."""
    return np.random.default_rng(7)


@pytest.fixture(scope="session")
def grid() -> SphereGrid:
    """Small sphere grid, resolving harmonics well beyond degree 6."""
    return SphereGrid(24, 48)


@pytest.fixture(scope="session")
def torus() -> TorusGrid:
    """Small periodic grid."""
    return TorusGrid(24, 24)


@pytest.fixture(scope="session")
def base(grid: SphereGrid) -> BackgroundData:
    """Round unit background with b_inf = 1."""
    return BackgroundData.round_sphere(grid)
