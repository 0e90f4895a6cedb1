"""Shared fixtures.

Process settings are read once at import time, so the test environment is
selected before anything from ``odhall`` is imported.
"""

import math
import os

os.environ.setdefault("ODHALL_APP_ENV", "test")
os.environ.setdefault("ODHALL_SHOW_PROGRESS", "false")
os.environ.setdefault("ODHALL_LOG_LEVEL", "WARNING")

import numpy as np
import pytest

from odhall.domain.entities import (
    Grid,
    HallMhdParams,
    OldroydParams,
)
from odhall.schemas import TimeSeriesRecord
from odhall.shared.constants import CSV_COLUMNS

SEED = 20240901

# small box with |xi| = 1 on the grid (k = 4)
SMALL_BOX = 8.0 * math.pi

MINIMAL_CONFIG = """\
model = {model}
grid.n = 16
grid.L = {L!r}
time.dt = 0.05
time.t_end = {t_end}
time.stride = 2

[ic]
amplitude = {amplitude}
"""


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture
def grid16():
    return Grid(16, SMALL_BOX)


@pytest.fixture
def oldroyd_params():
    return OldroydParams(gamma=1.5, b=0.3)


@pytest.fixture
def hall_params():
    return HallMhdParams(gamma=1.4)


def make_record(t: float, **values) -> TimeSeriesRecord:
    """A record with every column 1.0 except t and the given overrides."""
    row = {name: 1.0 for name in CSV_COLUMNS}
    row["t"] = t
    row.update(values)
    return TimeSeriesRecord(**row)


def power_law_records(times, **exponents) -> list:
    """Records whose given columns equal (1+t)^exponent exactly."""
    return [
        make_record(t, **{name: (1.0 + t) ** p for name, p in exponents.items()}) for t in times
    ]


def write_config(path, model="oldroyd", t_end=1.0, amplitude=1e-3, extra=""):
    text = MINIMAL_CONFIG.format(model=model, L=SMALL_BOX, t_end=t_end, amplitude=amplitude)
    path.write_text(text + extra, encoding="utf-8")
    return path
