"""Pytest configuration and shared fixtures."""

import tempfile
from pathlib import Path

import numpy as np
import pytest

from innoviterbi.core import ChannelConfig, ConvCode, HardFrame
from innoviterbi.core.convcode import load_code

# Worked example on C1: information bits and the channel errors that hit them.
WORKED_INFO = [1, 0, 0, 1, 0, 1, 0, 0]
WORKED_ERRORS = ["00", "10", "00", "01", "00", "10", "00", "00"]


@pytest.fixture
def temp_config_dir():
    """Create a temporary directory for config files."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def c1() -> ConvCode:
    """Rate-1/2 QLI code with G = (1+D+D^2, 1+D^2)."""
    return load_code("C1")


@pytest.fixture
def c2() -> ConvCode:
    return load_code("C2")


@pytest.fixture
def c3() -> ConvCode:
    return load_code("C3")


@pytest.fixture
def c4() -> ConvCode:
    return load_code("C4")


@pytest.fixture
def worked_info() -> np.ndarray:
    return np.array(WORKED_INFO, dtype=np.uint8).reshape(-1, 1)


@pytest.fixture
def worked_errors() -> HardFrame:
    return HardFrame.from_strings(WORKED_ERRORS)


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator so every run sees the same noise."""
    return np.random.default_rng(20240601)


@pytest.fixture
def unit_channel() -> ChannelConfig:
    """Channel with amplitude c = 1, so noiseless branch metrics are integers."""
    return ChannelConfig(es_n0=0.5)
