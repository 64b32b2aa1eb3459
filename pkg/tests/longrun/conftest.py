"""Pytest configuration for Monte Carlo acceptance runs.

These runs simulate 10^5-block frames and take minutes.

Run with: INNOVITERBI_LONGRUN=1 uv run pytest tests/longrun -v
"""

import os

import pytest


def pytest_collection_modifyitems(config: pytest.Config, items: list[pytest.Item]) -> None:
    """Skip long runs unless INNOVITERBI_LONGRUN is set."""
    if os.environ.get("INNOVITERBI_LONGRUN") == "1":
        return
    skip_marker = pytest.mark.skip(reason="set INNOVITERBI_LONGRUN=1 to run Monte Carlo acceptance tests")
    for item in items:
        if "longrun" in item.keywords or "longrun" in item.path.parts:
            item.add_marker(skip_marker)
