"""Shared pytest fixtures for all tests."""

from __future__ import annotations

from collections.abc import Generator

import pytest
from mpmath import mp


@pytest.fixture(autouse=True)
def isolated_precision() -> Generator[None]:
    """Restore mpmath's global precision so one test's workdps leak cannot shift another."""
    saved = mp.dps
    yield
    mp.dps = saved
