"""Shared pytest fixtures."""

import sys

import pytest
from loguru import logger


@pytest.fixture(autouse=True)
def reset_logger():
    """DynLab swaps loguru sinks; restore a plain stderr sink after each test."""
    yield
    logger.remove()
    logger.add(sys.stderr, level="WARNING")
