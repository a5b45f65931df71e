#!/usr/bin/env python3
"""Shared pytest configuration: workspace-local temp dirs and common kernel fixtures."""

import os
import uuid
from pathlib import Path

import pytest

from core.pts_spec import builtin_instance
from core.reduction import Fuel


def pytest_configure(config):
    """Keep pytest temp files inside the workspace instead of locked system temp."""
    repo_root = Path(__file__).resolve().parents[1]
    temp_root = repo_root / ".pytest_tmp"
    session_temp = temp_root / f"run-{os.getpid()}-{uuid.uuid4().hex}"

    temp_root.mkdir(exist_ok=True)

    if config.option.basetemp is None:
        config.option.basetemp = str(session_temp)


@pytest.fixture
def coc():
    return builtin_instance("coc")


@pytest.fixture
def stlc():
    return builtin_instance("stlc")


@pytest.fixture
def type_in_type():
    return builtin_instance("type_in_type")


@pytest.fixture
def fuel():
    return Fuel(10000)


@pytest.fixture
def small_fuel():
    return Fuel(50)
