"""Runtime configuration: default fuel, project paths and logging setup.

The default reduction budget can be overridden with the ``PTS_FUEL``
environment variable (or a ``.env`` file when python-dotenv is installed);
the CLI flag ``--fuel`` wins over both.
"""

from __future__ import annotations

import argparse
import logging
import os
from pathlib import Path
from typing import Optional

logger = logging.getLogger(__name__)

DEFAULT_FUEL = 10000
FUEL_ENV_VAR = "PTS_FUEL"

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"

PROJECT_ROOT = Path(__file__).resolve().parents[2]

_dotenv_loaded = False


def _load_dotenv_once() -> None:
    """Load a .env file from the working directory if python-dotenv is available."""
    global _dotenv_loaded
    if _dotenv_loaded:
        return
    _dotenv_loaded = True
    try:
        from dotenv import load_dotenv
    except ImportError:
        return  # dotenv is optional
    load_dotenv()


def resolve_default_fuel(env: Optional[dict] = None) -> int:
    """Return the beta-step budget from PTS_FUEL, falling back to DEFAULT_FUEL."""
    if env is None:
        _load_dotenv_once()
        env = os.environ
    raw = env.get(FUEL_ENV_VAR)
    if raw is None or not str(raw).strip():
        return DEFAULT_FUEL
    value = str(raw).strip()
    if not value.isdigit():
        logger.warning(f"Ignoring {FUEL_ENV_VAR}={value!r}: expected a non-negative integer")
        return DEFAULT_FUEL
    return int(value)


def non_negative_int(value: str) -> int:
    """argparse ``type`` for counts such as ``--fuel``: a non-negative integer, else a usage error."""
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value!r}") from None
    if number < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return number


def metadata_dir(project_root: Optional[Path] = None) -> Path:
    """Directory with shipped spec files and the golden corpus."""
    return (project_root or PROJECT_ROOT) / "metadata"


def setup_logging(name: str, verbose: bool = False) -> logging.Logger:
    """Configure the shared logging format and return a logger."""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING, format=LOG_FORMAT)
    return logging.getLogger(name)


__all__ = [
    "DEFAULT_FUEL",
    "FUEL_ENV_VAR",
    "LOG_FORMAT",
    "PROJECT_ROOT",
    "metadata_dir",
    "non_negative_int",
    "resolve_default_fuel",
    "setup_logging",
]
