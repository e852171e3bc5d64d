"""Shared test helpers.

Real-dataset tests look for files under the directory named by the
TOPOGATE_DATA environment variable (default ``./data``) and skip with an
explicit reason when the files are absent; everything else runs
self-contained.
"""

from __future__ import annotations

import os
import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("suite", deadline=None)
settings.load_profile("suite")


def data_root() -> Path:
    return Path(os.environ.get("TOPOGATE_DATA", "data"))


def ecg5000_path() -> Path | None:
    root = data_root()
    for candidate in (root / "ECG5000", root):
        if any(candidate.glob("ECG5000_TRAIN*")):
            return candidate
    return None


def mitbih_path() -> Path | None:
    p = data_root() / "mitbih_train.csv"
    return p if p.exists() else None


def require_ecg5000() -> Path:
    path = ecg5000_path()
    if path is None:
        pytest.skip(
            "ECG5000 files not found under TOPOGATE_DATA (the sandbox has no "
            "network access to fetch the archive); mount ECG5000_TRAIN.tsv / "
            "ECG5000_TEST.tsv to run this criterion"
        )
    return path


def require_mitbih() -> Path:
    path = mitbih_path()
    if path is None:
        pytest.skip(
            "mitbih_train.csv not found under TOPOGATE_DATA (the sandbox has no "
            "network access to fetch it); mount the heartbeat CSV to run this criterion"
        )
    return path
