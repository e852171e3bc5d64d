"""Dataset loading, fold planning and augmentation.

Loaders produce standardized equal-length signals with integer labels
remapped to 0..C-1.  All randomness (fold shuffles, padding splits,
synthetic generation) flows from explicit integer seeds through
``numpy.random.default_rng`` so every artifact is reproducible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from .signal import Signal, standardize


@dataclass(frozen=True, eq=False)
class Dataset:
    """Equal-length labeled signals plus class bookkeeping."""

    signals: tuple[Signal, ...]
    name: str
    class_count: int
    class_histogram: NDArray[np.int64]

    def __post_init__(self) -> None:
        hist = np.array(self.class_histogram, dtype=np.int64, copy=True)
        if hist.shape != (self.class_count,):
            raise ValueError("class histogram length must equal class_count")
        if int(hist.sum()) != len(self.signals):
            raise ValueError("class histogram does not sum to the number of signals")
        hist.setflags(write=False)
        object.__setattr__(self, "class_histogram", hist)
        object.__setattr__(self, "signals", tuple(self.signals))

    @classmethod
    def from_signals(cls, signals: Sequence[Signal], name: str) -> "Dataset":
        signals = tuple(signals)
        if not signals:
            raise ValueError(f"{name}: empty dataset")
        lengths = {len(s) for s in signals}
        if len(lengths) != 1:
            raise ValueError(f"{name}: signals have mixed lengths {sorted(lengths)}")
        labels = [s.label for s in signals]
        if any(l is None for l in labels):
            raise ValueError(f"{name}: every signal needs a label")
        class_count = max(labels) + 1
        hist = np.bincount(labels, minlength=class_count).astype(np.int64)
        return cls(signals=signals, name=name, class_count=class_count, class_histogram=hist)

    def __len__(self) -> int:
        return len(self.signals)

    @property
    def length(self) -> int:
        return len(self.signals[0])

    def matrix(self) -> NDArray[np.float64]:
        """All signals as one (N, length) array."""
        return np.stack([s.values for s in self.signals])

    def labels(self) -> NDArray[np.int64]:
        return np.asarray([s.label for s in self.signals], dtype=np.int64)


@dataclass(frozen=True, eq=False)
class FoldPlan:
    """A stratified assignment of each signal to one of ``folds`` folds."""

    assignments: NDArray[np.int64]
    folds: int
    seed: int

    def __post_init__(self) -> None:
        assignments = np.array(self.assignments, dtype=np.int64, copy=True)
        if assignments.ndim != 1:
            raise ValueError("fold assignments must be 1-D")
        if assignments.size and not (
            assignments.min() >= 0 and assignments.max() < self.folds
        ):
            raise ValueError("fold assignments out of range")
        assignments.setflags(write=False)
        object.__setattr__(self, "assignments", assignments)

    def test_indices(self, fold: int) -> NDArray[np.int64]:
        return np.flatnonzero(self.assignments == fold)

    def train_indices(self, fold: int) -> NDArray[np.int64]:
        return np.flatnonzero(self.assignments != fold)


def stratified_folds(labels: Sequence[int], folds: int, seed: int) -> NDArray[np.int64]:
    """Per-class dealing after a seeded shuffle.

    Within every class the fold sizes differ by at most one.  Raises when a
    class has fewer members than folds.
    """
    labels = np.asarray(labels, dtype=np.int64)
    if folds < 2:
        raise ValueError(f"need at least 2 folds, got {folds}")
    rng = np.random.default_rng(seed)
    assignments = np.empty(labels.size, dtype=np.int64)
    for cls in np.unique(labels):
        idx = np.flatnonzero(labels == cls)
        if idx.size < folds:
            raise ValueError(f"class {cls} has {idx.size} samples, fewer than {folds} folds")
        idx = rng.permutation(idx)
        assignments[idx] = np.arange(idx.size) % folds
    return assignments


def make_folds(dataset: Dataset, folds: int, seed: int) -> FoldPlan:
    """Stratified fold plan for a dataset."""
    return FoldPlan(
        assignments=stratified_folds(dataset.labels(), folds, seed), folds=folds, seed=seed
    )


def _sniff_delimiter(line: str) -> str | None:
    if "\t" in line:
        return "\t"
    if "," in line:
        return ","
    return None


def _read_table(path: Path) -> NDArray[np.float64]:
    with open(path) as fh:
        first = fh.readline()
    if not first.strip():
        raise ValueError(f"{path}: empty file")
    delimiter = _sniff_delimiter(first)
    try:
        table = np.loadtxt(path, delimiter=delimiter, ndmin=2)
    except ValueError as exc:
        raise ValueError(f"{path}: could not parse ({exc})") from exc
    return table


def _labels_from_column(column: NDArray[np.float64], path: Path) -> NDArray[np.int64]:
    rounded = np.rint(column)
    if not np.all(np.abs(column - rounded) < 1e-9):
        bad = int(np.argmax(np.abs(column - rounded) >= 1e-9))
        raise ValueError(f"{path}: non-integer label {column[bad]!r} in row {bad}")
    return rounded.astype(np.int64)


def _remap_labels(raw: NDArray[np.int64]) -> NDArray[np.int64]:
    classes = np.unique(raw)
    lookup = {int(c): i for i, c in enumerate(classes)}
    return np.asarray([lookup[int(r)] for r in raw], dtype=np.int64)


def load_ucr(path: str | Path, name: str | None = None) -> Dataset:
    """Load a UCR-archive dataset (label first, tab/comma/space separated).

    ``path`` may be a single file or a directory holding the usual
    NAME_TRAIN / NAME_TEST pair, in which case both splits are concatenated
    (train rows first).  Raw labels are remapped to 0..C-1 in sorted order
    and every signal is standardized to value range [0, 1].
    """
    path = Path(path)
    if path.is_dir():
        train = sorted(path.glob("*_TRAIN*"))
        test = sorted(path.glob("*_TEST*"))
        if not train or not test:
            raise FileNotFoundError(f"{path}: expected *_TRAIN* and *_TEST* files")
        files = [train[0], test[0]]
        inferred = train[0].name.split("_TRAIN")[0]
    else:
        if not path.exists():
            raise FileNotFoundError(str(path))
        files = [path]
        inferred = path.stem
    tables = [_read_table(f) for f in files]
    widths = {t.shape[1] for t in tables}
    if len(widths) != 1:
        raise ValueError(f"{path}: splits disagree on column count {sorted(widths)}")
    if tables[0].shape[1] < 3:
        raise ValueError(f"{path}: need a label column plus at least 2 samples per row")
    table = np.concatenate(tables)
    raw_labels = _labels_from_column(table[:, 0], path)
    labels = _remap_labels(raw_labels)
    signals = [
        standardize(Signal(row, label=int(lbl))) for row, lbl in zip(table[:, 1:], labels)
    ]
    return Dataset.from_signals(signals, name=name or inferred)


def load_mitbih_csv(path: str | Path, name: str = "mitbih") -> Dataset:
    """Load a heartbeat CSV: 187 samples per row, integer label last.

    Rows with any other width are rejected with the offending row index.
    Signals are standardized (the source beats are already close to [0, 1];
    standardization is idempotent on exact [0, 1] signals).
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(str(path))
    table = _read_table(path)
    if table.shape[1] != 188:
        raise ValueError(f"{path}: expected 188 columns (187 samples + label), got {table.shape[1]}")
    labels = _remap_labels(_labels_from_column(table[:, -1], path))
    signals = [
        standardize(Signal(row, label=int(lbl))) for row, lbl in zip(table[:, :-1], labels)
    ]
    return Dataset.from_signals(signals, name=name)


def shift_augment(dataset: Dataset, target_length: int, seed: int) -> Dataset:
    """Zero-pad every signal to ``target_length``, splitting the padding
    between front and back uniformly at random (per signal).

    With signals whose endpoint values are 0 this shifts content without
    changing any sublevel-set pair.  ``target_length`` equal to the current
    length is the identity.
    """
    if target_length < dataset.length:
        raise ValueError(
            f"target length {target_length} shorter than signals ({dataset.length})"
        )
    rng = np.random.default_rng(seed)
    padded = []
    for s in dataset.signals:
        pad = target_length - len(s)
        front = int(rng.integers(0, pad + 1))
        values = np.concatenate(
            [np.zeros(front), s.values, np.zeros(pad - front)]
        )
        padded.append(Signal(values, label=s.label))
    return Dataset.from_signals(padded, name=f"{dataset.name}+shift{target_length}")


def save_dataset(path: str | Path, dataset: Dataset) -> None:
    """Serialize to .npz (float64 matrix + labels + metadata)."""
    np.savez(
        path,
        matrix=dataset.matrix(),
        labels=dataset.labels(),
        name=np.str_(dataset.name),
        class_count=np.int64(dataset.class_count),
    )


def load_dataset(path: str | Path) -> Dataset:
    path = Path(path)
    with np.load(path, allow_pickle=False) as payload:
        key = "matrix" if "matrix" in payload.files else "signals"
        if key not in payload.files or "labels" not in payload.files:
            raise KeyError(
                f"{path} must contain 'matrix' (or 'signals') and 'labels' arrays, "
                f"found {payload.files}"
            )
        matrix = payload[key]
        labels = payload["labels"]
        name = str(payload["name"]) if "name" in payload.files else path.stem
    signals = [Signal(row, label=int(lbl)) for row, lbl in zip(matrix, labels)]
    return Dataset.from_signals(signals, name=name)


def make_dip_dataset(
    count: int = 600,
    length: int = 64,
    seed: int = 0,
    positional: bool = False,
    depth_ranges: tuple[tuple[float, float], tuple[float, float]] = (
        (0.30, 0.40),
        (0.10, 0.20),
    ),
    name: str | None = None,
) -> Dataset:
    """Synthetic two-class benchmark with a class-coded dip depth.

    Each signal is piecewise linear through five anchors: 0 at both ends, a
    main peak of 0.95, a dip whose depth encodes the class, and a secondary
    peak of 0.6.  Every sublevel diagram is exactly two nested pairs, so
    after standardization landscape level 1 is identical across the whole
    dataset and level 2 alone carries the class (its peak height is the
    gap between the secondary peak and the dip).

    With ``positional`` the dip abscissa also encodes the class (class 0
    early, class 1 late), giving raw-signal models a positional shortcut
    that zero-padding destroys.
    """
    if length < 32:
        raise ValueError(f"length must be at least 32, got {length}")
    rng = np.random.default_rng(seed)
    grid = np.arange(length, dtype=np.float64)
    signals = []
    for i in range(count):
        label = i % 2
        if positional:
            lo, hi = (
                (length // 6, length // 4) if label == 0 else (3 * length // 5, 3 * length // 4)
            )
        else:
            lo, hi = length // 3, 2 * length // 3
        lo = max(lo, 5)
        hi = min(hi, length - 6)
        dip_x = int(rng.integers(lo, hi + 1))
        peak_x = int(rng.integers(2, dip_x - 1))
        second_x = int(rng.integers(dip_x + 2, length - 2))
        d_lo, d_hi = depth_ranges[label]
        depth = float(rng.uniform(d_lo, d_hi))
        anchors_x = [0.0, float(peak_x), float(dip_x), float(second_x), float(length - 1)]
        anchors_y = [0.0, 0.95, depth, 0.6, 0.0]
        values = np.interp(grid, anchors_x, anchors_y)
        signals.append(standardize(Signal(values, label=label)))
    base = "dip-positional" if positional else "dip-depth"
    return Dataset.from_signals(signals, name=name or base)
