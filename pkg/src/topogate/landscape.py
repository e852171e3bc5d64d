"""Persistence landscapes discretized on a fixed grid.

Each diagram pair (b, d) contributes the tent function
Lambda(t) = max(0, min(t - b, d - t)), a spike of height (d - b) / 2 over
the interval [b, d].  The landscape level k is the pointwise k-th largest
tent value (0 where fewer than k tents are positive), so level 1 is the
upper envelope and levels are pointwise non-increasing in k.  A stack is
the first K levels sampled on a common grid, which turns a variable-size
diagram into a fixed K x m matrix suitable for batch training.

Areas differ wildly across signals, so stacks can be normalized level by
level to unit area under the trapezoid rule; identically zero levels are
left untouched.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from numpy.typing import NDArray

from . import kernels
from .persistence import PersistenceDiagram, sublevel_diagram
from .signal import Signal
from .util import atomic_write_bytes, atomic_write_text

DEFAULT_LEVELS = 10
DEFAULT_GRID_POINTS = 100


@dataclass(frozen=True)
class TentFunction:
    """The triangular contribution of one diagram pair."""

    birth: float
    death: float

    def __post_init__(self) -> None:
        if not self.death > self.birth:
            raise ValueError(f"tent needs death > birth, got ({self.birth}, {self.death})")

    @property
    def peak(self) -> tuple[float, float]:
        """Apex abscissa and height ((b + d) / 2, (d - b) / 2)."""
        return (self.birth + self.death) / 2.0, (self.death - self.birth) / 2.0

    def __call__(self, t) -> NDArray[np.float64]:
        t = np.asarray(t, dtype=np.float64)
        return np.maximum(0.0, np.minimum(t - self.birth, self.death - t))


@dataclass(frozen=True)
class LandscapeGrid:
    """A uniform evaluation grid t_0 < ... < t_{m-1} on [t_min, t_max]."""

    t_min: float = 0.0
    t_max: float = 1.0
    points: int = DEFAULT_GRID_POINTS

    def __post_init__(self) -> None:
        if not self.t_max > self.t_min:
            raise ValueError(f"need t_max > t_min, got [{self.t_min}, {self.t_max}]")
        if self.points < 2:
            raise ValueError(f"grid needs at least 2 points, got {self.points}")

    @property
    def values(self) -> NDArray[np.float64]:
        return np.linspace(self.t_min, self.t_max, self.points)

    @property
    def spacing(self) -> float:
        return (self.t_max - self.t_min) / (self.points - 1)


@dataclass(frozen=True, eq=False)
class LandscapeStack:
    """K landscape levels sampled on a common grid, as a (K, m) matrix.

    Row k-1 is level k.  ``normalized`` records whether rows have been
    area-normalized (so it is impossible to normalize twice silently).
    """

    levels: NDArray[np.float64]
    grid: LandscapeGrid
    normalized: bool = False

    def __post_init__(self) -> None:
        levels = np.array(self.levels, dtype=np.float64, copy=True)
        if levels.ndim != 2:
            raise ValueError(f"stack must be 2-D (levels x grid), got shape {levels.shape}")
        if levels.shape[1] != self.grid.points:
            raise ValueError(
                f"stack has {levels.shape[1]} columns but the grid has {self.grid.points} points"
            )
        if np.any(levels < 0.0):
            raise ValueError("landscape levels cannot be negative")
        levels.setflags(write=False)
        object.__setattr__(self, "levels", levels)

    @property
    def depth(self) -> int:
        """Number of levels K."""
        return int(self.levels.shape[0])

    def level(self, k: int) -> NDArray[np.float64]:
        """Level k, 1-indexed."""
        if not 1 <= k <= self.depth:
            raise ValueError(f"level must be in 1..{self.depth}, got {k}")
        return self.levels[k - 1]


def landscape_stack(
    diagram: PersistenceDiagram,
    grid: LandscapeGrid | None = None,
    levels: int = DEFAULT_LEVELS,
) -> LandscapeStack:
    """Sample the first ``levels`` landscape levels of a diagram on a grid."""
    if levels < 1:
        raise ValueError(f"need at least 1 level, got {levels}")
    grid = grid or LandscapeGrid()
    data = kernels.tent_stack(diagram.births, diagram.deaths, grid.values, levels)
    return LandscapeStack(levels=data, grid=grid, normalized=False)


def level_areas(stack: LandscapeStack) -> NDArray[np.float64]:
    """Trapezoid-rule area of each level over the grid."""
    return np.trapezoid(stack.levels, dx=stack.grid.spacing, axis=1)


def normalize_area(stack: LandscapeStack) -> LandscapeStack:
    """Rescale each level to unit trapezoid-rule area.

    Identically zero levels are left untouched.  Raises if the stack is
    already normalized.
    """
    if stack.normalized:
        raise ValueError("stack is already area-normalized")
    areas = level_areas(stack)
    scale = np.ones_like(areas)
    positive = areas > 0.0
    scale[positive] = 1.0 / areas[positive]
    return LandscapeStack(
        levels=stack.levels * scale[:, None], grid=stack.grid, normalized=True
    )


def stack_dataset(
    signals: Sequence[Signal],
    grid: LandscapeGrid | None = None,
    levels: int = DEFAULT_LEVELS,
    normalize: bool = True,
) -> list[LandscapeStack]:
    """Diagram + stack (+ optional normalization) for every signal.

    Failures are re-raised with the offending signal index attached.
    """
    grid = grid or LandscapeGrid()
    stacks: list[LandscapeStack] = []
    for i, signal in enumerate(signals):
        try:
            stack = landscape_stack(sublevel_diagram(signal), grid=grid, levels=levels)
            if normalize:
                stack = normalize_area(stack)
        except Exception as exc:
            raise ValueError(f"signal {i}: {exc}") from exc
        stacks.append(stack)
    return stacks


_MAGIC = b"TGLS"
_FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sIIIIddBB")


def save_stacks(
    path: str | Path,
    stacks: Sequence[LandscapeStack],
    labels: Sequence[int] | None = None,
) -> None:
    """Write stacks to a versioned binary file plus a JSON sidecar.

    All stacks must share grid, depth and normalization flag.  The sidecar
    (same path + ".json") describes the payload for humans and tools.
    """
    if not stacks:
        raise ValueError("nothing to save: empty stack sequence")
    first = stacks[0]
    for i, s in enumerate(stacks):
        if s.grid != first.grid or s.depth != first.depth or s.normalized != first.normalized:
            raise ValueError(f"stack {i} disagrees with stack 0 on grid/depth/normalization")
    if labels is not None and len(labels) != len(stacks):
        raise ValueError(f"{len(labels)} labels for {len(stacks)} stacks")

    path = Path(path)
    header = _HEADER.pack(
        _MAGIC,
        _FORMAT_VERSION,
        len(stacks),
        first.depth,
        first.grid.points,
        first.grid.t_min,
        first.grid.t_max,
        int(first.normalized),
        int(labels is not None),
    )
    blob = bytearray(header)
    if labels is not None:
        blob += np.asarray(labels, dtype=np.int32).tobytes()
    data = np.stack([s.levels for s in stacks])
    blob += np.ascontiguousarray(data, dtype=np.float64).tobytes()
    atomic_write_bytes(path, bytes(blob))

    sidecar = {
        "format": _MAGIC.decode(),
        "format_version": _FORMAT_VERSION,
        "count": len(stacks),
        "levels": first.depth,
        "grid_points": first.grid.points,
        "t_min": first.grid.t_min,
        "t_max": first.grid.t_max,
        "normalized": first.normalized,
        "has_labels": labels is not None,
        "dtype": "float64",
        "layout": "header, int32 labels if present, then count x levels x grid_points row-major",
    }
    atomic_write_text(path.with_name(path.name + ".json"), json.dumps(sidecar, indent=2) + "\n")


def load_stacks(path: str | Path) -> tuple[list[LandscapeStack], NDArray[np.int64] | None]:
    """Read stacks written by :func:`save_stacks`."""
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise ValueError(f"{path}: truncated header")
    magic, version, count, depth, points, t_min, t_max, normalized, has_labels = _HEADER.unpack(
        raw[: _HEADER.size]
    )
    if magic != _MAGIC:
        raise ValueError(f"{path}: not a landscape stack file (bad magic {magic!r})")
    if version != _FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported format version {version}")
    offset = _HEADER.size
    labels = None
    if has_labels:
        labels = np.frombuffer(raw, dtype=np.int32, count=count, offset=offset).astype(np.int64)
        offset += 4 * count
    expected = count * depth * points
    data = np.frombuffer(raw, dtype=np.float64, count=expected, offset=offset)
    if data.size != expected:
        raise ValueError(f"{path}: truncated payload")
    data = data.reshape(count, depth, points)
    grid = LandscapeGrid(t_min=t_min, t_max=t_max, points=points)
    stacks = [
        LandscapeStack(levels=data[i], grid=grid, normalized=bool(normalized))
        for i in range(count)
    ]
    return stacks, labels


def stack_to_csv(path: str | Path, stack: LandscapeStack) -> None:
    """Export one stack as CSV: a t column plus one column per level."""
    header = "t," + ",".join(f"level{k}" for k in range(1, stack.depth + 1))
    table = np.column_stack([stack.grid.values, stack.levels.T])
    lines = [header]
    lines += [",".join(repr(float(x)) for x in row) for row in table]
    atomic_write_text(Path(path), "\n".join(lines) + "\n")


def stacks_matrix(stacks: Iterable[LandscapeStack]) -> NDArray[np.float64]:
    """Stack a sequence of (K, m) stacks into an (N, K, m) batch array."""
    return np.stack([s.levels for s in stacks])
