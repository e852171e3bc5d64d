"""Recovering a simplified signal from its landscape levels.

Landscape levels are piecewise linear with slopes in {-1, 0, +1}, so their
vertices encode diagram values directly: a level takes off from zero at a
birth, peaks at tent apexes and changes direction at slope crossings.  The
y-scan walks a sampled level left to right and emits candidate critical
values: a take-off emits its abscissa; every interior extremum emits
2 * t_vertex - previous_entry (the reflection that maps an apex abscissa
(b + d) / 2 with previous entry b to the death d, and a valley abscissa to
the next birth).  Landing vertices (descent into zero) would reproduce the
previous entry exactly and are skipped.

Candidate values are then matched back to the signal: sample i matches
candidate c when (s_i - c)^2 < threshold and i is a critical point.  The
matched points, plus the two endpoint samples and the global minimum
(which no tent encodes) as anchors, are joined by linear interpolation and
resampled on the original grid.

Exactness depends on the sampling grid: :func:`level_polylines` evaluates
levels on a dense uniform grid augmented with every candidate vertex
abscissa {b_i} + {d_i} + {(b_i + d_j) / 2}, which makes the scan exact up
to float rounding.  On a plain uniform grid the reflection compounds
sampling error, so the default threshold widens with the grid spacing
(max of 1e-4 and spacing squared).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from . import kernels
from .persistence import PersistenceDiagram, sublevel_diagram
from .signal import MINIMUM, CriticalPoint, Signal, critical_points

DEFAULT_THRESHOLD = 1e-4
DEFAULT_DENSITY = 10


@dataclass(frozen=True, eq=False)
class LandscapePolyline:
    """One landscape level sampled at strictly increasing abscissas."""

    t: NDArray[np.float64]
    values: NDArray[np.float64]

    def __post_init__(self) -> None:
        t = np.array(self.t, dtype=np.float64, copy=True)
        values = np.array(self.values, dtype=np.float64, copy=True)
        if t.ndim != 1 or t.shape != values.shape:
            raise ValueError(f"t {t.shape} and values {values.shape} must be equal 1-D shapes")
        if t.size < 2:
            raise ValueError("polyline needs at least 2 samples")
        if np.any(np.diff(t) <= 0):
            raise ValueError("t must be strictly increasing")
        if np.any(values < 0):
            raise ValueError("landscape values cannot be negative")
        t.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "values", values)


@dataclass(frozen=True, eq=False)
class Reconstruction:
    """Recovered critical points and the simplified signal through them."""

    points: tuple[CriticalPoint, ...]
    simplified: Signal


def get_y_values(polyline: LandscapePolyline) -> list[float]:
    """Candidate critical values from one level, in scan order, deduplicated."""
    t = polyline.t
    v = polyline.values
    change = np.flatnonzero(np.diff(v) != 0.0)
    starts = np.concatenate(([0], change + 1))
    ends = np.concatenate((change, [v.size - 1]))
    vals = v[starts]
    runs = starts.size

    entries: list[float] = []
    for j in range(runs):
        cur = vals[j]
        if cur == 0.0:
            if j + 1 < runs and vals[j + 1] > 0.0:
                entries.append(float(t[ends[j]]))
            continue
        if j == 0:
            entries.append(float(t[0]))
            continue
        if j + 1 == runs:
            continue
        prev_v, next_v = vals[j - 1], vals[j + 1]
        if (cur > prev_v and cur > next_v) or (cur < prev_v and cur < next_v):
            mid = 0.5 * (float(t[starts[j]]) + float(t[ends[j]]))
            entries.append(2.0 * mid - entries[-1])
    return list(dict.fromkeys(entries))


def get_x_values(
    y_values: Sequence[float], signal: Signal, threshold: float = DEFAULT_THRESHOLD
) -> list[float]:
    """Sample abscissas matching the candidate values.

    Sample i matches candidate c when (s_i - c)^2 < threshold and i is a
    critical point of the signal.  Matches are returned in scan order
    (candidate-major) and may repeat.
    """
    if threshold <= 0:
        raise ValueError(f"threshold must be positive, got {threshold}")
    v = signal.values
    critical = {int(p.x) for p in critical_points(signal)}
    xs: list[float] = []
    for target in y_values:
        close = np.flatnonzero((v - float(target)) ** 2 < threshold)
        xs.extend(float(i) for i in close if int(i) in critical)
    return xs


def _max_spacing(levels: Sequence[LandscapePolyline]) -> float:
    return max(float(np.diff(p.t).max()) for p in levels)


def reconstruct(
    levels: Sequence[LandscapePolyline],
    signal: Signal,
    threshold: float | None = None,
) -> Reconstruction:
    """Recover critical points from the given levels and resample.

    The recovered x-set is the union over levels, plus the first and last
    samples and the global minimum as anchors.  Raises when no candidate
    value matches any critical point.
    """
    if not levels:
        raise ValueError("need at least one landscape level")
    if threshold is None:
        threshold = max(DEFAULT_THRESHOLD, _max_spacing(levels) ** 2)

    candidates: list[float] = []
    for polyline in levels:
        candidates.extend(get_y_values(polyline))
    candidates = list(dict.fromkeys(candidates))

    xs = get_x_values(candidates, signal, threshold)
    if not xs:
        raise ValueError("no candidate value matches a critical point of the signal")

    points_by_x = {p.x: p for p in critical_points(signal)}
    minima = [p for p in points_by_x.values() if p.kind == MINIMUM]
    global_min = min(minima, key=lambda p: (p.y, p.x))
    anchors = {0.0, float(len(signal) - 1), global_min.x}

    keep = sorted(set(xs) | anchors)
    points = tuple(points_by_x[x] for x in keep)

    grid = np.arange(len(signal), dtype=np.float64)
    values = np.interp(grid, [p.x for p in points], [p.y for p in points])
    return Reconstruction(points=points, simplified=Signal(values, label=signal.label))


def level_polylines(
    diagram: PersistenceDiagram,
    level_indices: Sequence[int],
    length: int,
    t_min: float = 0.0,
    t_max: float = 1.0,
    density: int = DEFAULT_DENSITY,
) -> list[LandscapePolyline]:
    """Sample the requested levels on a vertex-exact grid.

    The grid is ``density * length`` uniform points on [t_min, t_max]
    augmented with every candidate vertex abscissa of the tent arrangement
    ({births} + {deaths} + all pairwise apex/crossing midpoints), so the
    sampled polylines contain the true vertices of each level.
    """
    ks = sorted({int(k) for k in level_indices})
    if not ks or ks[0] < 1:
        raise ValueError(f"level indices must be >= 1, got {sorted(level_indices)}")
    if density < 1:
        raise ValueError(f"density must be >= 1, got {density}")
    if not t_max > t_min:
        raise ValueError(f"need t_max > t_min, got [{t_min}, {t_max}]")
    base = np.linspace(t_min, t_max, max(2, density * length))
    births, deaths = diagram.births, diagram.deaths
    if births.size:
        cross = (births[:, None] + deaths[None, :]) / 2.0
        extra = np.concatenate([births, deaths, cross.ravel()])
        extra = extra[(extra >= t_min) & (extra <= t_max)]
        t = np.unique(np.concatenate([base, extra]))
    else:
        t = base
    stack = kernels.tent_stack(births, deaths, t, ks[-1])
    return [LandscapePolyline(t=t, values=stack[k - 1]) for k in ks]


def reconstruct_signal(
    signal: Signal,
    level_indices: Sequence[int] = (1, 2, 3),
    density: int = DEFAULT_DENSITY,
    threshold: float | None = None,
) -> Reconstruction:
    """Full pipeline: diagram, vertex-exact level sampling, reconstruction.

    The evaluation window spans the signal's value range, so standardized
    and raw signals both work.
    """
    diagram = sublevel_diagram(signal)
    lo = float(signal.values.min())
    hi = float(signal.values.max())
    if hi <= lo:
        hi = lo + 1.0
    polylines = level_polylines(
        diagram, level_indices, length=len(signal), t_min=lo, t_max=hi, density=density
    )
    return reconstruct(polylines, signal, threshold)
