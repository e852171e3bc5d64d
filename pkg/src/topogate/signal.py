"""Uniformly sampled signals viewed as piecewise linear functions.

A signal is a finite vector of samples y_0, ..., y_{n-1} on the implicit
integer grid x = 0, ..., n-1, interpreted as the piecewise linear function
that joins consecutive samples.  Everything downstream (filtrations,
landscapes, reconstruction) works on this PL interpretation, so the two
operations here are the load-bearing primitives: affine rescaling of the
value range to [0, 1] and the extraction of critical points.

Critical points are reported in left-to-right order and alternate between
minima and maxima.  Plateaus (runs of equal samples) are compressed to a
single representative: the leftmost sample of an interior run, or the
endpoint itself when the run touches the boundary.  Endpoints are always
reported, classified against the first differing inward neighbour; a
constant signal is reported as (min at x=0, max at x=n-1) by convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

MINIMUM = "min"
MAXIMUM = "max"


@dataclass(frozen=True, eq=False)
class Signal:
    """An immutable 1-D signal with an optional class label.

    Parameters
    ----------
    values:
        Sample values; any 1-D float sequence with at least two entries,
        all finite.  Stored as a read-only float64 array.
    label:
        Optional non-negative integer class label.
    """

    values: NDArray[np.float64]
    label: int | None = None

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64, copy=True)
        if values.ndim != 1:
            raise ValueError(f"signal must be 1-D, got shape {values.shape}")
        if values.size < 2:
            raise ValueError(f"signal needs at least 2 samples, got {values.size}")
        if not np.all(np.isfinite(values)):
            raise ValueError("signal contains NaN or infinite samples")
        if self.label is not None:
            label = int(self.label)
            if label < 0:
                raise ValueError(f"label must be non-negative, got {label}")
            object.__setattr__(self, "label", label)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def x(self) -> NDArray[np.float64]:
        """The implicit sample grid 0, 1, ..., n-1."""
        return np.arange(self.values.size, dtype=np.float64)

    def is_constant(self) -> bool:
        return bool(np.all(self.values == self.values[0]))


@dataclass(frozen=True)
class CriticalPoint:
    """A local extremum of the PL interpolation of a signal.

    ``x`` is a sample abscissa (integral, stored as float), ``y`` the sample
    value there and ``kind`` one of ``"min"`` / ``"max"``.
    """

    x: float
    y: float
    kind: str

    def __post_init__(self) -> None:
        if self.kind not in (MINIMUM, MAXIMUM):
            raise ValueError(f"kind must be '{MINIMUM}' or '{MAXIMUM}', got {self.kind!r}")


def standardize(signal: Signal) -> Signal:
    """Affinely rescale a signal so its values span exactly [0, 1].

    Constant signals map to the all-zero signal.  The label is preserved.
    Idempotent: standardizing a standardized signal is the identity.
    """
    v = signal.values
    lo = float(v.min())
    hi = float(v.max())
    if hi == lo:
        return Signal(np.zeros_like(v), label=signal.label)
    return Signal((v - lo) / (hi - lo), label=signal.label)


def _runs(values: NDArray[np.float64]) -> tuple[NDArray[np.intp], NDArray[np.float64]]:
    """Start index and value of each maximal run of equal consecutive samples."""
    change = np.flatnonzero(np.diff(values) != 0.0)
    starts = np.concatenate(([0], change + 1)).astype(np.intp)
    return starts, values[starts]


def critical_points(signal: Signal, include_endpoints: bool = True) -> list[CriticalPoint]:
    """Local extrema of the PL interpolation, left to right.

    Interior plateaus are represented by their leftmost sample; a plateau
    that touches the boundary is represented by the endpoint alone.  With
    ``include_endpoints`` the first and last samples are always reported,
    classified against the first differing inward neighbour, so the result
    alternates min/max and starts and ends with an endpoint.

    Parameters
    ----------
    signal:
        The signal to scan.
    include_endpoints:
        When False, only interior extrema are returned.
    """
    v = signal.values
    n = v.size
    starts, vals = _runs(v)
    m = starts.size
    points: list[CriticalPoint] = []

    if m == 1:
        if include_endpoints:
            points.append(CriticalPoint(0.0, float(v[0]), MINIMUM))
            points.append(CriticalPoint(float(n - 1), float(v[0]), MAXIMUM))
        return points

    if include_endpoints:
        kind = MINIMUM if vals[0] < vals[1] else MAXIMUM
        points.append(CriticalPoint(0.0, float(vals[0]), kind))

    for j in range(1, m - 1):
        prev, cur, nxt = vals[j - 1], vals[j], vals[j + 1]
        if cur > prev and cur > nxt:
            points.append(CriticalPoint(float(starts[j]), float(cur), MAXIMUM))
        elif cur < prev and cur < nxt:
            points.append(CriticalPoint(float(starts[j]), float(cur), MINIMUM))

    if include_endpoints:
        kind = MINIMUM if vals[m - 1] < vals[m - 2] else MAXIMUM
        points.append(CriticalPoint(float(n - 1), float(vals[m - 1]), kind))

    return points
