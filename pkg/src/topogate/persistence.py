"""Zero-dimensional persistence of the sublevel-set filtration of a signal.

For a threshold t, the sublevel set of a PL signal s is {x : s(x) <= t}.
As t sweeps upward, connected components appear at local minima and merge
at local maxima (values between samples never create or join components,
so the filtration is fully determined by the samples).  Each component is
born at the value of the local minimum that created it; when two
components meet, the elder rule keeps the one with the smaller birth
(ties: smaller sample index) and the younger one dies at the merge value,
yielding the pair (birth, death).  The component born at the global
minimum never dies; it is the essential class and is reported separately
rather than as a pair.  Pairs with death equal to birth carry no
information and are dropped.

The sweep is implemented as a single pass over the samples in increasing
value order with a union-find over sample indices; see
:mod:`topogate.kernels` for the two interchangeable backends.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np
from numpy.typing import NDArray

from . import kernels
from .signal import Signal


class PersistencePair(NamedTuple):
    """A finite (birth, death) pair with death > birth."""

    birth: float
    death: float

    @property
    def persistence(self) -> float:
        return self.death - self.birth


@dataclass(frozen=True, eq=False)
class PersistenceDiagram:
    """Finite pairs of a sublevel-set filtration plus the essential birth.

    ``pairs`` is a read-only (P, 2) float64 array with death > birth on
    every row, sorted by (birth, death); ``essential_birth`` is the global
    minimum of the signal (the birth of the never-dying component).
    """

    pairs: NDArray[np.float64]
    essential_birth: float

    def __post_init__(self) -> None:
        pairs = np.array(self.pairs, dtype=np.float64, copy=True).reshape(-1, 2)
        if pairs.size and not np.all(pairs[:, 1] > pairs[:, 0]):
            raise ValueError("every pair needs death > birth")
        pairs.setflags(write=False)
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "essential_birth", float(self.essential_birth))

    def __len__(self) -> int:
        return int(self.pairs.shape[0])

    @property
    def births(self) -> NDArray[np.float64]:
        return self.pairs[:, 0]

    @property
    def deaths(self) -> NDArray[np.float64]:
        return self.pairs[:, 1]

    def pair_list(self) -> list[PersistencePair]:
        return [PersistencePair(float(b), float(d)) for b, d in self.pairs]

    def to_dict(self) -> dict:
        return {
            "pairs": [[float(b), float(d)] for b, d in self.pairs],
            "essential_birth": self.essential_birth,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "PersistenceDiagram":
        pairs = np.asarray(payload["pairs"], dtype=np.float64).reshape(-1, 2)
        return cls(pairs=pairs, essential_birth=float(payload["essential_birth"]))


def sublevel_diagram(signal: Signal) -> PersistenceDiagram:
    """Compute the persistence diagram of a signal's sublevel filtration."""
    pairs, essential = kernels.sublevel_pairs(signal.values)
    return PersistenceDiagram(pairs=pairs, essential_birth=essential)


def save_diagram(path: str | Path, diagram: PersistenceDiagram) -> None:
    Path(path).write_text(json.dumps(diagram.to_dict(), indent=2) + "\n")


def load_diagram(path: str | Path) -> PersistenceDiagram:
    return PersistenceDiagram.from_dict(json.loads(Path(path).read_text()))
