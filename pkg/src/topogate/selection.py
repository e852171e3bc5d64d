"""Choosing how many landscape levels to keep from trained gate weights.

The input is the vector of mean effective gate values w_1..w_K (one per
landscape level).  Two rules, applied in order, pick a cut index k* whose
prefix 1..k*-1 is the selection:

1. Significant drop: consider every k with w_k < w_{k-1} / 2.  If any such
   drop starts from a level that still matters (w_{k-1} > 0.1), cut at the
   largest such k.
2. Mass majority (fallback): the smallest k whose prefix outweighs its
   suffix, sum_{j<k} w_j > sum_{j>=k} w_j, scanning k = 2..K+1.  At
   k = K+1 the suffix is empty, so the scan always terminates and the
   selection is never empty.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .landscape import LandscapeStack
from .util import atomic_write_text

DROP_RULE = "largest_significant_drop"
MASS_RULE = "mass_majority"

_DROP_RATIO = 0.5
_SIGNIFICANT = 0.1


@dataclass(frozen=True)
class SelectionResult:
    """The chosen levels (a 1-indexed prefix), the cut and the rule that fired."""

    selected: tuple[int, ...]
    cut_index: int
    rule: str
    weights: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "selected", tuple(int(k) for k in self.selected))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if self.rule not in (DROP_RULE, MASS_RULE):
            raise ValueError(f"unknown rule {self.rule!r}")
        if self.selected != tuple(range(1, self.cut_index)):
            raise ValueError("selected levels must be the prefix below the cut index")
        if not self.selected:
            raise ValueError("selection cannot be empty")

    def to_dict(self) -> dict:
        return {
            "selected": list(self.selected),
            "cut_index": self.cut_index,
            "rule": self.rule,
            "weights": list(self.weights),
        }

    @classmethod
    def from_dict(cls, payload: Mapping) -> "SelectionResult":
        return cls(
            selected=tuple(payload["selected"]),
            cut_index=int(payload["cut_index"]),
            rule=str(payload["rule"]),
            weights=tuple(payload["weights"]),
        )


def select_levels(weights: Sequence[float]) -> SelectionResult:
    """Apply the drop rule, falling back to mass majority.

    ``weights`` are the per-level mean gate values, at least two of them.
    """
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1 or w.size < 2:
        raise ValueError(f"need at least 2 level weights, got shape {w.shape}")
    k_count = w.size

    drops = [
        k
        for k in range(2, k_count + 1)
        if w[k - 1] < _DROP_RATIO * w[k - 2] and w[k - 2] > _SIGNIFICANT
    ]
    if drops:
        cut = max(drops)
        rule = DROP_RULE
    else:
        total = float(w.sum())
        prefix = float(w[0])
        cut = k_count + 1
        for k in range(2, k_count + 1):
            if prefix > total - prefix:
                cut = k
                break
            prefix += float(w[k - 1])
        rule = MASS_RULE

    return SelectionResult(
        selected=tuple(range(1, cut)),
        cut_index=cut,
        rule=rule,
        weights=tuple(float(v) for v in w),
    )


def restrict_stack(stack: LandscapeStack, selection: SelectionResult) -> LandscapeStack:
    """Keep only the selected levels (rows) of a stack."""
    if selection.selected[-1] > stack.depth:
        raise ValueError(
            f"selection uses level {selection.selected[-1]} but the stack has {stack.depth}"
        )
    rows = [k - 1 for k in selection.selected]
    return LandscapeStack(
        levels=stack.levels[rows], grid=stack.grid, normalized=stack.normalized
    )


def save_selection(path: str | Path, selection: SelectionResult) -> None:
    atomic_write_text(Path(path), json.dumps(selection.to_dict(), indent=2) + "\n")


def load_selection(path: str | Path) -> SelectionResult:
    return SelectionResult.from_dict(json.loads(Path(path).read_text()))
