"""Normalized hypervolume/distance quality indicator for archives.

The indicator of an archive is

* the negated ROI hypervolume once any archived point is at or inside the
  ROI box (weakly dominating the nadir, equality included), and
* otherwise the minimum normalized distance from the archive to the ROI,
  which is strictly positive.

An empty archive evaluates to the +infinity sentinel on the distance
branch.  Along a run the value never increases, and the branch switches
from Distance to Hypervolume at most once; the hypervolume value of an
archive containing exactly the nadir is 0, and an archive containing the
ideal reaches the lower bound -1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from bibench.archive import Archive, InsertOutcome

__all__ = ["Branch", "IndicatorValue", "EMPTY_ARCHIVE_VALUE", "evaluate", "evaluate_incremental"]


class Branch(Enum):
    HYPERVOLUME = "hypervolume"
    DISTANCE = "distance"


@dataclass(frozen=True)
class IndicatorValue:
    """An indicator value together with the branch that produced it.

    Hypervolume-branch values are <= 0; distance-branch values are > 0
    (including the +infinity sentinel for an empty archive).  The overall
    range is [-1, +infinity].
    """

    value: float
    branch: Branch

    def __post_init__(self) -> None:
        if self.branch is Branch.HYPERVOLUME:
            if not (-1.0 <= self.value <= 0.0):
                raise ValueError(
                    f"hypervolume-branch value must lie in [-1, 0], got {self.value}"
                )
        elif not self.value > 0.0:
            raise ValueError(f"distance-branch value must be positive, got {self.value}")


EMPTY_ARCHIVE_VALUE = IndicatorValue(math.inf, Branch.DISTANCE)


def _from_hypervolume(hv: float) -> IndicatorValue:
    # The exact clipped hypervolume is <= 1; summation may overshoot by a
    # fraction of an ULP, which must not breach the [-1, 0] invariant.
    if hv >= 1.0:
        return IndicatorValue(-1.0, Branch.HYPERVOLUME)
    return IndicatorValue(-hv if hv > 0.0 else 0.0, Branch.HYPERVOLUME)


def evaluate(arch: Archive) -> IndicatorValue:
    """Full evaluation of an archive's indicator value."""
    if len(arch) == 0:
        return EMPTY_ARCHIVE_VALUE
    if arch.dominates_nadir:
        return _from_hypervolume(arch.hypervolume())
    return IndicatorValue(arch.min_distance_to_roi(), Branch.DISTANCE)


def evaluate_incremental(
    prev: IndicatorValue, outcome: InsertOutcome, arch: Archive
) -> IndicatorValue:
    """O(1) per-evaluation update used by experiment loops.

    A rejected insertion leaves ``prev`` untouched without consulting the
    archive.  An accepted one reads the archive's compensated caches, which
    keeps the trajectory bit-identical to re-running :func:`evaluate` (a
    chain of floating subtractions of the outcome gains would drift).  The
    Distance -> Hypervolume transition happens at most once because the
    archive's nadir flag is monotone.
    """
    if not outcome.accepted:
        return prev
    if prev.branch is Branch.HYPERVOLUME or arch.dominates_nadir:
        return _from_hypervolume(arch.hypervolume())
    return IndicatorValue(arch.min_distance_to_roi(), Branch.DISTANCE)
