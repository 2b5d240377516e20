"""Inequality indices, ranking extraction, and rank-reversal diagnostics.

The scan walks an exponent grid, compares the induced rankings at adjacent
grid points, and brackets every order flip by bisecting the weight difference
of the flipped pair. A method is scale-invariant on an instance exactly when
its scan comes back empty.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DataError
from .goals import GoalsMatrix
from .weights import WeightVector, WeightingMethod, weights_for_alpha

TIE_ATOL = 1e-12


def hhi(weights: WeightVector) -> float:
    """Sum of squared shares; 1/n for uniform, 1 in the degenerate limit."""
    return float(np.sum(weights.w * weights.w))


def hhi_star(weights: WeightVector) -> float:
    """Concentration normalized to [0, 1]: 0 for equal shares, 1 when one
    participant takes everything."""
    n = weights.n
    if n < 2:
        raise DataError("normalized concentration needs at least 2 teams")
    return (hhi(weights) - 1.0 / n) / (1.0 - 1.0 / n)


@dataclass(frozen=True)
class Ranking:
    """Teams ordered best to worst with a partition into tie groups.

    Teams whose weights differ by less than the tie tolerance fall into one
    group and are ordered by their input position.
    """

    teams: tuple[str, ...]
    tie_groups: tuple[tuple[str, ...], ...]

    def position_of(self, team_id: str) -> int:
        return self.teams.index(team_id)

    def has_ties(self) -> bool:
        return any(len(group) > 1 for group in self.tie_groups)


def ranking_of(weights: WeightVector, tie_tol: float = TIE_ATOL) -> Ranking:
    """Stable descending ranking with tolerance-based tie grouping."""
    w = weights.w
    order = sorted(range(weights.n), key=lambda i: (-w[i], i))
    groups: list[list[int]] = [[order[0]]]
    for prev, cur in zip(order, order[1:]):
        if abs(w[prev] - w[cur]) < tie_tol:
            groups[-1].append(cur)
        else:
            groups.append([cur])
    ranked: list[str] = []
    tie_groups: list[tuple[str, ...]] = []
    for group in groups:
        group.sort()  # tied teams fall back to input order
        tie_groups.append(tuple(weights.teams[i] for i in group))
        ranked.extend(weights.teams[i] for i in group)
    return Ranking(tuple(ranked), tuple(tie_groups))


@dataclass(frozen=True)
class Crossing:
    """One rank reversal: ``overtaking`` passes ``overtaken`` as the exponent
    increases through the bracketed interval."""

    overtaken: str
    overtaking: str
    alpha_low: float
    alpha_high: float


@dataclass(frozen=True)
class CrossingReport:
    method: str
    alpha_min: float
    alpha_max: float
    crossings: tuple[Crossing, ...]

    def is_empty(self) -> bool:
        return not self.crossings

    def pairs(self) -> tuple[tuple[str, str], ...]:
        return tuple((c.overtaken, c.overtaking) for c in self.crossings)


def _flipped_pairs(before: WeightVector, after: WeightVector,
                   tie_tol: float) -> list[tuple[int, int]]:
    """Index pairs strictly ordered one way before and the other way after."""
    flips = []
    wb, wa = before.w, after.w
    n = before.n
    for i in range(n):
        for j in range(i + 1, n):
            db = wb[i] - wb[j]
            da = wa[i] - wa[j]
            if db > tie_tol and da < -tie_tol:
                flips.append((i, j))
            elif db < -tie_tol and da > tie_tol:
                flips.append((j, i))
    return flips


def scale_invariance_scan(matrix: GoalsMatrix, method: WeightingMethod,
                          alpha_grid: Sequence[float],
                          refine_tol: float = 1e-6,
                          epsilon: float = 0.0) -> CrossingReport:
    """Detect and bracket every ranking flip along an exponent grid.

    Args:
        matrix: goal counts to scan.
        method: weight derivation under test.
        alpha_grid: strictly increasing non-negative exponents.
        refine_tol: maximum width of each reported crossing interval.
        epsilon: smoothing constant forwarded to matrix construction.

    Returns:
        A report whose crossing list is empty exactly when the ranking is
        identical at every grid point. Each flip between adjacent grid points
        is refined independently by bisection on the weight difference of the
        flipped pair.
    """
    grid = [float(a) for a in alpha_grid]
    if len(grid) < 2:
        raise DataError("alpha grid needs at least 2 points")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DataError("alpha grid must be strictly increasing")
    if grid[0] < 0:
        raise DataError("alpha grid must be non-negative")
    if refine_tol <= 0:
        raise DataError("refinement tolerance must be positive")

    vectors = [weights_for_alpha(matrix, method, a, epsilon) for a in grid]
    crossings: list[Crossing] = []
    for k in range(len(grid) - 1):
        for i, j in _flipped_pairs(vectors[k], vectors[k + 1], TIE_ATOL):
            lo, hi = grid[k], grid[k + 1]
            # team i is ahead at lo, team j at hi; bisect their difference
            while hi - lo > refine_tol:
                mid = 0.5 * (lo + hi)
                wm = weights_for_alpha(matrix, method, mid, epsilon).w
                if wm[i] > wm[j]:
                    lo = mid
                else:
                    hi = mid
            crossings.append(Crossing(matrix.teams[i], matrix.teams[j],
                                      lo, hi))
    crossings.sort(key=lambda c: (c.alpha_low, c.overtaken, c.overtaking))
    return CrossingReport(method.tag, grid[0], grid[-1], tuple(crossings))


def crossing_report_to_json(report: CrossingReport) -> str:
    doc = {
        "method": report.method,
        "alpha_min": report.alpha_min,
        "alpha_max": report.alpha_max,
        "scale_invariant": report.is_empty(),
        "crossings": [
            {
                "overtaken": c.overtaken,
                "overtaking": c.overtaking,
                "alpha_low": c.alpha_low,
                "alpha_high": c.alpha_high,
            }
            for c in report.crossings
        ],
    }
    return json.dumps(doc, indent=2) + "\n"
