"""Multiplicative pairwise comparison matrices built from goal counts.

The entry for a team pair is the goal ratio raised to a configurable
inequality exponent ``alpha``; an optional smoothing constant ``epsilon`` is
added to both goal counts to keep zero entries usable and to soften extreme
ratios.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

from .errors import DataError, ZeroComparisonError
from .goals import GoalsMatrix

RECIPROCITY_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class ComparisonMatrix:
    """Positive reciprocal matrix with unit diagonal.

    ``alpha`` and ``epsilon`` record how the matrix was constructed; matrices
    assembled by hand must still satisfy reciprocity within 1e-12 relative.
    """

    teams: tuple[str, ...]
    a: np.ndarray
    alpha: float
    epsilon: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "teams", tuple(self.teams))
        a = np.array(self.a, dtype=np.float64)
        object.__setattr__(self, "a", a)
        n = len(self.teams)
        if a.shape != (n, n):
            raise DataError(f"comparison matrix is {a.shape}, expected "
                            f"({n}, {n})")
        if self.alpha < 0:
            raise DataError("alpha must be non-negative")
        if self.epsilon < 0:
            raise DataError("epsilon must be non-negative")
        if not np.all(np.isfinite(a)) or a.min() <= 0:
            raise DataError("comparison matrix entries must be positive and "
                            "finite")
        if np.any(np.abs(np.diagonal(a) - 1.0) > RECIPROCITY_RTOL):
            raise DataError("comparison matrix diagonal must be 1")
        residual = np.abs(a * a.T - 1.0)
        if residual.max() > RECIPROCITY_RTOL:
            i, j = np.unravel_index(np.argmax(residual), residual.shape)
            raise DataError(
                f"reciprocity violated for ({self.teams[i]!r}, "
                f"{self.teams[j]!r}): a_ij*a_ji deviates from 1 by "
                f"{residual[i, j]:.3e}")

    @property
    def n(self) -> int:
        return len(self.teams)


def ratio(g_ij: float, g_ji: float, alpha: float, epsilon: float = 0.0) -> float:
    """Smoothed goal ratio raised to the inequality exponent.

    Computes ``((g_ij + epsilon) / (g_ji + epsilon)) ** alpha``. Taking the
    power of the exact quotient keeps alpha = 1 entries exact (66/3 == 22.0)
    and is stable for the exponents used in practice.
    """
    if alpha < 0:
        raise DataError("alpha must be non-negative")
    if epsilon < 0:
        raise DataError("epsilon must be non-negative")
    num = g_ij + epsilon
    den = g_ji + epsilon
    if num <= 0 or den <= 0:
        raise ZeroComparisonError(
            "goal ratio is undefined: a zero goal count with epsilon = 0; "
            "pass epsilon > 0 to smooth zero entries")
    return (num / den) ** alpha


def build_pcm(matrix: GoalsMatrix, alpha: float,
              epsilon: float = 0.0) -> ComparisonMatrix:
    """Build the comparison matrix from goals; reciprocal entries are stored
    as exact reciprocals of the upper triangle."""
    n = matrix.n
    g = matrix.g
    a = np.ones((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(i + 1, n):
            try:
                value = ratio(float(g[i, j]), float(g[j, i]), alpha, epsilon)
            except ZeroComparisonError:
                zero_side = matrix.teams[j] if g[j, i] == 0 else matrix.teams[i]
                raise ZeroComparisonError(
                    f"team pair ({matrix.teams[i]!r}, {matrix.teams[j]!r}): "
                    f"{zero_side!r} has zero goals and epsilon = 0; pass "
                    "epsilon > 0",
                    pair=(matrix.teams[i], matrix.teams[j])) from None
            a[i, j] = value
            a[j, i] = 1.0 / value
    return ComparisonMatrix(matrix.teams, a, alpha=alpha, epsilon=epsilon)


def power_transform(matrix: ComparisonMatrix, alpha: float) -> ComparisonMatrix:
    """Entrywise power of a comparison matrix; reciprocity is preserved by
    construction and the alpha provenance multiplies."""
    if alpha <= 0:
        raise DataError("power transform exponent must be positive")
    n = matrix.n
    a = np.ones((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(i + 1, n):
            value = matrix.a[i, j] ** alpha
            a[i, j] = value
            a[j, i] = 1.0 / value
    return ComparisonMatrix(matrix.teams, a, alpha=matrix.alpha * alpha,
                            epsilon=matrix.epsilon)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def pcm_to_csv(matrix: ComparisonMatrix) -> str:
    """Square CSV with full-precision real cells (diagonal included)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["", *matrix.teams])
    for i, team in enumerate(matrix.teams):
        writer.writerow([team, *(_fmt(matrix.a[i, j])
                                 for j in range(matrix.n))])
    return buf.getvalue()


def pcm_to_json(matrix: ComparisonMatrix) -> str:
    doc = {
        "teams": list(matrix.teams),
        "alpha": matrix.alpha,
        "epsilon": matrix.epsilon,
        "values": [[float(x) for x in row] for row in matrix.a],
    }
    return json.dumps(doc, indent=2) + "\n"
