"""Shared generators and independent oracles for the test suite."""

from __future__ import annotations

import math

import numpy as np

from gridshare import CarResult, ComparisonMatrix, GoalsMatrix, Race, SeasonResults

TEAM_POOL = [f"T{k:02d}" for k in range(1, 27)]


def random_reciprocal(rng: np.random.Generator, n: int,
                      log_spread: float = math.log(9.0)) -> ComparisonMatrix:
    """Random positive reciprocal matrix with entries in [1/9, 9]."""
    a = np.ones((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            v = math.exp(rng.uniform(-log_spread, log_spread))
            a[i, j] = v
            a[j, i] = 1.0 / v
    return ComparisonMatrix(tuple(TEAM_POOL[:n]), a, alpha=1.0)


def consistent_matrix(values) -> ComparisonMatrix:
    """Fully consistent matrix a[i][j] = v_i / v_j."""
    v = np.asarray(values, dtype=float)
    n = len(v)
    a = v[:, None] / v[None, :]
    return ComparisonMatrix(tuple(TEAM_POOL[:n]), a, alpha=1.0)


def inject_row_dominance(matrix: ComparisonMatrix, i: int, j: int,
                         rng: np.random.Generator) -> ComparisonMatrix:
    """Force row i to entrywise dominate row j, keeping reciprocity."""
    a = matrix.a.copy()
    n = matrix.n
    for k in range(n):
        if k in (i, j):
            continue
        if a[i, k] < a[j, k]:
            a[i, k] = a[j, k] * (1.0 + rng.uniform(0.0, 0.5))
            a[k, i] = 1.0 / a[i, k]
    if a[i, j] < 1.0:
        a[i, j] = 1.0 + rng.uniform(0.0, 0.5)
        a[j, i] = 1.0 / a[i, j]
    return ComparisonMatrix(matrix.teams, a, alpha=matrix.alpha,
                            epsilon=matrix.epsilon)


def perron_by_squaring(matrix: ComparisonMatrix,
                       squarings: int = 40) -> np.ndarray:
    """Perron vector oracle: repeated matrix squaring of A applied to ones.

    Independent of power iteration; renormalizes between squarings to avoid
    overflow (scaling does not move the dominant direction).
    """
    b = np.array(matrix.a, dtype=float)
    for _ in range(squarings):
        b = b @ b
        b /= b.max()
    w = b @ np.ones(matrix.n)
    return w / w.sum()


def random_positive_goals(rng: np.random.Generator, n: int,
                          high: int = 80) -> GoalsMatrix:
    """Goals matrix with strictly positive off-diagonal entries."""
    g = rng.integers(1, high, size=(n, n))
    np.fill_diagonal(g, 0)
    return GoalsMatrix(tuple(TEAM_POOL[:n]), g, races_counted=None)


def random_season(rng: np.random.Generator, n_teams: int = 6,
                  n_races: int = 5, dnf_rate: float = 0.2,
                  season_id: str = "rand") -> SeasonResults:
    """Random season: every team enters every race with two cars; a car
    either finishes with a rank or retires unclassified."""
    teams = TEAM_POOL[:n_teams]
    races = []
    for r in range(n_races):
        cars = [(team, idx) for team in teams for idx in (1, 2)]
        finished = [car for car in cars if rng.random() >= dnf_rate]
        if len(finished) < 2:
            finished = cars[:2]
        order = list(finished)
        rng.shuffle(order)
        results = []
        ranks = {car: pos + 1 for pos, car in enumerate(order)}
        for team, idx in cars:
            if (team, idx) in ranks:
                results.append(CarResult(team, idx, ranks[(team, idx)], True))
            else:
                results.append(CarResult(
                    team, idx, None, False,
                    laps_fraction=float(round(rng.uniform(0.0, 0.89), 3))))
        races.append(Race(f"race-{r + 1}", r + 1, tuple(results)))
    return SeasonResults(season_id, tuple(teams), tuple(races))
