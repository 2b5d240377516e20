"""Monetary allocation, share curves, exponent sweeps, and the inverse
problem of finding the exponent at which a team's model share matches a
given target.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import DataError
from .goals import GoalsMatrix
from .metrics import (CrossingReport, Ranking, hhi_star, ranking_of,
                      scale_invariance_scan)
from .weights import WeightVector, WeightingMethod, weights_for_alpha

DEFAULT_ALPHA_MAX = 3.0
DEFAULT_GRID_STEP = 0.02
TIE_GUARD = 1e-12


def alpha_grid(start: float = 0.0, stop: float = DEFAULT_ALPHA_MAX,
               step: float = DEFAULT_GRID_STEP) -> tuple[float, ...]:
    """Evenly spaced exponent grid with endpoints snapped to clean values."""
    if step <= 0:
        raise DataError("grid step must be positive")
    if stop < start or start < 0:
        raise DataError("grid range must satisfy 0 <= start <= stop")
    count = int(round((stop - start) / step))
    values = [round(start + k * step, 10) for k in range(count + 1)]
    if values[-1] > stop + 1e-12:
        values.pop()
    return tuple(values)


@dataclass(frozen=True)
class TeamAllocation:
    team_id: str
    share: float
    amount: float
    units: int


@dataclass(frozen=True)
class AllocationReport:
    """Money split for one weight vector; unit counts always sum to the pot's
    unit count, so the pot is conserved exactly."""

    pot: float
    rounding_unit: float
    method: str
    alpha: float | None
    epsilon: float | None
    entries: tuple[TeamAllocation, ...]

    def total_units(self) -> int:
        return sum(entry.units for entry in self.entries)


def allocate(weights: WeightVector, pot: float, rounding_unit: float = 0.01,
             alpha: float | None = None,
             epsilon: float | None = None) -> AllocationReport:
    """Split a pot by weights, rounding to a money unit by largest remainder.

    Each team gets ``floor(share * pot / unit)`` units; leftover units go to
    the largest fractional remainders (earlier team wins a remainder tie), so
    the amounts always add up to the pot exactly.
    """
    if pot <= 0:
        raise DataError("pot must be positive")
    if rounding_unit <= 0:
        raise DataError("rounding unit must be positive")
    total_units = pot / rounding_unit
    if abs(total_units - round(total_units)) > 1e-9 * max(1.0, abs(total_units)):
        raise DataError(f"pot {pot} is not a positive multiple of the "
                        f"rounding unit {rounding_unit}")
    total = int(round(total_units))
    if total < 1:
        raise DataError("pot is smaller than one rounding unit")

    raw = weights.w * total
    base = np.floor(raw).astype(np.int64)
    leftover = total - int(base.sum())
    remainders = raw - base
    by_remainder = sorted(range(weights.n),
                          key=lambda i: (-remainders[i], i))
    units = base.copy()
    for i in by_remainder[:leftover]:
        units[i] += 1
    entries = tuple(
        TeamAllocation(team, float(weights.w[k]),
                       float(units[k] * rounding_unit), int(units[k]))
        for k, team in enumerate(weights.teams))
    return AllocationReport(pot=float(pot), rounding_unit=float(rounding_unit),
                            method=weights.method, alpha=alpha,
                            epsilon=epsilon, entries=entries)


def share_curve(matrix: GoalsMatrix, team_id: str, method: WeightingMethod,
                alphas: Sequence[float],
                epsilon: float = 0.0) -> list[tuple[float, float]]:
    """A team's share at every grid exponent, with exact uniform shares at
    alpha = 0."""
    index = matrix.index_of(team_id)
    curve = []
    for alpha in alphas:
        w = weights_for_alpha(matrix, method, float(alpha), epsilon)
        curve.append((float(alpha), float(w.w[index])))
    return curve


@dataclass(frozen=True)
class IndifferenceRoot:
    alpha: float
    residual: float


@dataclass(frozen=True)
class IndifferenceResult:
    team_id: str
    target_share: float
    method: str
    alpha_min: float
    alpha_max: float
    roots: tuple[IndifferenceRoot, ...]
    no_solution: bool


def indifferent_alpha(matrix: GoalsMatrix, team_id: str, target_share: float,
                      method: WeightingMethod,
                      scan_range: tuple[float, float] = (0.0, DEFAULT_ALPHA_MAX),
                      grid_step: float = DEFAULT_GRID_STEP,
                      tol: float = 1e-9,
                      epsilon: float = 0.0) -> IndifferenceResult:
    """Find every exponent at which the team's share equals the target.

    Args:
        matrix: goal counts.
        team_id: team whose share curve is probed.
        target_share: share to match, in (0, 1).
        method: weight derivation.
        scan_range: inclusive exponent range; 0 matches only a uniform target.
        grid_step: spacing of the sign-change scan.
        tol: maximum |share - target| accepted for a root.
        epsilon: smoothing constant for matrix construction.

    Returns:
        All roots in ascending order, each with its achieved residual, or
        ``no_solution`` when the curve never attains the target. The curve
        can be non-monotonic, so multiple roots are possible; the first one
        is the smallest.
    """
    if not 0.0 < target_share < 1.0:
        raise DataError("target share must lie strictly between 0 and 1")
    if tol <= 0:
        raise DataError("tolerance must be positive")
    index = matrix.index_of(team_id)
    lo, hi = float(scan_range[0]), float(scan_range[1])
    grid = alpha_grid(lo, hi, grid_step)

    def offset(alpha: float) -> float:
        w = weights_for_alpha(matrix, method, alpha, epsilon)
        return float(w.w[index]) - target_share

    roots: list[IndifferenceRoot] = []

    def add_root(alpha: float, residual: float) -> None:
        for known in roots:
            if abs(known.alpha - alpha) <= grid_step * 1e-6:
                return
        roots.append(IndifferenceRoot(alpha, residual))

    values = [offset(a) for a in grid]
    for alpha, value in zip(grid, values):
        if alpha == 0.0:
            # uniform shares: alpha 0 is a root only for a uniform target
            if abs(value) < tol:
                add_root(0.0, abs(value))
            continue
        if abs(value) < tol:
            add_root(alpha, abs(value))
    for k in range(len(grid) - 1):
        f_lo, f_hi = values[k], values[k + 1]
        if f_lo == 0.0 or f_hi == 0.0 or f_lo * f_hi > 0:
            continue
        a_lo, a_hi = grid[k], grid[k + 1]
        mid = 0.5 * (a_lo + a_hi)
        f_mid = offset(mid)
        for _ in range(200):
            if abs(f_mid) < tol:
                break
            if (f_lo < 0) == (f_mid < 0):
                a_lo, f_lo = mid, f_mid
            else:
                a_hi, f_hi = mid, f_mid
            mid = 0.5 * (a_lo + a_hi)
            f_mid = offset(mid)
        add_root(mid, abs(f_mid))

    roots.sort(key=lambda r: r.alpha)
    return IndifferenceResult(team_id=team_id, target_share=target_share,
                              method=method.tag, alpha_min=lo, alpha_max=hi,
                              roots=tuple(roots), no_solution=not roots)


@dataclass(frozen=True, eq=False)
class SweepRecord:
    alpha: float
    weights: Mapping[str, WeightVector]
    hhi_star: Mapping[str, float]
    ranking: Mapping[str, Ranking]


@dataclass(frozen=True, eq=False)
class SweepResult:
    teams: tuple[str, ...]
    methods: tuple[str, ...]
    alphas: tuple[float, ...]
    epsilon: float
    records: tuple[SweepRecord, ...]
    crossings: Mapping[str, CrossingReport]
    interior_maxima: Mapping[str, tuple[str, ...]]

    def record_at(self, alpha: float) -> SweepRecord:
        for record in self.records:
            if record.alpha == alpha:
                return record
        raise DataError(f"alpha {alpha} is not on the sweep grid")


def sweep(matrix: GoalsMatrix, methods: Sequence[WeightingMethod],
          alphas: Sequence[float], epsilon: float = 0.0,
          refine_tol: float = 1e-6) -> SweepResult:
    """Evaluate weights, concentration, and rankings over an exponent grid.

    Also runs the rank-reversal scan per method on the same grid and flags
    teams whose share peaks strictly inside the grid (a mid-table share can
    be maximal at an interior exponent).
    """
    if not methods:
        raise DataError("at least one weighting method is required")
    grid = tuple(float(a) for a in alphas)
    records = []
    per_method_weights: dict[str, list[WeightVector]] = {
        m.tag: [] for m in methods}
    for alpha in grid:
        weights = {}
        stars = {}
        rankings = {}
        for method in methods:
            wv = weights_for_alpha(matrix, method, alpha, epsilon)
            weights[method.tag] = wv
            stars[method.tag] = hhi_star(wv)
            rankings[method.tag] = ranking_of(wv)
            per_method_weights[method.tag].append(wv)
        records.append(SweepRecord(alpha, weights, stars, rankings))

    crossings = {
        method.tag: scale_invariance_scan(matrix, method, grid,
                                          refine_tol=refine_tol,
                                          epsilon=epsilon)
        for method in methods}

    interior: dict[str, tuple[str, ...]] = {}
    for method in methods:
        shares = np.array([wv.w for wv in per_method_weights[method.tag]])
        flagged = []
        for k, team in enumerate(matrix.teams):
            curve = shares[:, k]
            peak = int(np.argmax(curve))
            if (0 < peak < len(grid) - 1
                    and curve[peak] > curve[0] + TIE_GUARD
                    and curve[peak] > curve[-1] + TIE_GUARD):
                flagged.append(team)
        interior[method.tag] = tuple(flagged)

    return SweepResult(teams=matrix.teams,
                       methods=tuple(m.tag for m in methods),
                       alphas=grid, epsilon=epsilon, records=tuple(records),
                       crossings=crossings, interior_maxima=interior)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def sweep_to_tsv(result: SweepResult, method_tag: str) -> str:
    """Plot-ready table for one method: alpha, per-team share, hhi_star."""
    if method_tag not in result.methods:
        raise DataError(f"method {method_tag!r} was not swept")
    lines = ["\t".join(["alpha", *result.teams, "hhi_star"])]
    for record in result.records:
        wv = record.weights[method_tag]
        cells = [_fmt(record.alpha)]
        cells.extend(_fmt(x) for x in wv.w)
        cells.append(_fmt(record.hhi_star[method_tag]))
        lines.append("\t".join(cells))
    return "\n".join(lines) + "\n"


def sweep_to_json(result: SweepResult) -> str:
    doc = {
        "teams": list(result.teams),
        "methods": list(result.methods),
        "epsilon": result.epsilon,
        "records": [
            {
                "alpha": record.alpha,
                "weights": {tag: [float(x) for x in record.weights[tag].w]
                            for tag in result.methods},
                "hhi_star": {tag: record.hhi_star[tag]
                             for tag in result.methods},
                "ranking": {tag: list(record.ranking[tag].teams)
                            for tag in result.methods},
            }
            for record in result.records
        ],
        "crossings": {
            tag: [
                {"overtaken": c.overtaken, "overtaking": c.overtaking,
                 "alpha_low": c.alpha_low, "alpha_high": c.alpha_high}
                for c in result.crossings[tag].crossings
            ]
            for tag in result.methods
        },
        "interior_maxima": {tag: list(result.interior_maxima[tag])
                            for tag in result.methods},
    }
    return json.dumps(doc, indent=2) + "\n"


def allocation_to_json(report: AllocationReport) -> str:
    doc = {
        "pot": report.pot,
        "rounding_unit": report.rounding_unit,
        "method": report.method,
    }
    if report.alpha is not None:
        doc["alpha"] = report.alpha
    if report.epsilon is not None:
        doc["epsilon"] = report.epsilon
    doc["allocations"] = [
        {"team": e.team_id, "share": e.share, "amount": e.amount,
         "units": e.units}
        for e in report.entries
    ]
    return json.dumps(doc, indent=2) + "\n"


def indifference_to_json(result: IndifferenceResult) -> str:
    doc = {
        "team": result.team_id,
        "target_share": result.target_share,
        "method": result.method,
        "alpha_min": result.alpha_min,
        "alpha_max": result.alpha_max,
        "no_solution": result.no_solution,
        "roots": [
            {"alpha": root.alpha, "residual": root.residual,
             "smallest": k == 0}
            for k, root in enumerate(result.roots)
        ],
    }
    return json.dumps(doc, indent=2) + "\n"
