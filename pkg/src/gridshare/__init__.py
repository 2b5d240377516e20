"""Revenue allocation for racing championships from pairwise comparison of
season results.

The pipeline: race results aggregate into a goals matrix; goal ratios raised
to an inequality exponent form a positive reciprocal comparison matrix; the
eigenvector or row-geometric-mean method turns that into team weights; the
weights drive allocations, concentration measures, rank-reversal diagnostics,
and exponent sweeps. Classic points-table standings are included for
comparison.
"""

from .alloc import (AllocationReport, IndifferenceResult, SweepResult,
                    allocate, alpha_grid, indifferent_alpha, share_curve,
                    sweep)
from .errors import (ConvergenceError, DataError, GridshareError,
                     ZeroComparisonError)
from .goals import GoalsMatrix, goals_matrix, goals_to_csv, load_goals, race_goals
from .metrics import (Crossing, CrossingReport, Ranking, hhi, hhi_star,
                      ranking_of, scale_invariance_scan)
from .pcm import ComparisonMatrix, build_pcm, power_transform, ratio
from .scoring import (PointsSystem, Standings, builtin_system,
                      builtin_systems, load_points_system, score_season)
from .season import (CarResult, Race, SeasonResults, derive_classified,
                     parse_season, serialize_season)
from .weights import (EM, RGM, WeightVector, WeightingMethod,
                      eigenvector_weights, llsm_objective, method_from_tag,
                      row_geometric_mean_weights, weights_for_alpha)

__version__ = "0.1.0"

__all__ = [
    "AllocationReport", "CarResult", "ComparisonMatrix", "ConvergenceError",
    "Crossing", "CrossingReport", "DataError", "EM", "GoalsMatrix",
    "GridshareError", "IndifferenceResult", "PointsSystem", "RGM", "Race",
    "Ranking", "SeasonResults", "Standings", "SweepResult", "WeightVector",
    "WeightingMethod", "ZeroComparisonError", "allocate", "alpha_grid",
    "build_pcm", "builtin_system", "builtin_systems", "derive_classified",
    "eigenvector_weights", "goals_matrix", "goals_to_csv", "hhi", "hhi_star",
    "indifferent_alpha", "llsm_objective", "load_goals", "load_points_system",
    "method_from_tag", "parse_season", "power_transform", "race_goals",
    "ranking_of", "ratio", "row_geometric_mean_weights",
    "scale_invariance_scan", "score_season", "serialize_season",
    "share_curve", "sweep", "weights_for_alpha",
]
