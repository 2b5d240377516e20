"""Bundled datasets.

``goals_2014.csv`` holds the 2014 season's head-to-head goal counts for the
eleven constructors. ``season_2014_synthetic.csv`` is a constructed race-level
season: its finishing orders and retirements are synthetic, chosen so that
aggregating it reproduces the bundled goals matrix exactly. It is not the
historical race record, so official points standings cannot be derived
from it.
"""

from __future__ import annotations

from importlib import resources

from ..goals import GoalsMatrix, load_goals
from ..season import SeasonResults, parse_season


def _read(name: str) -> str:
    return (resources.files(__package__) / name).read_text(encoding="utf-8")


def goals_2014() -> GoalsMatrix:
    """Goal counts of the 2014 season (11 teams, 19 races aggregated)."""
    matrix = load_goals(_read("goals_2014.csv"))
    return GoalsMatrix(matrix.teams, matrix.g, races_counted=19)


def synthetic_season_2014() -> SeasonResults:
    """Synthetic 19-race season whose aggregation equals :func:`goals_2014`."""
    return parse_season(_read("season_2014_synthetic.csv"), season_id="2014")


def goals_2014_csv() -> str:
    return _read("goals_2014.csv")


def synthetic_season_2014_csv() -> str:
    return _read("season_2014_synthetic.csv")
