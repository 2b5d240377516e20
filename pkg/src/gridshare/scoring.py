"""Championship standings under configurable points systems.

Points tables are data: four historical systems ship built in, arbitrary ones
load from JSON. Equal-points teams are separated by countback, i.e. by the
number of first places, then second places, and so on through every finishing
position.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Mapping

from .errors import DataError
from .season import SeasonResults, validate_season


@dataclass(frozen=True)
class PointsSystem:
    """Points per finishing position plus optional per-race multipliers."""

    name: str
    points: tuple[int, ...]
    multipliers: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(int(p) for p in self.points))
        object.__setattr__(self, "multipliers", dict(self.multipliers))
        if not self.points:
            raise DataError(f"points system {self.name!r} has no points")
        if any(p < 0 for p in self.points):
            raise DataError(f"points system {self.name!r} has negative points")
        if any(a < b for a, b in zip(self.points, self.points[1:])):
            raise DataError(f"points system {self.name!r} must be "
                            "non-increasing in position")
        for race_id, mult in self.multipliers.items():
            if int(mult) < 1:
                raise DataError(f"points system {self.name!r}: multiplier "
                                f"for race {race_id!r} must be positive")

    def points_for(self, position: int) -> int:
        """Points for a finishing position; positions beyond the table
        score zero."""
        if position < 1:
            raise DataError(f"position {position} is not positive")
        if position <= len(self.points):
            return self.points[position - 1]
        return 0

    def multiplier_for(self, race_id: str) -> int:
        return int(self.multipliers.get(race_id, 1))


def builtin_systems(double_points_race_id: str = "R19") -> list[PointsSystem]:
    """The four historical points tables plus the 2014 official variant.

    The 2014 variant doubles the points of one designated race; pass the race
    id used by your data (the bundled season fixture calls its finale "R19").
    """
    modern = (25, 18, 15, 12, 10, 8, 6, 4, 2, 1)
    return [
        PointsSystem("1961-1990", (9, 6, 4, 3, 2, 1)),
        PointsSystem("1991-2002", (10, 6, 4, 3, 2, 1)),
        PointsSystem("2003-2009", (10, 8, 6, 5, 4, 3, 2, 1)),
        PointsSystem("2010-", modern),
        PointsSystem("2014-official", modern,
                     multipliers={double_points_race_id: 2}),
    ]


def builtin_system(name: str,
                   double_points_race_id: str = "R19") -> PointsSystem:
    for system in builtin_systems(double_points_race_id):
        if system.name == name:
            return system
    known = ", ".join(s.name for s in builtin_systems())
    raise DataError(f"unknown points system {name!r}; built in: {known}")


@dataclass(frozen=True)
class StandingsRow:
    team_id: str
    points: int
    rank: int
    tied: bool = False


@dataclass(frozen=True)
class Standings:
    system: str
    rows: tuple[StandingsRow, ...]

    def points_of(self, team_id: str) -> int:
        for row in self.rows:
            if row.team_id == team_id:
                return row.points
        raise DataError(f"unknown team {team_id!r}")

    def rank_of(self, team_id: str) -> int:
        for row in self.rows:
            if row.team_id == team_id:
                return row.rank
        raise DataError(f"unknown team {team_id!r}")

    def ranking(self) -> tuple[str, ...]:
        return tuple(row.team_id for row in self.rows)


def score_season(season: SeasonResults, system: PointsSystem) -> Standings:
    """Standings under one points system, ties broken by countback.

    Only classified cars with a finish rank score. A team's countback key is
    its per-position finish counts compared best position first; teams equal
    on points and on every count stay in input team order and are flagged
    tied.
    """
    validate_season(season)
    points: dict[str, int] = {team: 0 for team in season.teams}
    max_rank = 0
    counts: dict[str, dict[int, int]] = {team: {} for team in season.teams}
    for race in season.races:
        mult = system.multiplier_for(race.race_id)
        for car in race.results:
            if not car.classified or car.finish_rank is None:
                continue
            points[car.team_id] += system.points_for(car.finish_rank) * mult
            team_counts = counts[car.team_id]
            team_counts[car.finish_rank] = team_counts.get(car.finish_rank, 0) + 1
            max_rank = max(max_rank, car.finish_rank)

    def countback_key(team: str) -> tuple[int, ...]:
        team_counts = counts[team]
        return tuple(-team_counts.get(pos, 0)
                     for pos in range(1, max_rank + 1))

    team_order = {team: k for k, team in enumerate(season.teams)}
    ordered = sorted(season.teams,
                     key=lambda t: (-points[t], countback_key(t),
                                    team_order[t]))
    rows = []
    for rank, team in enumerate(ordered, start=1):
        key = (points[team], countback_key(team))
        tied = False
        if rank >= 2:
            prev = ordered[rank - 2]
            tied = key == (points[prev], countback_key(prev))
        if rank < len(ordered):
            nxt = ordered[rank]
            tied = tied or key == (points[nxt], countback_key(nxt))
        rows.append(StandingsRow(team, points[team], rank, tied))
    return Standings(system.name, tuple(rows))


def load_points_system(source: str | bytes) -> PointsSystem:
    """Load a points system from JSON: ``{"name", "points", "multipliers"}``."""
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise DataError(f"invalid points system JSON: {exc}") from None
    if not isinstance(doc, dict) or "name" not in doc or "points" not in doc:
        raise DataError("points system JSON needs 'name' and 'points'")
    return PointsSystem(str(doc["name"]), tuple(doc["points"]),
                        {str(k): int(v)
                         for k, v in doc.get("multipliers", {}).items()})


def points_system_to_json(system: PointsSystem) -> str:
    doc = {"name": system.name, "points": list(system.points),
           "multipliers": dict(system.multipliers)}
    return json.dumps(doc, indent=2) + "\n"


def standings_to_csv(standings: Standings) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["team", "points", "rank", "tie_flag"])
    for row in standings.rows:
        writer.writerow([row.team_id, row.points, row.rank,
                         str(row.tied).lower()])
    return buf.getvalue()


def standings_to_json(standings: Standings) -> str:
    doc = {
        "system": standings.system,
        "standings": [
            {"team": row.team_id, "points": row.points, "rank": row.rank,
             "tied": row.tied}
            for row in standings.rows
        ],
    }
    return json.dumps(doc, indent=2) + "\n"
