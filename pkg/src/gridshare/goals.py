"""Season-aggregated head-to-head win counts between teams.

Every cross-team pair of cars in a race is compared: two finishers compare by
finish rank, a finisher beats a non-finisher, and two non-finishers are
incomparable. Each win is one goal; goals are summed over the season with
every race weighted equally.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .season import Race, SeasonResults, validate_season


@dataclass(frozen=True, eq=False)
class GoalsMatrix:
    """Integer matrix of season goal counts; ``g[i][j]`` is the number of
    times a car of team ``i`` beat a car of team ``j``.

    ``races_counted`` is None for matrices loaded from goals-level files,
    which disables the per-race comparison-count bound.
    """

    teams: tuple[str, ...]
    g: np.ndarray
    races_counted: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "teams", tuple(self.teams))
        g = np.asarray(self.g)
        if not np.issubdtype(g.dtype, np.integer):
            if not np.all(g == np.floor(g)):
                raise DataError("goals must be integers")
            g = g.astype(np.int64)
        g = np.array(g, dtype=np.int64)
        object.__setattr__(self, "g", g)
        n = len(self.teams)
        if g.shape != (n, n):
            raise DataError(f"goals matrix is {g.shape}, expected ({n}, {n})")
        if n < 2:
            raise DataError("a goals matrix needs at least 2 teams")
        if len(set(self.teams)) != n:
            raise DataError("duplicate team identifiers")
        if np.any(np.diagonal(g) != 0):
            raise DataError("goals matrix diagonal must be zero")
        if g.min() < 0:
            raise DataError("goals must be non-negative")
        if self.races_counted is not None:
            bound = 4 * self.races_counted
            total = g + g.T
            if total.max() > bound:
                i, j = np.unravel_index(np.argmax(total), total.shape)
                raise DataError(
                    f"teams {self.teams[i]!r} and {self.teams[j]!r} have "
                    f"{total[i, j]} comparisons, more than 4 per race over "
                    f"{self.races_counted} races")

    @property
    def n(self) -> int:
        return len(self.teams)

    def index_of(self, team_id: str) -> int:
        try:
            return self.teams.index(team_id)
        except ValueError:
            raise DataError(f"unknown team {team_id!r}") from None


def race_goals(race: Race, teams: tuple[str, ...]) -> np.ndarray:
    """Goal counts for a single validated race, indexed by ``teams``."""
    index = {t: k for k, t in enumerate(teams)}
    g = np.zeros((len(teams), len(teams)), dtype=np.int64)
    results = race.results
    for a in results:
        ia = index[a.team_id]
        for b in results:
            if a.team_id == b.team_id:
                continue
            if a.classified and b.classified:
                # ranks are validated present and distinct for finishers
                if a.finish_rank < b.finish_rank:
                    g[ia, index[b.team_id]] += 1
            elif a.classified:
                g[ia, index[b.team_id]] += 1
    return g


def goals_matrix(season: SeasonResults) -> GoalsMatrix:
    """Sum of per-race goals over the whole season, one weight per race."""
    validate_season(season)
    total = np.zeros((len(season.teams), len(season.teams)), dtype=np.int64)
    for race in season.races:
        total += race_goals(race, season.teams)
    return GoalsMatrix(season.teams, total, races_counted=len(season.races))


def load_goals(source: str | bytes) -> GoalsMatrix:
    """Load a goals matrix from square CSV (team header row and column,
    integer cells, empty diagonal)."""
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    rows = list(csv.reader(io.StringIO(source)))
    rows = [row for row in rows if row]
    if not rows:
        raise DataError("empty goals CSV")
    header = rows[0]
    if header and header[0].strip():
        raise DataError("goals CSV must start with an empty corner cell")
    teams = tuple(cell.strip() for cell in header[1:])
    n = len(teams)
    if n < 2:
        raise DataError("goals CSV needs at least 2 teams")
    body = rows[1:]
    if len(body) != n:
        raise DataError(f"non-square goals CSV: {n} columns but "
                        f"{len(body)} rows")
    g = np.zeros((n, n), dtype=np.int64)
    for i, row in enumerate(body):
        if len(row) != n + 1:
            raise DataError(f"non-square goals CSV: row {i + 2} has "
                            f"{len(row) - 1} cells, expected {n}")
        label = row[0].strip()
        if label != teams[i]:
            raise DataError(f"row label {label!r} does not match column "
                            f"{teams[i]!r}")
        for j, cell in enumerate(cell.strip() for cell in row[1:]):
            if i == j:
                if cell:
                    raise DataError(f"nonempty diagonal at team {label!r}")
                continue
            if not cell:
                raise DataError(f"missing goals cell ({teams[i]!r}, "
                                f"{teams[j]!r})")
            try:
                value = int(cell)
            except ValueError:
                raise DataError(f"cell ({teams[i]!r}, {teams[j]!r}): "
                                f"{cell!r} is not an integer") from None
            if value < 0:
                raise DataError(f"cell ({teams[i]!r}, {teams[j]!r}): "
                                f"negative goals {value}")
            g[i, j] = value
    return GoalsMatrix(teams, g, races_counted=None)


def goals_to_csv(matrix: GoalsMatrix) -> str:
    """Emit the square goals CSV accepted by :func:`load_goals`."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["", *matrix.teams])
    for i, team in enumerate(matrix.teams):
        cells = ["" if i == j else str(int(matrix.g[i, j]))
                 for j in range(matrix.n)]
        writer.writerow([team, *cells])
    return buf.getvalue()
