"""Season race-result ingestion: the immutable data model plus CSV parsing,
validation, and serialization.

The season CSV is flat, one row per car per race:

    race_id,ordinal,team_id,car_index,finish_rank,classified,laps_fraction

``finish_rank``, ``classified`` and ``laps_fraction`` may be empty. An
optional preamble line ``# teams: A,B,C`` pins the team order; otherwise
teams are ordered by first appearance.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace
from typing import IO

from .errors import DataError

SEASON_CSV_COLUMNS = ("race_id", "ordinal", "team_id", "car_index",
                      "finish_rank", "classified", "laps_fraction")

#: A car counts as a finisher when it completes strictly more than this
#: fraction of the race distance (used only when no explicit flag is given).
CLASSIFICATION_THRESHOLD = 0.9


@dataclass(frozen=True)
class CarResult:
    """Outcome of one car in one race.

    ``finish_rank`` is the car's overall finishing position and may be absent
    for cars that hold no comparable position. ``classified`` says whether the
    car counts as a finisher; when it is None it can be derived from
    ``laps_fraction`` via :func:`derive_classified`.
    """

    team_id: str
    car_index: int
    finish_rank: int | None = None
    classified: bool | None = None
    laps_fraction: float | None = None


@dataclass(frozen=True)
class Race:
    race_id: str
    ordinal: int
    results: tuple[CarResult, ...]

    def entered_teams(self) -> tuple[str, ...]:
        """Teams fielding cars in this race, in row order."""
        seen: dict[str, None] = {}
        for car in self.results:
            seen.setdefault(car.team_id, None)
        return tuple(seen)


@dataclass(frozen=True)
class SeasonResults:
    season_id: str
    teams: tuple[str, ...]
    races: tuple[Race, ...]


def derive_classified(result: CarResult,
                      threshold: float = CLASSIFICATION_THRESHOLD) -> CarResult:
    """Fill in the classified flag from the completed race fraction.

    An explicit flag is never overridden. A car is classified only when it
    completed strictly more than ``threshold`` of the distance.
    """
    if result.classified is not None:
        return result
    if result.laps_fraction is None:
        raise DataError(
            f"car {result.car_index} of team {result.team_id!r} has neither "
            "a classified flag nor a laps fraction")
    return replace(result, classified=result.laps_fraction > threshold)


def validate_race(race: Race) -> None:
    """Check per-race invariants; raises DataError naming the offender."""
    cars_per_team: dict[str, list[int]] = {}
    ranks: dict[int, str] = {}
    for car in race.results:
        cars_per_team.setdefault(car.team_id, []).append(car.car_index)
        if car.car_index not in (1, 2):
            raise DataError(
                f"race {race.race_id!r}: team {car.team_id!r} has car index "
                f"{car.car_index}, expected 1 or 2")
        if car.classified is None:
            raise DataError(
                f"race {race.race_id!r}: team {car.team_id!r} car "
                f"{car.car_index} has unresolved classification")
        if car.classified and car.finish_rank is None:
            raise DataError(
                f"race {race.race_id!r}: classified car {car.car_index} of "
                f"team {car.team_id!r} has no finish rank")
        if car.finish_rank is not None:
            if car.finish_rank < 1:
                raise DataError(
                    f"race {race.race_id!r}: finish rank {car.finish_rank} "
                    f"of team {car.team_id!r} is not positive")
            if car.finish_rank in ranks:
                raise DataError(
                    f"race {race.race_id!r}: duplicate finish rank "
                    f"{car.finish_rank} (teams {ranks[car.finish_rank]!r} "
                    f"and {car.team_id!r})")
            ranks[car.finish_rank] = car.team_id
    for team, indices in cars_per_team.items():
        if sorted(indices) != [1, 2]:
            raise DataError(
                f"race {race.race_id!r}: team cardinality violation, team "
                f"{team!r} fields {len(indices)} car(s), expected exactly 2")


def validate_season(season: SeasonResults) -> None:
    if len(season.teams) < 2:
        raise DataError("a season needs at least 2 teams")
    if len(set(season.teams)) != len(season.teams):
        raise DataError("duplicate team identifiers in team list")
    known = set(season.teams)
    ordinals: dict[int, str] = {}
    for race in season.races:
        validate_race(race)
        if race.ordinal in ordinals:
            raise DataError(
                f"duplicate race ordinal {race.ordinal} (races "
                f"{ordinals[race.ordinal]!r} and {race.race_id!r})")
        ordinals[race.ordinal] = race.race_id
        for team in race.entered_teams():
            if team not in known:
                raise DataError(
                    f"race {race.race_id!r}: team {team!r} is not in the "
                    "season team list")


def _parse_bool(text: str, line_no: int) -> bool:
    if text == "true":
        return True
    if text == "false":
        return False
    raise DataError(f"line {line_no}: classified must be 'true', 'false' or "
                    f"empty, got {text!r}")


def _parse_int(text: str, field: str, line_no: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise DataError(f"line {line_no}: malformed row, {field} {text!r} "
                        "is not an integer") from None


def parse_season(source: str | bytes | IO[str],
                 season_id: str = "season",
                 threshold: float = CLASSIFICATION_THRESHOLD) -> SeasonResults:
    """Parse and validate a season CSV into :class:`SeasonResults`.

    Args:
        source: CSV text, UTF-8 bytes, or an open text stream.
        season_id: label stored on the returned season.
        threshold: race-distance fraction used to derive missing
            classification flags.

    Returns:
        A validated season. Team order equals the ``# teams:`` preamble when
        present, first-appearance order otherwise; races are sorted by
        ordinal.

    Raises:
        DataError: on any schema or invariant violation, naming the line or
            entity at fault.
    """
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        text = source.read()

    lines = text.splitlines()
    line_no = 0
    declared_teams: tuple[str, ...] | None = None
    if lines and lines[0].startswith("#"):
        line_no = 1
        preamble = lines[0][1:].strip()
        if not preamble.startswith("teams:"):
            raise DataError("line 1: unrecognized preamble, expected "
                            "'# teams: ...'")
        declared_teams = tuple(
            t.strip() for t in preamble[len("teams:"):].split(",") if t.strip())
        lines = lines[1:]

    reader = csv.reader(io.StringIO("\n".join(lines)))
    try:
        header = next(reader)
    except StopIteration:
        raise DataError("empty input: header row is required") from None
    line_no += 1
    if tuple(header) != SEASON_CSV_COLUMNS:
        unknown = [c for c in header if c not in SEASON_CSV_COLUMNS]
        if unknown:
            raise DataError(f"line {line_no}: unknown column(s) "
                            f"{', '.join(repr(c) for c in unknown)}")
        raise DataError(f"line {line_no}: header must be exactly "
                        f"{','.join(SEASON_CSV_COLUMNS)}")

    order: dict[str, None] = {}
    race_rows: dict[str, list[CarResult]] = {}
    race_ordinals: dict[str, int] = {}
    for row in reader:
        line_no += 1
        if not row:
            continue
        if len(row) != len(SEASON_CSV_COLUMNS):
            raise DataError(f"line {line_no}: malformed row, expected "
                            f"{len(SEASON_CSV_COLUMNS)} fields, got {len(row)}")
        race_id, ordinal_s, team_id, car_s, rank_s, cls_s, frac_s = (
            cell.strip() for cell in row)
        if not race_id or not team_id:
            raise DataError(f"line {line_no}: malformed row, race_id and "
                            "team_id must be non-empty")
        ordinal = _parse_int(ordinal_s, "ordinal", line_no)
        car_index = _parse_int(car_s, "car_index", line_no)
        rank = _parse_int(rank_s, "finish_rank", line_no) if rank_s else None
        classified = _parse_bool(cls_s, line_no) if cls_s else None
        if frac_s:
            try:
                fraction = float(frac_s)
            except ValueError:
                raise DataError(f"line {line_no}: malformed row, "
                                f"laps_fraction {frac_s!r} is not a number"
                                ) from None
            if not 0.0 <= fraction <= 1.0:
                raise DataError(f"line {line_no}: laps_fraction {fraction} "
                                "outside [0, 1]")
        else:
            fraction = None

        if race_id in race_ordinals and race_ordinals[race_id] != ordinal:
            raise DataError(
                f"line {line_no}: race {race_id!r} has conflicting ordinals "
                f"{race_ordinals[race_id]} and {ordinal}")
        race_ordinals[race_id] = ordinal
        order.setdefault(team_id, None)
        car = CarResult(team_id, car_index, rank, classified, fraction)
        if car.classified is None:
            try:
                car = derive_classified(car, threshold)
            except DataError as exc:
                raise DataError(f"line {line_no}: {exc}") from None
        race_rows.setdefault(race_id, []).append(car)

    if not race_rows:
        raise DataError("no result rows found")

    teams = declared_teams if declared_teams is not None else tuple(order)
    races = tuple(Race(rid, race_ordinals[rid], tuple(cars))
                  for rid, cars in race_rows.items())
    season = SeasonResults(season_id, teams, races)
    validate_season(season)
    return season


def serialize_season(season: SeasonResults) -> str:
    """Emit the season CSV; ``parse_season`` round-trips it exactly.

    Rows keep their stored order (races and results as constructed), so
    parsing the output reproduces the season identically.
    """
    buf = io.StringIO()
    buf.write("# teams: " + ",".join(season.teams) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SEASON_CSV_COLUMNS)
    for race in season.races:
        for car in race.results:
            writer.writerow([
                race.race_id,
                race.ordinal,
                car.team_id,
                car.car_index,
                "" if car.finish_rank is None else car.finish_rank,
                "" if car.classified is None else str(car.classified).lower(),
                "" if car.laps_fraction is None else repr(car.laps_fraction),
            ])
    return buf.getvalue()
