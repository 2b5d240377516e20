"""Command-line front end.

One subcommand per pipeline stage: goals, pcm, weights, allocate, sweep,
indifferent-alpha, check-scale-invariance, standings. Output is deterministic
for fixed inputs and flags; numeric output is full precision unless --round
is given. Exit status: 0 success, 1 data/validation error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from .alloc import (DEFAULT_ALPHA_MAX, DEFAULT_GRID_STEP, allocation_to_json,
                    allocate, alpha_grid, indifference_to_json,
                    indifferent_alpha, sweep, sweep_to_json, sweep_to_tsv)
from .errors import DataError, GridshareError
from .goals import GoalsMatrix, goals_matrix, goals_to_csv, load_goals
from .metrics import crossing_report_to_json, scale_invariance_scan
from .pcm import build_pcm, pcm_to_csv, pcm_to_json
from .scoring import (builtin_system, builtin_systems, load_points_system,
                      score_season, standings_to_csv, standings_to_json)
from .season import parse_season
from .weights import method_from_tag, weight_vector_to_json, weights_for_alpha


def _add_io_flags(parser: argparse.ArgumentParser, races_only: bool = False,
                  races_flag: bool = True) -> None:
    if races_only:
        parser.add_argument("--races", required=True, metavar="PATH",
                            help="race-level season CSV")
    else:
        group = parser.add_mutually_exclusive_group(required=True)
        group.add_argument("--goals", metavar="PATH",
                           help="square goals CSV")
        if races_flag:
            group.add_argument("--races", metavar="PATH",
                               help="race-level season CSV")
    parser.add_argument("--output", default="-", metavar="PATH",
                        help="output file, or - for standard output")
    parser.add_argument("--force", action="store_true",
                        help="overwrite an existing output file")
    parser.add_argument("--round", type=int, default=None, metavar="N",
                        help="display rounding to N decimals")


def _load_matrix(args: argparse.Namespace) -> GoalsMatrix:
    if getattr(args, "goals", None):
        with open(args.goals, encoding="utf-8") as fh:
            return load_goals(fh.read())
    with open(args.races, encoding="utf-8") as fh:
        season = parse_season(fh.read())
    return goals_matrix(season)


def _load_season(args: argparse.Namespace):
    with open(args.races, encoding="utf-8") as fh:
        return parse_season(fh.read())


def _grid_spec(text: str) -> tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"grid must be START:STOP:STEP, got {text!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"grid values must be numbers, got {text!r}") from None
    return start, stop, step


def _round_json(node, ndigits: int):
    if isinstance(node, float):
        return round(node, ndigits)
    if isinstance(node, list):
        return [_round_json(x, ndigits) for x in node]
    if isinstance(node, dict):
        return {k: _round_json(v, ndigits) for k, v in node.items()}
    return node


def _apply_rounding(text: str, fmt: str, ndigits: int | None) -> str:
    """Display rounding only; integral cells keep their integer rendering."""
    if ndigits is None:
        return text
    if fmt == "json":
        doc = json.loads(text)
        return json.dumps(_round_json(doc, ndigits), indent=2) + "\n"
    sep = "\t" if fmt == "tsv" else ","
    out_lines = []
    for line in text.splitlines():
        if line.startswith("#"):
            out_lines.append(line)
            continue
        cells = line.split(sep)
        rounded = []
        for cell in cells:
            # only cells rendered as non-integral numbers are reformatted
            if any(ch in cell for ch in ".eE"):
                try:
                    rounded.append(format(float(cell), f".{ndigits}f"))
                    continue
                except ValueError:
                    pass
            rounded.append(cell)
        out_lines.append(sep.join(rounded))
    return "\n".join(out_lines) + "\n"


def _write_output(text: str, args: argparse.Namespace,
                  path: str | None = None) -> None:
    target = path if path is not None else args.output
    if target == "-":
        sys.stdout.write(text)
        return
    if os.path.exists(target) and not args.force:
        raise DataError(f"refusing to overwrite {target!r}; pass --force")
    with open(target, "w", encoding="utf-8") as fh:
        fh.write(text)


def _suffixed(path: str, tag: str) -> str:
    root, ext = os.path.splitext(path)
    return f"{root}.{tag}{ext or ''}"


def _methods_from(arg: str):
    if arg == "both":
        return [method_from_tag("em"), method_from_tag("rgm")]
    return [method_from_tag(arg)]


def _cmd_goals(args) -> None:
    season = _load_season(args)
    text = goals_to_csv(goals_matrix(season))
    _write_output(_apply_rounding(text, "csv", args.round), args)


def _cmd_pcm(args) -> None:
    matrix = build_pcm(_load_matrix(args), args.alpha, args.epsilon)
    if args.format == "json":
        text = pcm_to_json(matrix)
    else:
        text = pcm_to_csv(matrix)
    _write_output(_apply_rounding(text, args.format, args.round), args)


def _cmd_weights(args) -> None:
    matrix = _load_matrix(args)
    docs = {}
    for method in _methods_from(args.method):
        wv = weights_for_alpha(matrix, method, args.alpha, args.epsilon)
        docs[method.tag] = json.loads(
            weight_vector_to_json(wv, alpha=args.alpha, epsilon=args.epsilon))
    if len(docs) == 1:
        text = json.dumps(next(iter(docs.values())), indent=2) + "\n"
    else:
        text = json.dumps(docs, indent=2) + "\n"
    _write_output(_apply_rounding(text, "json", args.round), args)


def _cmd_allocate(args) -> None:
    matrix = _load_matrix(args)
    method = method_from_tag(args.method)
    wv = weights_for_alpha(matrix, method, args.alpha, args.epsilon)
    report = allocate(wv, args.pot, args.unit, alpha=args.alpha,
                      epsilon=args.epsilon)
    text = allocation_to_json(report)
    _write_output(_apply_rounding(text, "json", args.round), args)


def _cmd_sweep(args) -> None:
    matrix = _load_matrix(args)
    start, stop, step = args.grid
    grid = alpha_grid(start, stop, step)
    methods = _methods_from(args.method)
    result = sweep(matrix, methods, grid, epsilon=args.epsilon)
    if args.figures:
        from .figures import render_sweep_figures
        for path in render_sweep_figures(result, args.figures):
            print(f"wrote {path}", file=sys.stderr)
    if args.format == "json":
        text = sweep_to_json(result)
        _write_output(_apply_rounding(text, "json", args.round), args)
        return
    if len(methods) == 1:
        text = sweep_to_tsv(result, methods[0].tag)
        _write_output(_apply_rounding(text, "tsv", args.round), args)
        return
    if args.output == "-":
        blocks = []
        for method in methods:
            blocks.append(f"# method={method.tag}")
            blocks.append(sweep_to_tsv(result, method.tag).rstrip("\n"))
        _write_output("\n".join(blocks) + "\n", args)
        return
    for method in methods:
        text = _apply_rounding(sweep_to_tsv(result, method.tag), "tsv",
                               args.round)
        _write_output(text, args, path=_suffixed(args.output, method.tag))


def _cmd_indifferent_alpha(args) -> None:
    matrix = _load_matrix(args)
    method = method_from_tag(args.method)
    start, stop, step = args.grid
    result = indifferent_alpha(matrix, args.team, args.target, method,
                               scan_range=(start, stop), grid_step=step,
                               tol=args.tol, epsilon=args.epsilon)
    text = indifference_to_json(result)
    _write_output(_apply_rounding(text, "json", args.round), args)


def _cmd_check_scale_invariance(args) -> None:
    matrix = _load_matrix(args)
    start, stop, step = args.grid
    grid = alpha_grid(start, stop, step)
    methods = _methods_from(args.method)
    if args.format == "tsv":
        result = sweep(matrix, methods, grid, epsilon=args.epsilon,
                       refine_tol=args.refine_tol)
        if len(methods) == 1:
            text = sweep_to_tsv(result, methods[0].tag)
            _write_output(_apply_rounding(text, "tsv", args.round), args)
        elif args.output == "-":
            blocks = []
            for method in methods:
                blocks.append(f"# method={method.tag}")
                blocks.append(sweep_to_tsv(result, method.tag).rstrip("\n"))
            _write_output("\n".join(blocks) + "\n", args)
        else:
            for method in methods:
                text = _apply_rounding(sweep_to_tsv(result, method.tag),
                                       "tsv", args.round)
                _write_output(text, args,
                              path=_suffixed(args.output, method.tag))
        return
    docs = {}
    for method in methods:
        report = scale_invariance_scan(matrix, method, grid,
                                       refine_tol=args.refine_tol,
                                       epsilon=args.epsilon)
        docs[method.tag] = json.loads(crossing_report_to_json(report))
    if len(docs) == 1:
        text = json.dumps(next(iter(docs.values())), indent=2) + "\n"
    else:
        text = json.dumps(docs, indent=2) + "\n"
    _write_output(_apply_rounding(text, "json", args.round), args)


def _cmd_standings(args) -> None:
    season = _load_season(args)
    builtin_names = {s.name for s in builtin_systems()}
    if args.system in builtin_names:
        final_race = max(season.races, key=lambda r: r.ordinal).race_id
        system = builtin_system(args.system, double_points_race_id=final_race)
    else:
        with open(args.system, encoding="utf-8") as fh:
            system = load_points_system(fh.read())
    standings = score_season(season, system)
    if args.format == "json":
        text = standings_to_json(standings)
    else:
        text = standings_to_csv(standings)
    _write_output(_apply_rounding(text, args.format, args.round), args)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridshare",
        description="Revenue allocation from pairwise comparison of season "
                    "race results.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("goals", help="aggregate race results into goals CSV")
    _add_io_flags(p, races_only=True)
    p.set_defaults(func=_cmd_goals)

    p = sub.add_parser("pcm", help="build the pairwise comparison matrix")
    _add_io_flags(p)
    p.add_argument("--alpha", type=float, required=True,
                   help="inequality exponent (>= 0)")
    p.add_argument("--epsilon", type=float, default=0.0,
                   help="smoothing constant added to all goal counts")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=_cmd_pcm)

    p = sub.add_parser("weights", help="derive team weights")
    _add_io_flags(p)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--method", choices=("em", "rgm", "both"), default="both")
    p.set_defaults(func=_cmd_weights)

    p = sub.add_parser("allocate", help="split a pot of money by weights")
    _add_io_flags(p)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--method", choices=("em", "rgm"), required=True)
    p.add_argument("--pot", type=float, required=True,
                   help="amount to distribute")
    p.add_argument("--unit", type=float, default=0.01,
                   help="money rounding unit (default 0.01)")
    p.set_defaults(func=_cmd_allocate)

    p = sub.add_parser("sweep", help="evaluate the exponent grid")
    _add_io_flags(p)
    p.add_argument("--grid", type=_grid_spec,
                   default=(0.0, DEFAULT_ALPHA_MAX, DEFAULT_GRID_STEP),
                   metavar="START:STOP:STEP")
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--method", choices=("em", "rgm", "both"), default="both")
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")
    p.add_argument("--figures", metavar="DIR", default=None,
                   help="also render share and concentration figures "
                        "into DIR")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("indifferent-alpha",
                       help="exponents at which a team's share equals a "
                            "target")
    _add_io_flags(p)
    p.add_argument("--team", required=True)
    p.add_argument("--target", type=float, required=True,
                   help="target share in (0, 1)")
    p.add_argument("--method", choices=("em", "rgm"), required=True)
    p.add_argument("--grid", type=_grid_spec,
                   default=(0.0, DEFAULT_ALPHA_MAX, DEFAULT_GRID_STEP),
                   metavar="START:STOP:STEP")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--epsilon", type=float, default=0.0)
    p.set_defaults(func=_cmd_indifferent_alpha)

    p = sub.add_parser("check-scale-invariance",
                       help="report ranking flips along the exponent grid")
    _add_io_flags(p)
    p.add_argument("--method", choices=("em", "rgm", "both"), default="both")
    p.add_argument("--grid", type=_grid_spec,
                   default=(DEFAULT_GRID_STEP, DEFAULT_ALPHA_MAX,
                            DEFAULT_GRID_STEP),
                   metavar="START:STOP:STEP")
    p.add_argument("--refine-tol", type=float, default=1e-6)
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--format", choices=("json", "tsv"), default="json")
    p.set_defaults(func=_cmd_check_scale_invariance)

    p = sub.add_parser("standings", help="points-table championship standings")
    _add_io_flags(p, races_only=True)
    p.add_argument("--system", required=True,
                   help="built-in system name or a points-system JSON path")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=_cmd_standings)

    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except GridshareError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
