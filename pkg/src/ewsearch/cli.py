"""Command-line front end: single solves and benchmark sweeps.

Exit codes for ``solve``: 0 solved, 2 limit exceeded, 1 usage error.
``bench`` streams one record per (cell, repetition), flushing incrementally
so a timeout in one cell loses nothing; cell failures are recorded in-stream
and the sweep continues.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .baselines import OracleSizeError, oracle_solve, solve_alphabeta
from .engine import (
    ALGO_EWS,
    ALGO_EWS_PS,
    ALGO_EWS_WR,
    DEFAULT_UCT_C,
    SolveReport,
    SolverConfig,
    solve,
)
from .game import ContractViolationError, Outcome, Player
from .gogame import GoState
from .hexgame import HexState
from .position import PositionFormatError, load_position
from .ttable import DEFAULT_TABLE_BITS

SCHEMA_VERSION = 1
ALGORITHMS = (ALGO_EWS, ALGO_EWS_WR, ALGO_EWS_PS, "ab", "oracle")
CSV_COLUMNS = (
    "game",
    "size",
    "komi",
    "algo",
    "seed",
    "outcome",
    "nodes",
    "rollouts",
    "elapsed_ms",
    "tt_hits",
    "exit",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on usage errors, not argparse's 2
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ewsearch", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="solve one position or empty board")
    sp.add_argument("--game", choices=("hex", "go"), required=True)
    sp.add_argument("--size", type=int)
    sp.add_argument("--komi", type=float)
    sp.add_argument("--position", type=Path, help="position file (see README)")
    sp.add_argument("--algo", choices=ALGORITHMS, default=ALGO_EWS)
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--node-limit", type=int)
    sp.add_argument("--time-limit", type=float, help="seconds")
    sp.add_argument("--no-tt", action="store_true")
    sp.add_argument("--no-symmetry", action="store_true")
    sp.add_argument("--conjecture", choices=("first", "second"))
    sp.add_argument("--tt-bits", type=int, default=DEFAULT_TABLE_BITS)
    sp.add_argument("--uct-c", type=float, default=DEFAULT_UCT_C)
    sp.add_argument("--rollout-cap", type=int)
    sp.add_argument("--json", action="store_true", dest="as_json")

    bp = sub.add_parser("bench", help="run a sweep from a JSON cell list")
    bp.add_argument("spec", type=Path, help="JSON array of bench cells")
    bp.add_argument("--repeats", type=int, default=1)
    bp.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "solve":
            return cmd_solve(args)
        return cmd_bench(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _build_state(game: str, size: int | None, komi: float | None, position: Path | None):
    if position is not None:
        try:
            state = load_position(position.read_text())
        except OSError as exc:
            raise UsageError(f"cannot read position file: {exc}") from exc
        except PositionFormatError as exc:
            raise UsageError(f"bad position file: {exc}") from exc
        if state.game_name != game:
            raise UsageError(f"position file is {state.game_name}, not {game}")
        if size is not None and state.size != size:
            raise UsageError(f"position file size {state.size} != --size {size}")
        if komi is not None:
            raise UsageError("--komi conflicts with --position (komi comes from the file)")
        return state
    if size is None:
        raise UsageError("--size is required without --position")
    if game == "hex":
        if komi is not None:
            raise UsageError("--komi applies to go only")
        try:
            return HexState(size)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    if komi is None:
        raise UsageError("go needs --komi (a half-integer like 8.5)")
    try:
        return GoState(size, komi)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _build_config(args) -> SolverConfig:
    conjecture = None
    if args.conjecture is not None:
        conjecture = Player.FIRST if args.conjecture == "first" else Player.SECOND
    try:
        return SolverConfig(
            algorithm=args.algo if args.algo in (ALGO_EWS, ALGO_EWS_WR, ALGO_EWS_PS) else ALGO_EWS,
            seed=args.seed,
            node_limit=args.node_limit,
            time_limit=args.time_limit,
            uct_c=args.uct_c,
            conjectured_winner=conjecture,
            use_transposition=not args.no_tt,
            use_symmetry=not args.no_symmetry,
            tt_bits=args.tt_bits,
            rollout_cap=args.rollout_cap,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _dispatch(algo: str, state, config: SolverConfig) -> SolveReport:
    if algo == "ab":
        return solve_alphabeta(state, config)
    if algo == "oracle":
        return oracle_solve(state)
    return solve(state, config)


def _outcome_label(report: SolveReport) -> str:
    if report.winner is Player.FIRST:
        return "first_player_win"
    if report.winner is Player.SECOND:
        return "second_player_win"
    return "unknown"


def report_to_record(report: SolveReport, game: str, size: int, komi: float | None,
                     algo: str, seed: int) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "game": game,
        "size": size,
        "komi": komi,
        "algo": algo,
        "seed": seed,
        "outcome": _outcome_label(report),
        "nodes": report.nodes,
        "rollouts": report.rollouts,
        "elapsed_ms": report.elapsed * 1000.0,
        "tt_hits": report.tt_hits,
        "tt_stores": report.tt_stores,
        "pv": list(report.pv),
        "config": report.config,
        "exit": 0 if report.outcome is not Outcome.UNKNOWN else 2,
    }


def cmd_solve(args) -> int:
    if args.algo == "oracle" and args.conjecture is not None:
        raise UsageError("--conjecture does not apply to the oracle")
    state = _build_state(args.game, args.size, args.komi, args.position)
    config = _build_config(args)
    try:
        report = _dispatch(args.algo, state, config)
    except OracleSizeError as exc:
        raise UsageError(str(exc)) from exc
    except ContractViolationError as exc:
        raise UsageError(str(exc)) from exc
    komi = getattr(state, "komi", None)
    record = report_to_record(report, args.game, state.size, komi, args.algo, args.seed)
    if args.as_json:
        print(json.dumps(record))
    else:
        print(f"game      : {args.game} {state.size}x{state.size}"
              + (f" komi {komi}" if komi is not None else ""))
        print(f"algorithm : {args.algo} (seed {args.seed})")
        print(f"outcome   : {record['outcome']}")
        print(f"nodes     : {report.nodes}")
        print(f"rollouts  : {report.rollouts}")
        print(f"elapsed   : {report.elapsed:.3f} s")
        if report.tt_stores or report.tt_hits:
            print(f"ttable    : {report.tt_hits} hits, {report.tt_stores} stores")
        if report.pv:
            print(f"line      : {' '.join('pass' if m == -1 else str(m) for m in report.pv)}")
    return record["exit"]


def _cell_args(cell: dict, repeats_default: int):
    if not isinstance(cell, dict):
        raise UsageError(f"bench cell must be an object, got {cell!r}")
    for required in ("game", "size", "algo"):
        if required not in cell:
            raise UsageError(f"bench cell missing {required!r}: {cell!r}")
    ns = argparse.Namespace(
        game=cell["game"],
        size=int(cell["size"]),
        komi=cell.get("komi"),
        position=None,
        algo=cell["algo"],
        seed=int(cell.get("seed", 1)),
        node_limit=cell.get("node_limit"),
        time_limit=cell.get("time_limit"),
        no_tt=not cell.get("transposition", True),
        no_symmetry=not cell.get("symmetry", True),
        conjecture=cell.get("conjecture"),
        tt_bits=int(cell.get("tt_bits", DEFAULT_TABLE_BITS)),
        uct_c=float(cell.get("uct_c", DEFAULT_UCT_C)),
        rollout_cap=cell.get("rollout_cap"),
    )
    if ns.game not in ("hex", "go"):
        raise UsageError(f"bench cell has unknown game {ns.game!r}")
    if ns.algo not in ALGORITHMS:
        raise UsageError(f"bench cell has unknown algo {ns.algo!r}")
    return ns, int(cell.get("repeats", repeats_default))


def _csv_line(record: dict) -> str:
    out = []
    for column in CSV_COLUMNS:
        value = record.get(column)
        out.append("" if value is None else str(value))
    return ",".join(out)


def cmd_bench(args) -> int:
    try:
        cells = json.loads(args.spec.read_text())
    except OSError as exc:
        raise UsageError(f"cannot read bench spec: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"bench spec is not valid JSON: {exc}") from exc
    if not isinstance(cells, list):
        raise UsageError("bench spec must be a flat JSON list of cells")
    if args.format == "csv":
        print(",".join(CSV_COLUMNS), flush=True)
    for cell in cells:
        ns, repeats = _cell_args(cell, args.repeats)
        for _ in range(repeats):
            try:
                state = _build_state(ns.game, ns.size, ns.komi, None)
                config = _build_config(ns)
                report = _dispatch(ns.algo, state, config)
                record = report_to_record(report, ns.game, ns.size, ns.komi, ns.algo, ns.seed)
            except (UsageError, OracleSizeError, ContractViolationError) as exc:
                record = {
                    "schema": SCHEMA_VERSION,
                    "game": ns.game,
                    "size": ns.size,
                    "komi": ns.komi,
                    "algo": ns.algo,
                    "seed": ns.seed,
                    "outcome": "error",
                    "error": str(exc),
                    "exit": 1,
                }
            if args.format == "csv":
                print(_csv_line(record), flush=True)
            else:
                print(json.dumps(record), flush=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
