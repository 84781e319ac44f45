"""Reference solvers: the two engine ablations, an enhanced iterative
alpha-beta, and an unoptimized exhaustive oracle used as ground truth.

The ablations reuse the main engine with a different variant policy:
``ews-wr`` drops win-rate estimation (proof-number style minimum rule) and
``ews-ps`` drops work estimation (UCT child ordering). Alpha-beta here is a
boolean negamax with iterative deepening, a solved-outcome transposition
table (Hex only), previous-iteration best-move ordering, and killer moves;
the frontier of each depth-limited iteration reports Unknown until a proof
closes. The oracle is a plain depth-first negamax with no table, no
ordering, and no heuristics, guarded to sizes where exhaustive search is
practical.
"""

from __future__ import annotations

import dataclasses
import sys
import time

from .engine import ALGO_EWS_PS, ALGO_EWS_WR, SolveReport, SolverConfig, solve
from .game import ContractViolationError, Move, Outcome
from .ttable import TranspositionTable, principal_variation

ORACLE_MAX_HEX_EMPTIES = 14
ORACLE_MAX_GO_CELLS = 6


class OracleSizeError(ValueError):
    """Position too large for exhaustive search."""


def solve_ews_wr(state, config: SolverConfig | None = None) -> SolveReport:
    """Engine run with win rates pinned to zero and the minimum-child rule."""
    config = config or SolverConfig()
    return solve(state, dataclasses.replace(config, algorithm=ALGO_EWS_WR))


def solve_ews_ps(state, config: SolverConfig | None = None) -> SolveReport:
    """Engine run with UCT child ordering; work estimates unused."""
    config = config or SolverConfig()
    return solve(state, dataclasses.replace(config, algorithm=ALGO_EWS_PS))


class _AbLimitReached(Exception):
    pass


def solve_alphabeta(state, config: SolverConfig | None = None) -> SolveReport:
    """Boolean negamax with iterative deepening and standard enhancements."""
    cfg = config or SolverConfig()
    if state.terminal_status() is not None:
        raise ContractViolationError("root position is already terminal")
    started = time.perf_counter()
    deadline = started + cfg.time_limit if cfg.time_limit is not None else None
    table: TranspositionTable | None = None
    hints: dict[int, Move] | None = None
    if cfg.use_transposition and state.transposition_safe:
        table = TranspositionTable(cfg.tt_bits)
        hints = {}
    killers: list[list[Move | None]] = []
    nodes = 0
    root_player = state.to_move
    if sys.getrecursionlimit() < 30_000:
        sys.setrecursionlimit(30_000)

    def search(depth: int, ply: int) -> Outcome:
        nonlocal nodes
        if cfg.node_limit is not None and nodes >= cfg.node_limit:
            raise _AbLimitReached
        nodes += 1
        if deadline is not None and not nodes & 1023 and time.perf_counter() > deadline:
            raise _AbLimitReached
        if table is not None:
            hit = table.probe(state)
            if hit is not None:
                return hit[0]
        if depth == 0:
            return Outcome.UNKNOWN
        while ply >= len(killers):
            killers.append([None, None])
        moves = state.legal_moves()
        preferred = []
        if hints is not None:
            hinted = hints.get(state.canonical_hash())
            if hinted is not None:
                hinted = state.from_canonical_move(hinted)
                if hinted in moves:
                    preferred.append(hinted)
        for killer in killers[ply]:
            if killer is not None and killer in moves and killer not in preferred:
                preferred.append(killer)
        if preferred:
            moves = preferred + [m for m in moves if m not in preferred]
        first_unknown: Move | None = None
        for move in moves:
            state.play(move)
            try:
                status = state.terminal_status()
                result = status if status is not None else search(depth - 1, ply + 1)
            finally:
                state.undo()
            if result is Outcome.LOSS:
                # Refutation found: this position is won.
                if table is not None:
                    table.store(state, Outcome.WIN, move)
                    hints[state.canonical_hash()] = state.to_canonical_move(move)
                ks = killers[ply]
                if move != ks[0]:
                    ks[1] = ks[0]
                    ks[0] = move
                return Outcome.WIN
            if result is Outcome.UNKNOWN and first_unknown is None:
                first_unknown = move
        if first_unknown is not None:
            if hints is not None:
                hints[state.canonical_hash()] = state.to_canonical_move(first_unknown)
            return Outcome.UNKNOWN
        if table is not None:
            table.store(state, Outcome.LOSS, None)
        return Outcome.LOSS

    outcome = Outcome.UNKNOWN
    try:
        depth = 1
        while outcome is Outcome.UNKNOWN:
            outcome = search(depth, 0)
            depth += 1
    except _AbLimitReached:
        outcome = Outcome.UNKNOWN
    elapsed = time.perf_counter() - started
    if outcome is Outcome.WIN:
        winner = root_player
    elif outcome is Outcome.LOSS:
        winner = root_player.opponent
    else:
        winner = None
    pv = principal_variation(state, table, state.cells + 2) if outcome is not Outcome.UNKNOWN else []
    return SolveReport(
        outcome=outcome,
        winner=winner,
        root_player=root_player,
        nodes=nodes,
        rollouts=0,
        elapsed=elapsed,
        tt_hits=table.hits if table else 0,
        tt_stores=table.stores if table else 0,
        pv=pv,
        config={
            "game": state.game_name,
            "algorithm": "ab",
            "seed": cfg.seed,
            "node_limit": cfg.node_limit,
            "time_limit": cfg.time_limit,
            "transposition": table is not None,
            "enhancements": "iterative deepening, previous-best ordering, killer moves",
        },
    )


def _oracle_guard(state) -> None:
    if state.game_name == "hex":
        empties = state.cells - (state.first_bits | state.second_bits).bit_count()
        if empties > ORACLE_MAX_HEX_EMPTIES:
            raise OracleSizeError(
                f"hex oracle limited to {ORACLE_MAX_HEX_EMPTIES} empty cells, got {empties}"
            )
    elif state.game_name == "go":
        if state.cells > ORACLE_MAX_GO_CELLS:
            raise OracleSizeError(
                f"go oracle limited to {ORACLE_MAX_GO_CELLS} cells, got {state.cells}"
            )
    else:
        raise OracleSizeError(f"no oracle guard for game {state.game_name!r}")


def oracle_negamax(state) -> Outcome:
    """Exact outcome by plain exhaustive negamax. Size-guarded."""
    _oracle_guard(state)
    if sys.getrecursionlimit() < 30_000:
        sys.setrecursionlimit(30_000)
    counter = [0]
    return _oracle_search(state, counter)


def oracle_solve(state) -> SolveReport:
    """Oracle run wrapped in a report for the CLI/bench layer."""
    _oracle_guard(state)
    if sys.getrecursionlimit() < 30_000:
        sys.setrecursionlimit(30_000)
    counter = [0]
    started = time.perf_counter()
    outcome = _oracle_search(state, counter)
    elapsed = time.perf_counter() - started
    winner = state.to_move if outcome is Outcome.WIN else state.to_move.opponent
    return SolveReport(
        outcome=outcome,
        winner=winner,
        root_player=state.to_move,
        nodes=counter[0],
        rollouts=0,
        elapsed=elapsed,
        tt_hits=0,
        tt_stores=0,
        config={"game": state.game_name, "algorithm": "oracle"},
    )


def _oracle_search(state, counter: list[int]) -> Outcome:
    counter[0] += 1
    for move in state.legal_moves():
        state.play(move)
        try:
            status = state.terminal_status()
            result = status if status is not None else _oracle_search(state, counter)
        finally:
            state.undo()
        if result is Outcome.LOSS:
            return Outcome.WIN
    return Outcome.LOSS
