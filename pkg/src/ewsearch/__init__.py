"""Expected-work best-first game solver with Hex and small-board Go backends."""

from .baselines import (
    OracleSizeError,
    oracle_negamax,
    oracle_solve,
    solve_alphabeta,
    solve_ews_ps,
    solve_ews_wr,
)
from .engine import (
    ALGO_EWS,
    ALGO_EWS_PS,
    ALGO_EWS_WR,
    Engine,
    SearchNode,
    SolveReport,
    SolverConfig,
    expected_work_loss,
    expected_work_win,
    order_key,
    solve,
)
from .game import (
    ContractViolationError,
    IllegalMoveError,
    Move,
    OccupiedCellError,
    Outcome,
    PASS,
    Player,
    RolloutResult,
    SuicideError,
    SuperkoError,
)
from .gogame import GoState
from .hexgame import HexState, connected_players
from .position import PositionFormatError, dump_position, load_position
from .ttable import TranspositionEntry, TranspositionTable

__all__ = [
    "ALGO_EWS",
    "ALGO_EWS_PS",
    "ALGO_EWS_WR",
    "ContractViolationError",
    "Engine",
    "GoState",
    "HexState",
    "IllegalMoveError",
    "Move",
    "OccupiedCellError",
    "OracleSizeError",
    "Outcome",
    "PASS",
    "Player",
    "PositionFormatError",
    "RolloutResult",
    "SearchNode",
    "SolveReport",
    "SolverConfig",
    "SuicideError",
    "SuperkoError",
    "TranspositionEntry",
    "TranspositionTable",
    "connected_players",
    "dump_position",
    "expected_work_loss",
    "expected_work_win",
    "load_position",
    "oracle_negamax",
    "oracle_solve",
    "order_key",
    "solve",
    "solve_alphabeta",
    "solve_ews_ps",
    "solve_ews_wr",
]
