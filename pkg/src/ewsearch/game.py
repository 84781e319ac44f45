"""Shared game vocabulary: players, outcomes, moves, and the rules contract.

Every backend (Hex, Go) exposes the same mutable-state surface so the
solvers stay game-agnostic: legal move generation, play/undo, terminal
detection, Zobrist position hashing, symmetry-canonical hashing, and a
random playout used for win-rate and work estimation.

All outcomes are negamax-relative: a Win/Loss always refers to the player
to move at the position in question, so a child solved as a Win means the
parent's move into it was losing for the parent.
"""

from __future__ import annotations

from enum import Enum
from random import Random
from typing import NamedTuple, Protocol

# Pass move marker (Go only; Hex never generates or accepts it).
PASS = -1

Move = int


class Player(Enum):
    """The two players. Hex: First connects top-bottom, Second left-right.
    Go: First is Black."""

    FIRST = "first"
    SECOND = "second"

    @property
    def opponent(self) -> "Player":
        return Player.SECOND if self is Player.FIRST else Player.FIRST


class Outcome(Enum):
    """Game-theoretic value for the player to move."""

    WIN = "win"
    LOSS = "loss"
    UNKNOWN = "unknown"

    def flipped(self) -> "Outcome":
        """Negamax flip: the same result seen from the opponent."""
        if self is Outcome.WIN:
            return Outcome.LOSS
        if self is Outcome.LOSS:
            return Outcome.WIN
        return Outcome.UNKNOWN


class IllegalMoveError(Exception):
    """Move rejected by the rules."""


class OccupiedCellError(IllegalMoveError):
    """Placement on a non-empty cell."""


class SuicideError(IllegalMoveError):
    """Go placement that would leave the mover's own block without liberties."""


class SuperkoError(IllegalMoveError):
    """Go placement that would recreate a previous board position."""


class ContractViolationError(Exception):
    """API misuse: e.g. playing into a finished game or scoring a live one."""


class RolloutResult(NamedTuple):
    """Outcome of one random playout.

    winner: the player who won the playout (absolute, not mover-relative).
    branching_sum: accumulated legal-move counts of every position the
        playout moved from; used to seed expected-work estimates.
    """

    winner: Player
    branching_sum: float


class GameRules(Protocol):
    """State + rules contract consumed by all solvers.

    States are single-threaded mutable values. ``play`` followed by ``undo``
    must restore the exact prior state, including history and any capture
    bookkeeping. ``legal_moves`` is deterministic: ascending cell index,
    with Pass last where it exists.
    """

    game_name: str
    cells: int
    to_move: Player
    transposition_safe: bool

    def legal_moves(self) -> list[Move]: ...

    def play(self, move: Move) -> None: ...

    def undo(self) -> None: ...

    def terminal_status(self) -> Outcome | None:
        """Outcome for the player to move, or None while the game is live."""
        ...

    def position_hash(self) -> int: ...

    def canonical_hash(self) -> int:
        """Minimum of position_hash over the game's symmetry group."""
        ...

    def canonical_payload(self) -> tuple:
        """Exact canonical identity (bit sets + mover) for collision checks."""
        ...

    def symmetry_reduce_siblings(self, moves: list[Move]) -> list[Move]:
        """Drop moves whose successors duplicate a kept sibling by symmetry."""
        ...

    def branching_factor(self) -> int: ...

    def rollout(self, rng: Random, cap: int) -> RolloutResult: ...


def validate_komi(komi: float) -> float:
    """Komi must be a half-integer so Go outcomes are never drawn."""
    komi = float(komi)
    if komi % 1.0 != 0.5:
        raise ValueError(f"komi must end in .5, got {komi}")
    return komi
