"""Best-first solver that orders moves by the predicted work to solve them.

Each search-tree node keeps two work estimates: the cost of proving it a
loss (every child must be refuted) and the cost of proving it a win (children
are tried in order until one loses). An iteration descends the first-ordered
child to a leaf, expands the leaf by creating all non-terminal children with
one random playout each, then walks back to the root re-sorting children and
refreshing win rates and both work estimates. A child solved as a win is a
refuted move and is dropped; a node with no unsolved children left is a
proven loss; a child solved as a loss proves its parent a win.

Children of an unsolved node are kept sorted ascending by

    work_to_lose(child) / (1 - win_rate(child))

which provably minimizes the expected work to win among all orderings.
Exploration comes from optimistic initialization: a fresh leaf's work
estimates are seeded with the accumulated branching factor of its single
evaluation playout, which underestimates the true proof cost.

Two ablation policies share the machinery (see ``SolverConfig.algorithm``):
``ews-wr`` pins all win rates to zero and takes the minimum child work
(proof-number style), and ``ews-ps`` orders children by UCT and ignores the
work estimates (MCTS-solver style).
"""

from __future__ import annotations

import math
import sys
import time
from dataclasses import dataclass, field
from random import Random
from typing import Iterable

from .game import ContractViolationError, Move, Outcome, Player
from .ttable import DEFAULT_TABLE_BITS, TranspositionTable, principal_variation

ALGO_EWS = "ews"
ALGO_EWS_WR = "ews-wr"
ALGO_EWS_PS = "ews-ps"
_ALGORITHMS = (ALGO_EWS, ALGO_EWS_WR, ALGO_EWS_PS)

DEFAULT_UCT_C = 1.414
ROLLOUT_CAP_FACTOR = 4
_TIME_CHECK_MASK = 1023


def expected_work_loss(child_work_to_win: Iterable[float]) -> float:
    """Work to prove a loss: the sum of the work to win every child."""
    return float(sum(child_work_to_win))


def expected_work_win(children: Iterable[tuple[float, float]]) -> float:
    """Work to prove a win over ordered (work_to_lose, win_rate) pairs.

    Each child's cost is weighted by the probability the search actually
    reaches it: the product of the win rates of all earlier children, i.e.
    the chance that none of them has already delivered the proof.
    """
    total = 0.0
    reach = 1.0
    for work_to_lose, win_rate in children:
        total += work_to_lose * reach
        reach *= win_rate
    return total


def order_key(work_to_lose: float, win_rate: float) -> float:
    """Ascending sort key; requires win_rate strictly below 1."""
    return work_to_lose / (1.0 - win_rate)


class SearchNode:
    """In-tree record for one unsolved position.

    Win/visit counters start at 1/2 so the win rate can never reach 0 or 1,
    keeping the ordering key and the reach products well defined.
    """

    __slots__ = ("move", "expanded", "wins", "visits", "ew_loss", "ew_win", "children")

    def __init__(self, move: Move | None, ew_init: float):
        self.move = move
        self.expanded = False
        self.wins = 1
        self.visits = 2
        self.ew_loss = ew_init
        self.ew_win = ew_init
        self.children: list[SearchNode] = []

    @property
    def win_rate(self) -> float:
        return self.wins / self.visits

    def __repr__(self) -> str:  # debugging aid
        return (
            f"SearchNode(move={self.move}, wr={self.wins}/{self.visits}, "
            f"ew_loss={self.ew_loss:.3g}, ew_win={self.ew_win:.3g}, "
            f"children={len(self.children)})"
        )


@dataclass
class SolverConfig:
    """Variant policy plus limits and reproducibility knobs for one solve."""

    algorithm: str = ALGO_EWS
    seed: int = 1
    node_limit: int | None = None
    time_limit: float | None = None
    uct_c: float = DEFAULT_UCT_C
    conjectured_winner: Player | None = None
    use_transposition: bool = True
    use_symmetry: bool = True
    tt_bits: int = DEFAULT_TABLE_BITS
    rollout_cap: int | None = None  # None: 4x the cell count
    debug_checks: bool = False
    # Test hook: compute the ews-wr minimum rule literally as the weighted
    # sum with all win rates zeroed; must behave identically.
    wr_zero_weighted_sum: bool = False

    def __post_init__(self):
        if self.algorithm not in _ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.node_limit is not None and self.node_limit <= 0:
            raise ValueError("node_limit must be positive")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time_limit must be positive")
        if self.conjectured_winner is not None and self.algorithm == ALGO_EWS_PS:
            raise ValueError("conjectured-winner mode needs a work-estimate variant")


@dataclass
class SolveReport:
    """Result of one solve, the unit of benchmark output."""

    outcome: Outcome  # for the player to move at the root
    winner: Player | None  # absolute; None when unsolved
    root_player: Player
    nodes: int
    rollouts: int
    elapsed: float
    tt_hits: int
    tt_stores: int
    pv: list[Move] = field(default_factory=list)
    config: dict = field(default_factory=dict)
    invariant_samples: int = 0
    invariant_violations: int = 0


class _LimitReached(Exception):
    pass


class Engine:
    """One solve over one mutable game state. Single-threaded; independent
    instances may run concurrently on distinct states."""

    def __init__(self, state, config: SolverConfig | None = None):
        self.state = state
        self.config = config or SolverConfig()
        self.rng = Random(self.config.seed)
        self.algorithm = self.config.algorithm
        self.conjectured = self.config.conjectured_winner
        self.rollout_cap = (
            self.config.rollout_cap
            if self.config.rollout_cap is not None
            else ROLLOUT_CAP_FACTOR * state.cells
        )
        self.tt: TranspositionTable | None = None
        if self.config.use_transposition and state.transposition_safe:
            self.tt = TranspositionTable(self.config.tt_bits)
        self.nodes = 0
        self.rollouts = 0
        self.invariant_samples = 0
        self.invariant_violations = 0
        self._deadline: float | None = None
        self._iter_rollouts = 0
        self._iter_first_wins = 0
        self._winning_move: Move | None = None

    # -- public API ---------------------------------------------------------

    def run(self) -> SolveReport:
        state = self.state
        if state.terminal_status() is not None:
            raise ContractViolationError("root position is already terminal")
        started = time.perf_counter()
        if self.config.time_limit is not None:
            self._deadline = started + self.config.time_limit
        needed = sys.getrecursionlimit()
        if needed < 30_000:
            sys.setrecursionlimit(30_000)
        root = SearchNode(None, 0.0)
        root_player = state.to_move
        outcome = Outcome.UNKNOWN
        try:
            self._iter_rollouts = self._iter_first_wins = 0
            solved, winning = self._expand(root)
            while not solved:
                self._iter_rollouts = self._iter_first_wins = 0
                solved, winning = self._select_backpropagate(root)
            outcome = Outcome.WIN if winning else Outcome.LOSS
        except _LimitReached:
            outcome = Outcome.UNKNOWN
        elapsed = time.perf_counter() - started
        if outcome is Outcome.WIN:
            winner = root_player
        elif outcome is Outcome.LOSS:
            winner = root_player.opponent
        else:
            winner = None
        pv = self._extract_pv(outcome)
        return SolveReport(
            outcome=outcome,
            winner=winner,
            root_player=root_player,
            nodes=self.nodes,
            rollouts=self.rollouts,
            elapsed=elapsed,
            tt_hits=self.tt.hits if self.tt else 0,
            tt_stores=self.tt.stores if self.tt else 0,
            pv=pv,
            config=self._config_echo(),
            invariant_samples=self.invariant_samples,
            invariant_violations=self.invariant_violations,
        )

    # -- search -------------------------------------------------------------

    def _select_backpropagate(self, node: SearchNode) -> tuple[bool, bool]:
        """One selection/backpropagation step below ``node``.

        Returns (solved, winning) for ``node``, both from the perspective of
        its own player to move. The game state must be positioned at ``node``
        on entry and is restored before returning.
        """
        child = node.children[0]
        state = self.state
        state.play(child.move)
        try:
            if child.expanded:
                solved, winning = self._select_backpropagate(child)
            else:
                solved, winning = self._expand(child)
        finally:
            state.undo()
        if solved:
            if winning:
                # The child wins for its own mover, so this move is refuted
                # for us; drop it and carry on with the rest.
                node.children.pop(0)
                if not node.children:
                    self._record_solved(Outcome.LOSS, None)
                    return True, False
            else:
                self._record_solved(Outcome.WIN, child.move)
                return True, True
        self._update_node(node)
        return False, False

    def _expand(self, node: SearchNode) -> tuple[bool, bool]:
        """Create all children of a leaf, evaluating each with one playout.

        A move into a terminal position lost by the opponent solves the node
        as a win outright; terminal positions won by the opponent add no
        child. With the transposition table on, each successor is probed at
        birth (enhanced transposition cutoff) before paying for a playout.
        """
        if self.config.node_limit is not None and self.nodes >= self.config.node_limit:
            raise _LimitReached
        self.nodes += 1
        if (
            self._deadline is not None
            and not self.nodes & _TIME_CHECK_MASK
            and time.perf_counter() > self._deadline
        ):
            raise _LimitReached
        node.expanded = True
        state = self.state
        moves = state.legal_moves()
        if self.config.use_symmetry:
            moves = state.symmetry_reduce_siblings(moves)
        tt = self.tt
        for move in moves:
            winner = None
            state.play(move)
            try:
                status = state.terminal_status()
                if status is None and tt is not None:
                    hit = tt.probe(state)
                    if hit is not None:
                        status = hit[0]
                if status is None:
                    winner, branching_sum = state.rollout(self.rng, self.rollout_cap)
                    self.rollouts += 1
                    child_player = state.to_move
            finally:
                state.undo()
            if status is Outcome.LOSS:
                # Opponent has lost the successor: a winning move, no
                # children needed.
                self._record_solved(Outcome.WIN, move)
                return True, True
            if status is Outcome.WIN:
                continue
            self._iter_rollouts += 1
            if winner is Player.FIRST:
                self._iter_first_wins += 1
            child = SearchNode(move, branching_sum)
            child.visits += 1
            if winner is child_player:
                child.wins += 1
            node.children.append(child)
        if not node.children:
            self._record_solved(Outcome.LOSS, None)
            return True, False
        self._update_node(node)
        return False, False

    def _update_node(self, node: SearchNode) -> None:
        """Backpropagation bookkeeping: re-sort children, fold in this
        iteration's playout results, recompute the work estimates."""
        self._sort_children(node)
        if self._iter_rollouts:
            node.visits += self._iter_rollouts
            if self.state.to_move is Player.FIRST:
                node.wins += self._iter_first_wins
            else:
                node.wins += self._iter_rollouts - self._iter_first_wins
        self._recompute_work(node)
        if self.config.debug_checks:
            self._verify_node(node)

    def _sort_children(self, node: SearchNode) -> None:
        algo = self.algorithm
        if algo == ALGO_EWS:
            if self.conjectured is None or self.state.to_move is self.conjectured:
                node.children.sort(
                    key=lambda c: order_key(c.ew_loss, c.wins / c.visits)
                )
            else:
                # Children of a conjectured-loss node carry only a work-to-win
                # estimate; the key keeps the same shape.
                node.children.sort(key=lambda c: order_key(c.ew_win, c.wins / c.visits))
        elif algo == ALGO_EWS_WR:
            # All win rates pinned to zero: the key degenerates to the work
            # estimate itself.
            if self.conjectured is None or self.state.to_move is self.conjectured:
                node.children.sort(key=lambda c: c.ew_loss)
            else:
                node.children.sort(key=lambda c: c.ew_win)
        else:
            c_exploration = self.config.uct_c
            log_parent = math.log(node.visits)
            node.children.sort(
                key=lambda c: -(
                    (1.0 - c.wins / c.visits)
                    + c_exploration * math.sqrt(log_parent / c.visits)
                )
            )

    def _recompute_work(self, node: SearchNode) -> None:
        algo = self.algorithm
        if algo == ALGO_EWS_PS:
            return  # UCT ordering ignores the work estimates
        children = node.children
        conj = self.conjectured
        win_side = conj is None or self.state.to_move is conj
        loss_side = conj is None or not win_side
        if algo == ALGO_EWS:
            if loss_side:
                node.ew_loss = expected_work_loss(c.ew_win for c in children)
            if win_side:
                node.ew_win = expected_work_win(
                    (c.ew_loss, c.wins / c.visits) for c in children
                )
        else:
            if loss_side:
                node.ew_loss = expected_work_loss(c.ew_win for c in children)
            if win_side:
                if self.config.wr_zero_weighted_sum:
                    # Weighted sum with zero win rates: only the first-ordered
                    # child's term survives.
                    node.ew_win = expected_work_win((c.ew_loss, 0.0) for c in children)
                else:
                    node.ew_win = min(c.ew_loss for c in children)

    def _record_solved(self, outcome: Outcome, winning_move: Move | None) -> None:
        if self.tt is not None:
            self.tt.store(self.state, outcome, winning_move)
        if outcome is Outcome.WIN:
            self._winning_move = winning_move

    # -- instrumentation ------------------------------------------------------

    def _verify_node(self, node: SearchNode) -> None:
        """Debug-mode recursion check: recompute both work estimates through
        an independent code path and confirm the children are in key order."""
        self.invariant_samples += 1
        ok = node.wins >= 1 and node.visits >= node.wins + 1
        children = node.children
        if self.algorithm == ALGO_EWS and self.conjectured is None:
            loss_sum = 0.0
            rates = []
            for c in children:
                loss_sum += c.ew_win
                rates.append(c.wins / c.visits)
            win_sum = 0.0
            for i, c in enumerate(children):
                weight = 1.0
                for r in rates[:i]:
                    weight *= r
                win_sum += c.ew_loss * weight
            tol_loss = 1e-9 * max(1.0, abs(node.ew_loss))
            tol_win = 1e-9 * max(1.0, abs(node.ew_win))
            ok = ok and abs(node.ew_loss - loss_sum) <= tol_loss
            ok = ok and abs(node.ew_win - win_sum) <= tol_win
            keys = [order_key(c.ew_loss, c.wins / c.visits) for c in children]
            ok = ok and all(a <= b for a, b in zip(keys, keys[1:]))
        if not ok:
            self.invariant_violations += 1

    # -- reporting ------------------------------------------------------------

    def _extract_pv(self, outcome: Outcome) -> list[Move]:
        if outcome is Outcome.UNKNOWN:
            return []
        if self.tt is not None:
            return principal_variation(self.state, self.tt, self.state.cells + 2)
        if outcome is Outcome.WIN and self._winning_move is not None:
            return [self._winning_move]
        return []

    def _config_echo(self) -> dict:
        cfg = self.config
        echo = {
            "game": self.state.game_name,
            "algorithm": self.algorithm,
            "seed": cfg.seed,
            "node_limit": cfg.node_limit,
            "time_limit": cfg.time_limit,
            "transposition": self.tt is not None,
            "tt_bits": cfg.tt_bits if self.tt is not None else None,
            "symmetry": cfg.use_symmetry,
            "conjectured_winner": (
                self.conjectured.value if self.conjectured is not None else None
            ),
            "zobrist_seed": self.state.zobrist.seed,
        }
        if self.algorithm == ALGO_EWS_PS:
            echo["uct_c"] = cfg.uct_c
        if self.state.game_name == "go":
            echo["rollout_cap"] = self.rollout_cap
            echo["komi"] = self.state.komi
            echo["ruleset"] = (
                "positional superko, suicide illegal, two-pass termination, "
                "Tromp-Taylor area scoring"
            )
        return echo


def solve(state, config: SolverConfig | None = None) -> SolveReport:
    """Solve ``state`` for the player to move. Deterministic given the seed."""
    return Engine(state, config).run()
