"""Small-board Go with positional superko, capture, and area scoring.

Ruleset (echoed in solve reports so results are attributable):
  - positional superko: a placement may not recreate any board position
    seen earlier on the current path, regardless of who is to move
  - suicide is illegal
  - the game ends after two consecutive passes
  - Tromp-Taylor area scoring: stones plus empty regions touching only one
    player's stones; Black wins iff black_area - white_area > komi

Boards are bit sets over row-major cells. Rectangular boards are supported
for exhaustive testing (2x3); the CLI only exposes square sizes. The history
needed for superko is kept as a set of stones-only Zobrist hashes, one per
board configuration on the current path, which also bounds game length and
guarantees playouts terminate.
"""

from __future__ import annotations

from random import Random

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
    validate_komi,
)
from .zobrist import DEFAULT_ZOBRIST_SEED, ZobristKeys


def _build_transforms(rows: int, cols: int) -> list[tuple[int, ...]]:
    """Cell permutations for the board's symmetry group (8 square, 4 rect)."""

    def build(f):
        return tuple(f(r, c)[0] * cols + f(r, c)[1] for r in range(rows) for c in range(cols))

    maps = [
        build(lambda r, c: (r, c)),
        build(lambda r, c: (rows - 1 - r, cols - 1 - c)),
        build(lambda r, c: (rows - 1 - r, c)),
        build(lambda r, c: (r, cols - 1 - c)),
    ]
    if rows == cols:
        n = rows
        maps.extend(
            [
                build(lambda r, c: (c, n - 1 - r)),
                build(lambda r, c: (n - 1 - c, r)),
                build(lambda r, c: (c, r)),
                build(lambda r, c: (n - 1 - c, n - 1 - r)),
            ]
        )
    return maps


def _invert(perm: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for i, j in enumerate(perm):
        inv[j] = i
    return tuple(inv)


class GoState:
    """Mutable Go position implementing the shared rules contract.

    The transposition layer is disabled for Go by design: positional superko
    makes outcomes history-dependent, so board-keyed reuse of solved results
    is unsound without entry re-validation, which is out of scope here.
    """

    game_name = "go"
    transposition_safe = False

    def __init__(
        self,
        rows: int,
        komi: float,
        cols: int | None = None,
        zobrist_seed: int = DEFAULT_ZOBRIST_SEED,
    ):
        cols = rows if cols is None else cols
        if rows < 1 or cols < 1 or rows * cols > 64:
            raise ValueError(f"board {rows}x{cols} outside the 64-cell limit")
        self.rows = rows
        self.cols = cols
        self.cells = rows * cols
        self.size = rows  # square-board alias used by the CLI layer
        self.komi = validate_komi(komi)
        self.full_mask = (1 << self.cells) - 1
        self.neighbor_list: list[tuple[int, ...]] = []
        self.neighbor_mask: list[int] = []
        for r in range(rows):
            for c in range(cols):
                nbs = []
                if r > 0:
                    nbs.append((r - 1) * cols + c)
                if r < rows - 1:
                    nbs.append((r + 1) * cols + c)
                if c > 0:
                    nbs.append(r * cols + c - 1)
                if c < cols - 1:
                    nbs.append(r * cols + c + 1)
                self.neighbor_list.append(tuple(nbs))
                mask = 0
                for nb in nbs:
                    mask |= 1 << nb
                self.neighbor_mask.append(mask)
        self.transforms = _build_transforms(rows, cols)
        self.inverse_transforms = [_invert(p) for p in self.transforms]
        self.black = 0
        self.white = 0
        self.to_move = Player.FIRST
        self.pass_count = 0
        self.zobrist = ZobristKeys(self.cells, zobrist_seed)
        self.board_hash = 0
        self.history: set[int] = {0}
        # Undo frames: (move, captured_mask, prev_pass_count, prev_board_hash).
        self._frames: list[tuple[int, int, int, int]] = []
        self._history_complete = True

    # -- block analysis ----------------------------------------------------

    def _block_and_libs(self, start: int, color_mask: int, empty_mask: int) -> tuple[int, int]:
        """Connected block containing ``start`` within ``color_mask`` and its
        liberty cells within ``empty_mask``."""
        block = frontier = 1 << start
        libs = 0
        neighbor_mask = self.neighbor_mask
        while frontier:
            nbrs = 0
            f = frontier
            while f:
                low = f & -f
                nbrs |= neighbor_mask[low.bit_length() - 1]
                f ^= low
            libs |= nbrs & empty_mask
            frontier = nbrs & color_mask & ~block
            block |= frontier
        return block, libs

    def _placement_effects(self, cell: int) -> tuple[int, int] | None:
        """Captured stones and post-capture board hash for a placement by the
        player to move; None when the placement would be suicide.

        Callers are responsible for the occupied-cell and superko checks.
        """
        me_first = self.to_move is Player.FIRST
        me = self.black if me_first else self.white
        opp = self.white if me_first else self.black
        my_keys = self.zobrist.first if me_first else self.zobrist.second
        opp_keys = self.zobrist.second if me_first else self.zobrist.first
        bit = 1 << cell
        empty = self.full_mask & ~(self.black | self.white) & ~bit
        nb_mask = self.neighbor_mask[cell]
        captured = 0
        if nb_mask & opp:
            # Only opponent blocks adjacent to the new stone can be captured.
            for nb in self.neighbor_list[cell]:
                nb_bit = 1 << nb
                if opp & nb_bit and not captured & nb_bit:
                    block, libs = self._block_and_libs(nb, opp, empty)
                    if libs == 0:
                        captured |= block
        if not captured:
            # No capture frees a liberty, so the merged own block must breathe.
            if not nb_mask & empty:
                _, libs = self._block_and_libs(cell, me | bit, empty)
                if libs == 0:
                    return None
        new_hash = self.board_hash ^ my_keys[cell]
        caps = captured
        while caps:
            low = caps & -caps
            new_hash ^= opp_keys[low.bit_length() - 1]
            caps ^= low
        return captured, new_hash

    def _legal_placements(self) -> list[int]:
        out = []
        occupied = self.black | self.white
        history = self.history
        for cell in range(self.cells):
            if occupied >> cell & 1:
                continue
            effects = self._placement_effects(cell)
            if effects is None or effects[1] in history:
                continue
            out.append(cell)
        return out

    # -- rules contract ------------------------------------------------------

    def legal_moves(self) -> list[Move]:
        if self.pass_count >= 2:
            return []
        moves = self._legal_placements()
        moves.append(PASS)
        return moves

    def branching_factor(self) -> int:
        if self.pass_count >= 2:
            return 0
        return len(self._legal_placements()) + 1

    def superko_legal(self, move: Move) -> bool:
        """Whether a placement passes the positional-superko check alone.

        Pass moves never repeat a position. Suicidal placements are illegal
        for a different reason and report True here.
        """
        if move == PASS:
            return True
        if (self.black | self.white) >> move & 1:
            raise ContractViolationError(f"cell {move} is not a placement candidate")
        effects = self._placement_effects(move)
        if effects is None:
            return True
        return effects[1] not in self.history

    def play(self, move: Move) -> None:
        if self.pass_count >= 2:
            raise ContractViolationError("game already ended by two passes")
        if move == PASS:
            self._frames.append((PASS, 0, self.pass_count, self.board_hash))
            self.pass_count += 1
            self.to_move = self.to_move.opponent
            return
        if not 0 <= move < self.cells:
            raise IllegalMoveError(f"cell {move} out of range")
        if (self.black | self.white) >> move & 1:
            raise OccupiedCellError(f"cell {move} occupied")
        effects = self._placement_effects(move)
        if effects is None:
            raise SuicideError(f"cell {move} would be suicide")
        captured, new_hash = effects
        if new_hash in self.history:
            raise SuperkoError(f"cell {move} would repeat an earlier position")
        self._frames.append((move, captured, self.pass_count, self.board_hash))
        if self.to_move is Player.FIRST:
            self.black |= 1 << move
            self.white &= ~captured
        else:
            self.white |= 1 << move
            self.black &= ~captured
        self.board_hash = new_hash
        self.history.add(new_hash)
        self.pass_count = 0
        self.to_move = self.to_move.opponent

    def undo(self) -> None:
        move, captured, prev_pass, prev_hash = self._frames.pop()
        self.to_move = self.to_move.opponent
        if move == PASS:
            self.pass_count = prev_pass
            return
        bit = 1 << move
        if self.to_move is Player.FIRST:
            self.black &= ~bit
            self.white |= captured
        else:
            self.white &= ~bit
            self.black |= captured
        self.history.remove(self.board_hash)
        self.board_hash = prev_hash
        self.pass_count = prev_pass

    def terminal_status(self) -> Outcome | None:
        if self.pass_count < 2:
            return None
        return self._score_outcome()

    def score(self) -> Outcome:
        """Outcome for the player to move; only valid after two passes."""
        if self.pass_count < 2:
            raise ContractViolationError("scoring requires two consecutive passes")
        return self._score_outcome()

    def tromp_taylor_areas(self) -> tuple[int, int]:
        """(black_area, white_area): stones plus exclusively-bordered space."""
        black, white = self.black, self.white
        empty = self.full_mask & ~(black | white)
        black_area = black.bit_count()
        white_area = white.bit_count()
        neighbor_mask = self.neighbor_mask
        remaining = empty
        while remaining:
            region = frontier = remaining & -remaining
            reach = 0
            while frontier:
                nbrs = 0
                f = frontier
                while f:
                    low = f & -f
                    nbrs |= neighbor_mask[low.bit_length() - 1]
                    f ^= low
                reach |= nbrs
                frontier = nbrs & empty & ~region
                region |= frontier
            remaining &= ~region
            if reach & black and not reach & white:
                black_area += region.bit_count()
            elif reach & white and not reach & black:
                white_area += region.bit_count()
        return black_area, white_area

    def _area_winner(self) -> Player:
        black_area, white_area = self.tromp_taylor_areas()
        return Player.FIRST if black_area - white_area > self.komi else Player.SECOND

    def _score_outcome(self) -> Outcome:
        return Outcome.WIN if self._area_winner() is self.to_move else Outcome.LOSS

    def position_hash(self) -> int:
        return self.board_hash

    def _transformed_hash(self, perm: tuple[int, ...]) -> int:
        h = 0
        bits = self.black
        first, second = self.zobrist.first, self.zobrist.second
        while bits:
            low = bits & -bits
            h ^= first[perm[low.bit_length() - 1]]
            bits ^= low
        bits = self.white
        while bits:
            low = bits & -bits
            h ^= second[perm[low.bit_length() - 1]]
            bits ^= low
        return h

    def canonical_hash(self) -> int:
        best = self.board_hash
        for perm in self.transforms[1:]:
            h = self._transformed_hash(perm)
            if h < best:
                best = h
        return best

    def _canonical_transform_index(self) -> int:
        best, best_i = self.board_hash, 0
        for i, perm in enumerate(self.transforms[1:], start=1):
            h = self._transformed_hash(perm)
            if h < best:
                best, best_i = h, i
        return best_i

    @staticmethod
    def _permute_bits(bits: int, perm: tuple[int, ...]) -> int:
        out = 0
        while bits:
            low = bits & -bits
            out |= 1 << perm[low.bit_length() - 1]
            bits ^= low
        return out

    def canonical_payload(self) -> tuple:
        perm = self.transforms[self._canonical_transform_index()]
        return (
            self._permute_bits(self.black, perm),
            self._permute_bits(self.white, perm),
            self.to_move,
        )

    def to_canonical_move(self, move: Move) -> Move:
        if move == PASS:
            return PASS
        return self.transforms[self._canonical_transform_index()][move]

    def from_canonical_move(self, move: Move) -> Move:
        if move == PASS:
            return PASS
        return self.inverse_transforms[self._canonical_transform_index()][move]

    def symmetry_reduce_siblings(self, moves: list[Move]) -> list[Move]:
        # Sound only when the whole path so far is invariant under the group,
        # which (with superko forbidding a return to the start) is exactly the
        # untouched starting board: in practice the empty-board root.
        if self.black | self.white or len(self.history) != 1:
            return moves
        kept = []
        for m in moves:
            if m == PASS or all(perm[m] >= m for perm in self.transforms):
                kept.append(m)
        return kept

    def rollout(self, rng: Random, cap: int) -> RolloutResult:
        """Random playout: uniform over legal placements minus single-point
        eye fills (every on-board orthogonal neighbor own color); pass only
        when nothing else is playable. After ``cap`` moves the playout is
        scored as it stands."""
        made = 0
        branching_sum = 0
        neighbor_mask = self.neighbor_mask
        while self.pass_count < 2 and made < cap:
            placements = self._legal_placements()
            branching_sum += len(placements) + 1
            own = self.black if self.to_move is Player.FIRST else self.white
            candidates = [c for c in placements if neighbor_mask[c] & ~own]
            if candidates:
                self.play(rng.choice(candidates))
            else:
                self.play(PASS)
            made += 1
        winner = self._area_winner()
        for _ in range(made):
            self.undo()
        return RolloutResult(winner, float(branching_sum))

    # -- construction / inspection --------------------------------------------

    @property
    def moves_played(self) -> list[Move] | None:
        """Full move history when the state was built from the empty board."""
        if not self._history_complete:
            return None
        return [frame[0] for frame in self._frames]

    @classmethod
    def from_board(
        cls,
        black: int,
        white: int,
        to_move: Player,
        rows: int,
        komi: float,
        cols: int | None = None,
        zobrist_seed: int = DEFAULT_ZOBRIST_SEED,
    ) -> "GoState":
        """Adopt a raw board as a fresh search root.

        Without a move history the superko set can only contain the current
        configuration; solves from such roots use that reduced history.
        """
        if black & white:
            raise ValueError("overlapping stones")
        state = cls(rows, komi, cols, zobrist_seed)
        if black >> state.cells or white >> state.cells:
            raise ValueError("stones outside the board")
        state.black = black
        state.white = white
        state.to_move = to_move
        empty = state.full_mask & ~(black | white)
        for color in (black, white):
            remaining = color
            while remaining:
                seed_cell = (remaining & -remaining).bit_length() - 1
                block, libs = state._block_and_libs(seed_cell, color, empty)
                if libs == 0:
                    raise ValueError(f"block at cell {seed_cell} has no liberties")
                remaining &= ~block
        state.board_hash = state.zobrist.hash_bits(black, white)
        state.history = {state.board_hash}
        state._history_complete = black == 0 and white == 0
        return state

    def __str__(self) -> str:
        rows = []
        for r in range(self.rows):
            row = []
            for c in range(self.cols):
                bit = 1 << (r * self.cols + c)
                row.append("B" if self.black & bit else "W" if self.white & bit else ".")
            rows.append(" ".join(row))
        return "\n".join(rows)
