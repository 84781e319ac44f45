"""Hex rules on bitboards with an incremental union-find connection tracker.

The board is a size x size rhombus, cell index = row * size + col, with the
standard six-neighbor topology. First owns the top and bottom edges, Second
the left and right edges; four virtual union-find nodes represent the edges.
Play and undo dominate the playout inner loop, so the union-find merges are
logged and rolled back on undo instead of recomputing connectivity.

There are no draws: a completely filled board is connected for exactly one
player, which also means a random playout always ends with a winner.
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
)
from .zobrist import DEFAULT_ZOBRIST_SEED, ZobristKeys

# Neighbor offsets in (dr, dc) for the six-neighbor rhombus topology.
_NEIGHBOR_STEPS = ((-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0))


def _build_neighbors(size: int) -> list[tuple[int, ...]]:
    table = []
    for r in range(size):
        for c in range(size):
            cell_neighbors = []
            for dr, dc in _NEIGHBOR_STEPS:
                nr, nc = r + dr, c + dc
                if 0 <= nr < size and 0 <= nc < size:
                    cell_neighbors.append(nr * size + nc)
            table.append(tuple(cell_neighbors))
    return table


def connected_players(first_bits: int, second_bits: int, size: int) -> set[Player]:
    """Recompute edge connectivity from scratch (test/debug oracle).

    Returns the set of players whose two edges are joined by their stones.
    """
    neighbors = _build_neighbors(size)
    result: set[Player] = set()
    for player, bits in ((Player.FIRST, first_bits), (Player.SECOND, second_bits)):
        if player is Player.FIRST:
            sources = [c for c in range(size) if bits >> c & 1]
            targets = {size * (size - 1) + c for c in range(size)}
        else:
            sources = [r * size for r in range(size) if bits >> (r * size) & 1]
            targets = {r * size + size - 1 for r in range(size)}
        seen = set(sources)
        stack = list(sources)
        while stack:
            cell = stack.pop()
            if cell in targets:
                result.add(player)
                break
            for nb in neighbors[cell]:
                if bits >> nb & 1 and nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
    return result


class HexState:
    """Mutable Hex position implementing the shared rules contract."""

    game_name = "hex"
    transposition_safe = True

    def __init__(self, size: int, zobrist_seed: int = DEFAULT_ZOBRIST_SEED):
        if not 1 <= size <= 8:
            raise ValueError(f"hex size must be 1..8, got {size}")
        self.size = size
        self.cells = size * size
        self.neighbors = _build_neighbors(size)
        self.first_bits = 0
        self.second_bits = 0
        self.to_move = Player.FIRST
        self.winner: Player | None = None
        self.zobrist = ZobristKeys(self.cells, zobrist_seed)
        # Two incremental hashes: identity board and its 180-degree rotation
        # (cell c maps to cells-1-c), so the canonical key is a cheap min().
        self._hash_id = 0
        self._hash_rot = 0
        # Union-find over cells + 4 virtual edge nodes, union by size, no
        # path compression so merges can be rolled back exactly.
        n = self.cells
        self._top, self._bottom, self._left, self._right = n, n + 1, n + 2, n + 3
        self._uf_parent = list(range(n + 4))
        self._uf_size = [1] * (n + 4)
        self._uf_log: list[tuple[int, int]] = []
        # Undo frames: (move, union-find log mark, previous winner).
        self._frames: list[tuple[int, int, Player | None]] = []

    # -- union-find ------------------------------------------------------

    def _find(self, x: int) -> int:
        parent = self._uf_parent
        while parent[x] != x:
            x = parent[x]
        return x

    def _union(self, a: int, b: int) -> None:
        ra, rb = self._find(a), self._find(b)
        if ra == rb:
            return
        if self._uf_size[ra] < self._uf_size[rb]:
            ra, rb = rb, ra
        self._uf_parent[rb] = ra
        self._uf_size[ra] += self._uf_size[rb]
        self._uf_log.append((rb, ra))

    def _rollback(self, mark: int) -> None:
        log = self._uf_log
        parent, size = self._uf_parent, self._uf_size
        while len(log) > mark:
            child, root = log.pop()
            parent[child] = child
            size[root] -= size[child]

    def _connect_stone(self, cell: int, player: Player) -> None:
        own = self.first_bits if player is Player.FIRST else self.second_bits
        for nb in self.neighbors[cell]:
            if own >> nb & 1:
                self._union(cell, nb)
        row, col = divmod(cell, self.size)
        if player is Player.FIRST:
            if row == 0:
                self._union(cell, self._top)
            if row == self.size - 1:
                self._union(cell, self._bottom)
        else:
            if col == 0:
                self._union(cell, self._left)
            if col == self.size - 1:
                self._union(cell, self._right)

    def _edges_joined(self, player: Player) -> bool:
        if player is Player.FIRST:
            return self._find(self._top) == self._find(self._bottom)
        return self._find(self._left) == self._find(self._right)

    # -- rules contract --------------------------------------------------

    def legal_moves(self) -> list[Move]:
        if self.winner is not None:
            return []
        occupied = self.first_bits | self.second_bits
        return [c for c in range(self.cells) if not occupied >> c & 1]

    def branching_factor(self) -> int:
        if self.winner is not None:
            return 0
        return self.cells - (self.first_bits | self.second_bits).bit_count()

    def play(self, move: Move) -> None:
        if self.winner is not None:
            raise ContractViolationError("game already decided")
        if move == PASS:
            raise IllegalMoveError("hex has no pass move")
        if not 0 <= move < self.cells:
            raise IllegalMoveError(f"cell {move} out of range")
        if (self.first_bits | self.second_bits) >> move & 1:
            raise OccupiedCellError(f"cell {move} occupied")
        player = self.to_move
        mark = len(self._uf_log)
        bit = 1 << move
        if player is Player.FIRST:
            self.first_bits |= bit
            self._hash_id ^= self.zobrist.first[move]
            self._hash_rot ^= self.zobrist.first[self.cells - 1 - move]
        else:
            self.second_bits |= bit
            self._hash_id ^= self.zobrist.second[move]
            self._hash_rot ^= self.zobrist.second[self.cells - 1 - move]
        self._connect_stone(move, player)
        self._frames.append((move, mark, self.winner))
        if self._edges_joined(player):
            self.winner = player
        self.to_move = player.opponent

    def undo(self) -> None:
        move, mark, prev_winner = self._frames.pop()
        self.to_move = self.to_move.opponent
        player = self.to_move
        bit = 1 << move
        if player is Player.FIRST:
            self.first_bits &= ~bit
            self._hash_id ^= self.zobrist.first[move]
            self._hash_rot ^= self.zobrist.first[self.cells - 1 - move]
        else:
            self.second_bits &= ~bit
            self._hash_id ^= self.zobrist.second[move]
            self._hash_rot ^= self.zobrist.second[self.cells - 1 - move]
        self._rollback(mark)
        self.winner = prev_winner

    def terminal_status(self) -> Outcome | None:
        if self.winner is None:
            return None
        # The mover who connected ended the game; the player now to move lost.
        return Outcome.LOSS if self.winner is not self.to_move else Outcome.WIN

    def position_hash(self) -> int:
        return self._hash_id

    def canonical_hash(self) -> int:
        return self._hash_id if self._hash_id <= self._hash_rot else self._hash_rot

    def _rotated_bits(self, bits: int) -> int:
        out = 0
        last = self.cells - 1
        while bits:
            low = bits & -bits
            out |= 1 << (last - (low.bit_length() - 1))
            bits ^= low
        return out

    def canonical_payload(self) -> tuple:
        if self._hash_id <= self._hash_rot:
            return (self.first_bits, self.second_bits, self.to_move)
        return (
            self._rotated_bits(self.first_bits),
            self._rotated_bits(self.second_bits),
            self.to_move,
        )

    def to_canonical_move(self, move: Move) -> Move:
        # The 180-degree rotation is an involution, so both directions agree.
        if self._hash_id <= self._hash_rot:
            return move
        return self.cells - 1 - move

    from_canonical_move = to_canonical_move

    def symmetry_reduce_siblings(self, moves: list[Move]) -> list[Move]:
        # Sound only when the position itself is 180-degree symmetric:
        # then playing c and playing its image lead to mirrored subtrees.
        if (
            self._rotated_bits(self.first_bits) != self.first_bits
            or self._rotated_bits(self.second_bits) != self.second_bits
        ):
            return moves
        last = self.cells - 1
        return [m for m in moves if m <= last - m]

    def rollout(self, rng: Random, cap: int) -> RolloutResult:
        """Uniform random playout until one player connects.

        Equivalent to picking a uniformly random empty cell each turn; the
        accumulated branching factor is the number of empty cells at each
        position moved from. The union-find work is rolled back afterwards,
        so the state is untouched. ``cap`` is ignored: Hex playouts always
        terminate within the number of empty cells.
        """
        occupied = self.first_bits | self.second_bits
        empties = [c for c in range(self.cells) if not occupied >> c & 1]
        rng.shuffle(empties)
        mark = len(self._uf_log)
        first_bits, second_bits = self.first_bits, self.second_bits
        mover = self.to_move
        neighbors = self.neighbors
        size = self.size
        total = len(empties)
        branching_sum = 0
        winner = None
        for i, cell in enumerate(empties):
            branching_sum += total - i
            own = first_bits if mover is Player.FIRST else second_bits
            for nb in neighbors[cell]:
                if own >> nb & 1:
                    self._union(cell, nb)
            row, col = divmod(cell, size)
            if mover is Player.FIRST:
                first_bits |= 1 << cell
                if row == 0:
                    self._union(cell, self._top)
                if row == size - 1:
                    self._union(cell, self._bottom)
            else:
                second_bits |= 1 << cell
                if col == 0:
                    self._union(cell, self._left)
                if col == size - 1:
                    self._union(cell, self._right)
            if self._edges_joined(mover):
                winner = mover
                break
            mover = mover.opponent
        self._rollback(mark)
        assert winner is not None, "filled hex board must have a winner"
        return RolloutResult(winner, float(branching_sum))

    # -- construction / inspection ----------------------------------------

    @classmethod
    def from_board(
        cls,
        first_bits: int,
        second_bits: int,
        to_move: Player,
        size: int,
        zobrist_seed: int = DEFAULT_ZOBRIST_SEED,
    ) -> "HexState":
        """Build a state from raw stone sets, validating reachability rules."""
        if first_bits & second_bits:
            raise ValueError("overlapping stones")
        state = cls(size, zobrist_seed)
        if first_bits >> state.cells or second_bits >> state.cells:
            raise ValueError("stones outside the board")
        nf, ns = first_bits.bit_count(), second_bits.bit_count()
        expected_diff = 0 if to_move is Player.FIRST else 1
        if nf - ns != expected_diff:
            raise ValueError(
                f"stone counts {nf}/{ns} inconsistent with {to_move.value} to move"
            )
        state.first_bits = first_bits
        state.second_bits = second_bits
        state.to_move = to_move
        state._hash_id = state.zobrist.hash_bits(first_bits, second_bits)
        state._hash_rot = state.zobrist.hash_bits(
            state._rotated_bits(first_bits), state._rotated_bits(second_bits)
        )
        for cell in range(state.cells):
            if first_bits >> cell & 1:
                state._connect_stone(cell, Player.FIRST)
            elif second_bits >> cell & 1:
                state._connect_stone(cell, Player.SECOND)
        connected = [p for p in Player if state._edges_joined(p)]
        if len(connected) > 1:
            raise ValueError("both players connected: unreachable position")
        state.winner = connected[0] if connected else None
        return state

    def __str__(self) -> str:
        rows = []
        for r in range(self.size):
            row = []
            for c in range(self.size):
                bit = 1 << (r * self.size + c)
                row.append("B" if self.first_bits & bit else "W" if self.second_bits & bit else ".")
            rows.append(" " * r + " ".join(row))
        return "\n".join(rows)
