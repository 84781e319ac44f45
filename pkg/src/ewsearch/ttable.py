"""Transposition storage for solved outcomes, keyed by symmetry-canonical
Zobrist hashes with exact payload verification.

Only final results are stored (solved Win/Loss for the player to move), so
an entry never needs revalidation. Hits require both the 64-bit canonical
key and the full canonical board payload to match: solver correctness is
the product, so hash collisions must be impossible, not merely unlikely.
Winning moves are stored in the canonical orientation and mapped back into
the prober's frame, which makes symmetric probes return usable moves.

The table is a fixed-capacity power-of-two array with always-replace
eviction on index collisions.
"""

from __future__ import annotations

from typing import NamedTuple

from .game import Move, Outcome

DEFAULT_TABLE_BITS = 22


class TranspositionEntry(NamedTuple):
    key: int
    outcome: Outcome
    winning_move: Move | None  # canonical orientation; present iff outcome is WIN
    payload: tuple  # canonical (bits, bits, to_move) for exact verification


class TranspositionTable:
    def __init__(self, bits: int = DEFAULT_TABLE_BITS):
        if bits < 1:
            raise ValueError("table must hold at least two entries")
        self.bits = bits
        self.capacity = 1 << bits
        self._mask = self.capacity - 1
        self._slots: list[TranspositionEntry | None] = [None] * self.capacity
        self.hits = 0
        self.stores = 0
        # Test hook: assert that a solved position's outcome never flips.
        self.check_stability = False

    def store(self, state, outcome: Outcome, winning_move: Move | None = None) -> None:
        if outcome is Outcome.UNKNOWN:
            raise ValueError("only solved outcomes are stored")
        key = state.canonical_hash()
        payload = state.canonical_payload()
        canonical_move = (
            state.to_canonical_move(winning_move) if winning_move is not None else None
        )
        index = key & self._mask
        if self.check_stability:
            existing = self._slots[index]
            if (
                existing is not None
                and existing.key == key
                and existing.payload == payload
                and existing.outcome is not outcome
            ):
                raise AssertionError(f"stored outcome changed for key {key:#x}")
        self._slots[index] = TranspositionEntry(key, outcome, canonical_move, payload)
        self.stores += 1

    def probe(self, state) -> tuple[Outcome, Move | None] | None:
        key = state.canonical_hash()
        entry = self._slots[key & self._mask]
        if entry is None or entry.key != key:
            return None
        if entry.payload != state.canonical_payload():
            return None
        self.hits += 1
        move = (
            state.from_canonical_move(entry.winning_move)
            if entry.winning_move is not None
            else None
        )
        return entry.outcome, move

    def etc_probe(self, state) -> list[tuple[Move, Outcome, Move | None]]:
        """Enhanced transposition cutoff: 1-ply scan of all successors.

        Returns (move, stored outcome, stored winning move) for every legal
        move whose successor is already solved. A successor stored as a Loss
        immediately solves the probed position as a Win.
        """
        found = []
        for move in state.legal_moves():
            state.play(move)
            try:
                hit = self.probe(state)
            finally:
                state.undo()
            if hit is not None:
                found.append((move, hit[0], hit[1]))
        return found


def principal_variation(state, table: TranspositionTable | None, max_len: int) -> list[Move]:
    """Best-effort winning-move chain read back from stored solved entries.

    At a stored Win the recorded winning move is followed; at a stored Loss
    any reply whose successor is a stored Win extends the line. Stops at the
    first gap. The state is restored before returning.
    """
    if table is None:
        return []
    pv: list[Move] = []
    played = 0
    try:
        while len(pv) < max_len:
            hit = table.probe(state)
            if hit is None:
                break
            outcome, move = hit
            if outcome is Outcome.WIN:
                if move is None or move not in state.legal_moves():
                    break
                pv.append(move)
                state.play(move)
                played += 1
            else:
                reply = None
                for candidate in state.legal_moves():
                    state.play(candidate)
                    try:
                        child_hit = table.probe(state)
                    finally:
                        state.undo()
                    if child_hit is not None and child_hit[0] is Outcome.WIN:
                        reply = candidate
                        break
                if reply is None:
                    break
                pv.append(reply)
                state.play(reply)
                played += 1
    finally:
        for _ in range(played):
            state.undo()
    return pv
