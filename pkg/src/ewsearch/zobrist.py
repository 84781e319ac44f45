"""Zobrist key tables for incremental position hashing.

Keys are 64-bit and generated from a fixed seed so every run hashes
identically; the seed is echoed in solve reports. Position hashes cover
stones only (no side-to-move key): Go's positional-superko history compares
bare board configurations, and the transposition layer carries the mover in
its exact-verification payload instead.
"""

from __future__ import annotations

from random import Random

DEFAULT_ZOBRIST_SEED = 0x9E3779B97F4A7C15


class ZobristKeys:
    """Per-(player, cell) random 64-bit keys."""

    def __init__(self, cells: int, seed: int = DEFAULT_ZOBRIST_SEED):
        rng = Random(seed)
        self.seed = seed
        self.cells = cells
        self.first = [rng.getrandbits(64) for _ in range(cells)]
        self.second = [rng.getrandbits(64) for _ in range(cells)]

    def hash_bits(self, first_bits: int, second_bits: int) -> int:
        """From-scratch hash of a board given both players' stone bit sets."""
        h = 0
        bits = first_bits
        while bits:
            low = bits & -bits
            h ^= self.first[low.bit_length() - 1]
            bits ^= low
        bits = second_bits
        while bits:
            low = bits & -bits
            h ^= self.second[low.bit_length() - 1]
            bits ^= low
        return h
