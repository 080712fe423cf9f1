"""Deterministic sampling shared by the generator and its tests.

The PRNG is SplitMix64 (Steele, Lea & Flood 2014) and sampling without
replacement is a partial Fisher-Yates shuffle over the population indices.
Both are spelled out here so any other implementation can reproduce a sample
bit for bit:

* ``next()``: ``state += 0x9E3779B97F4A7C15``; mix with the two SplitMix64
  multiply/xor-shift rounds; all arithmetic mod 2**64.
* ``below(m)``: draw ``x`` until ``x < 2**64 - (2**64 % m)``, return ``x % m``.
* ``sample_indices(P, k)``: for ``i`` in ``0..k-1`` swap position ``i`` with
  ``i + below(P - i)``; the first ``k`` positions, in draw order, are the sample.
"""

from __future__ import annotations

import hashlib
import json

MASK64 = (1 << 64) - 1


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, m: int) -> int:
        if m <= 0:
            raise ValueError("below() needs a positive bound")
        limit = (1 << 64) - ((1 << 64) % m)
        while True:
            x = self.next()
            if x < limit:
                return x % m


def sample_indices(population: int, k: int, rng: SplitMix64) -> list[int]:
    """k distinct indices from range(population), in draw order."""
    if not 0 <= k <= population:
        raise ValueError(f"cannot draw {k} of {population}")
    swapped: dict[int, int] = {}
    out = []
    for i in range(k):
        j = i + rng.below(population - i)
        out.append(swapped.get(j, j))
        swapped[j] = swapped.get(i, i)
    return out


def derive_seed(seed: int, *parts) -> int:
    """Stable 64-bit sub-seed for one unit of work (entity, sentence, ...)."""
    h = hashlib.blake2b(digest_size=8)
    h.update((seed & MASK64).to_bytes(8, "little"))
    for part in parts:
        if not isinstance(part, (str, bytes)):
            part = json.dumps(part, sort_keys=True, ensure_ascii=False)
        if isinstance(part, str):
            part = part.encode("utf-8")
        h.update(len(part).to_bytes(4, "little"))
        h.update(part)
    return int.from_bytes(h.digest(), "little")
