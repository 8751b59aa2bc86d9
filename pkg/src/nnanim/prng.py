"""SplitMix64 generator and distinct-index sampling.

The generator is fully pinned so identical seeds give identical sample
plans on every platform: 64-bit wrapping state increment by the golden
gamma, then two xor-shift multiplies.  Seed 0 must produce
0xE220A8397B1DCDAF first.
"""

from __future__ import annotations

_MASK = 0xFFFFFFFFFFFFFFFF
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def splitmix64_next(state: int) -> tuple[int, int]:
    """One step: returns (new state, output)."""
    state = (state + _GAMMA) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    z = z ^ (z >> 31)
    return state, z


class SplitMix64:
    """Stateful wrapper around splitmix64_next."""

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next(self) -> int:
        self.state, out = splitmix64_next(self.state)
        return out


def sample_distinct(n: int, k: int, rng: SplitMix64) -> tuple[int, ...]:
    """Draw k distinct indices from range(n), returned sorted ascending.

    Partial Fisher-Yates over a scratch array: step i swaps position i with
    position i + (output mod (n - i)).  Consumes exactly k outputs.
    """
    if not 0 <= k <= n:
        raise ValueError(f"cannot sample {k} of {n}")
    pool = list(range(n))
    for i in range(k):
        j = i + rng.next() % (n - i)
        pool[i], pool[j] = pool[j], pool[i]
    return tuple(sorted(pool[:k]))
