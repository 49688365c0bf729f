"""Deterministic pseudo-random number generation.

Every randomized step in this package (candidate draws, target shuffling,
synthetic sampling) consumes one shared generator: xoshiro256** (Blackman &
Vigna), whose 256-bit state is expanded from a single 64-bit seed with
splitmix64. Bounded integer draws use bitmask rejection sampling, so there
is no modulo bias. The numba kernels implement the exact same stream; tests
pin both against vectors produced by the published C reference code.
"""

from __future__ import annotations

import math

MASK64 = 0xFFFFFFFFFFFFFFFF

GENERATOR_NAME = "xoshiro256**"

_TWO_PI = 2.0 * math.pi
_INV_2_53 = 1.0 / 9007199254740992.0  # 2**-53


def splitmix64(x: int) -> tuple[int, int]:
    """Advance a splitmix64 state, returning ``(new_state, output)``."""
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return x, z ^ (z >> 31)


class Xoshiro256StarStar:
    """xoshiro256** with splitmix64 seeding.

    The instance is cheap; one is created per matching run (seeded with the
    run's seed) and per synthetic set.
    """

    __slots__ = ("_s",)

    def __init__(self, seed: int):
        x = int(seed) & MASK64
        s = []
        for _ in range(4):
            x, z = splitmix64(x)
            s.append(z)
        self._s = s

    @property
    def state(self) -> tuple[int, int, int, int]:
        """Current 4-word state, e.g. for handing off to a kernel."""
        return tuple(self._s)

    def set_state(self, state) -> None:
        if len(state) != 4:
            raise ValueError("state must have exactly 4 words")
        self._s = [int(w) & MASK64 for w in state]

    def next_u64(self) -> int:
        s = self._s
        s1 = s[1]
        x = (s1 * 5) & MASK64
        result = ((((x << 7) | (x >> 57)) & MASK64) * 9) & MASK64
        t = (s1 << 17) & MASK64
        s[2] ^= s[0]
        s[3] ^= s1
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        x3 = s[3]
        s[3] = ((x3 << 45) | (x3 >> 19)) & MASK64
        return result

    def next_float(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * _INV_2_53

    def randbelow(self, n: int) -> int:
        """Unbiased integer in [0, n) via bitmask rejection sampling."""
        if n < 1:
            raise ValueError("randbelow requires n >= 1")
        m = n - 1
        mask = 0
        while mask < m:
            mask = (mask << 1) | 1
        while True:
            r = self.next_u64() & mask
            if r <= m:
                return r

    def permutation(self, n: int) -> list[int]:
        """Fisher-Yates permutation of range(n), consuming n-1 bounded draws."""
        arr = list(range(n))
        for i in range(n - 1, 0, -1):
            j = self.randbelow(i + 1)
            arr[i], arr[j] = arr[j], arr[i]
        return arr

    # -- distribution sampling (used by the synthetic generator fallback) --

    def normal(self) -> float:
        """Standard normal via Box-Muller; consumes exactly two uniforms."""
        u1 = self.next_float()
        u2 = self.next_float()
        return math.sqrt(-2.0 * math.log(1.0 - u1)) * math.cos(_TWO_PI * u2)

    def gamma(self, shape: float) -> float:
        """Gamma(shape, 1) via Marsaglia-Tsang, with the boost for shape < 1."""
        if shape <= 0.0:
            raise ValueError("gamma requires shape > 0")
        if shape < 1.0:
            g = self._gamma_ge1(shape + 1.0)
            u = self.next_float()
            return g * u ** (1.0 / shape)
        return self._gamma_ge1(shape)

    def _gamma_ge1(self, shape: float) -> float:
        d = shape - 1.0 / 3.0
        c = 1.0 / math.sqrt(9.0 * d)
        while True:
            x = self.normal()
            v = 1.0 + c * x
            if v <= 0.0:
                continue
            v = v * v * v
            u = self.next_float()
            x2 = x * x
            if u < 1.0 - 0.0331 * x2 * x2:
                return d * v
            if u <= 0.0:
                return d * v
            if math.log(u) < 0.5 * x2 + d * (1.0 - v + math.log(v)):
                return d * v

    def beta(self, a: float, b: float) -> float:
        """Beta(a, b) as X/(X+Y) with X~Gamma(a), Y~Gamma(b)."""
        x = self.gamma(a)
        y = self.gamma(b)
        if x == 0.0 and y == 0.0:
            return 0.5
        return x / (x + y)
