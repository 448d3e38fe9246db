"""Closed-form Betti numbers of the quotient free-loop-space pair of a
sphere, their truncated alternating sums, and the average-growth constant
used by the mean index identity.

For odd n = 2k+1 the nonzero values sit in even degrees starting at 2k:
value 2 on {4k + 2l : l = 0 mod k}, else 1.  For even n = 2k they sit in odd
degrees starting at 2k-1: value 2 on {6k-3 + 2l : l = 0 mod 2k-1}, else 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def betti(n: int, q: int) -> int:
    """b_q of the loop-space pair for S^n; exact, in {0, 1, 2}."""
    if n < 3:
        raise ValueError("sphere dimension must be >= 3")
    if q < 0:
        return 0
    if n % 2:
        k = (n - 1) // 2
        if q < 2 * k or (q - 2 * k) % 2:
            return 0
        if q >= 4 * k and ((q - 4 * k) // 2) % k == 0:
            return 2
        return 1
    k = n // 2
    if q < 2 * k - 1 or (q - (2 * k - 1)) % 2:
        return 0
    if q >= 6 * k - 3 and ((q - (6 * k - 3)) // 2) % (2 * k - 1) == 0:
        return 2
    return 1


def alternating_sum(n: int, q_max: int) -> int:
    """sum_{q <= q_max} (-1)^q b_q, with +b_0 leading."""
    total = 0
    for q in range(0, q_max + 1):
        b = betti(n, q)
        if b:
            total += b if q % 2 == 0 else -b
    return total


def constant_B(n: int) -> Fraction:
    """Average slope of the truncated alternating Betti sums."""
    if n < 3:
        raise ValueError("sphere dimension must be >= 3")
    if n % 2:
        return Fraction(n + 1, 2 * (n - 1))
    return Fraction(-n, 2 * n - 2)


@dataclass(frozen=True)
class BettiTable:
    n: int
    q_max: int

    def values(self) -> dict[int, int]:
        return {q: betti(self.n, q) for q in range(0, self.q_max + 1)}

    def nonzero(self) -> dict[int, int]:
        return {q: b for q, b in self.values().items() if b}

    def to_dict(self) -> dict:
        return {"n": self.n, "q_max": self.q_max,
                "betti": {str(q): b for q, b in self.values().items()}}
