"""Exact turn arithmetic: rationals and quadratic surds with certified
floor/ceiling, plus linear combinations of square roots for mean-index work.

A *turn* is an angle divided by 2*pi.  Everything here is exact: integers are
unbounded, comparisons against integers are resolved by integer arithmetic
(squaring with sign care), and nothing ever rounds silently.
"""

from __future__ import annotations

import math
import os
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union


class PrecisionError(ArithmeticError):
    """Raised when a certified comparison would exceed the precision cap."""


class ParseError(ValueError):
    """Raised for malformed turn literals."""


def _max_precision_bits() -> int:
    raw = os.environ.get("GEODEX_MAX_PRECISION", "")
    if raw:
        try:
            return max(64, int(raw))
        except ValueError:
            pass
    return 1 << 16


_TRIAL_BOUND = 1_000_000


@lru_cache(maxsize=None)
def squarefree_part(n: int) -> tuple[int, int]:
    """Decompose n >= 1 as s*s*d with d square-free; returns (s, d).

    Trial division up to 10^6; any survivor has no factor below the bound,
    so it is square-free unless it is itself a perfect square.
    """
    if n < 1:
        raise ValueError("squarefree_part expects a positive integer")
    s, d, rem = 1, 1, n
    p = 2
    while p <= _TRIAL_BOUND and p * p <= rem:
        if rem % p == 0:
            e = 0
            while rem % p == 0:
                rem //= p
                e += 1
            s *= p ** (e // 2)
            if e % 2:
                d *= p
        p += 1 if p == 2 else 2
    if rem > 1:
        r = math.isqrt(rem)
        if r * r == rem:
            s *= r
        else:
            d *= rem
    return s, d


def _floor_sqrt_scaled(d: int, coeff: int, bits: int) -> int:
    """floor(coeff * sqrt(d) * 2**bits) for coeff of either sign."""
    v = math.isqrt(coeff * coeff * d << (2 * bits))
    if coeff >= 0:
        return v
    # coeff*sqrt(d) is irrational here, so the floor of the negative is -v-1.
    return -v - 1


class SurdTurn:
    """Quadratic surd (a + b*sqrt(d)) / c with b != 0, c > 0, d > 1 square-free."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: int, b: int, c: int, d: int):
        if c == 0:
            raise ValueError("zero denominator")
        if c < 0:
            a, b, c = -a, -b, -c
        if b == 0:
            raise ValueError("surd with b = 0 is rational; use a Fraction")
        if d < 2:
            raise ValueError("surd radicand must exceed 1")
        s, d0 = squarefree_part(d)
        b *= s
        d = d0
        if d == 1:
            raise ValueError("radicand is a perfect square; use a Fraction")
        g = math.gcd(math.gcd(abs(a), abs(b)), c)
        self.a, self.b, self.c, self.d = a // g, b // g, c // g, d

    # -- exact comparisons ------------------------------------------------

    def _cmp_fraction(self, q: Fraction) -> int:
        """Sign of self - q, by clearing denominators and squaring carefully."""
        # self - q = (a*qd - qn*c + b*qd*sqrt(d)) / (c*qd)
        lhs = self.a * q.denominator - q.numerator * self.c
        rad = self.b * q.denominator
        # sign of lhs + rad*sqrt(d); never zero since sqrt(d) is irrational
        if rad > 0:
            if lhs >= 0:
                return 1
            return 1 if rad * rad * self.d > lhs * lhs else -1
        if lhs <= 0:
            return -1
        return 1 if lhs * lhs > rad * rad * self.d else -1

    def __eq__(self, other) -> bool:
        if isinstance(other, SurdTurn):
            return (self.a, self.b, self.c, self.d) == (other.a, other.b, other.c, other.d)
        if isinstance(other, (int, Fraction)):
            return False  # verifiably irrational
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def _cmp(self, other) -> int:
        if isinstance(other, (int, Fraction)):
            return self._cmp_fraction(Fraction(other))
        if isinstance(other, SurdTurn):
            return (self.as_sum() - other.as_sum()).sign()
        if isinstance(other, SurdSum):
            return (self.as_sum() - other).sign()
        return NotImplemented

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    # -- arithmetic used by the iteration formulas ------------------------

    def scaled(self, m: int) -> "SurdTurn":
        return SurdTurn(self.a * m, self.b * m, self.c, self.d)

    def plus_int(self, k: int) -> "SurdTurn":
        return SurdTurn(self.a + k * self.c, self.b, self.c, self.d)

    def __neg__(self) -> "SurdTurn":
        return SurdTurn(-self.a, -self.b, self.c, self.d)

    def floor(self) -> int:
        fb = _floor_sqrt_scaled(self.d, self.b, 0)
        k = (self.a + fb) // self.c
        # value lies in ((a+fb)/c, (a+fb+1)/c]; settle the single candidate above
        return k + 1 if self._cmp_fraction(Fraction(k + 1)) >= 0 else k

    def as_sum(self) -> "SurdSum":
        c = Fraction(1, self.c)
        return SurdSum({1: self.a * c, self.d: self.b * c})

    def approx(self) -> float:
        return (self.a + self.b * math.sqrt(self.d)) / self.c

    def __repr__(self):
        return f"SurdTurn({self.a}, {self.b}, {self.c}, {self.d})"

    def __str__(self):
        return f"({self.a}{self.b:+d}*sqrt({self.d}))/{self.c}"


Turn = Union[int, Fraction, SurdTurn]


def floor_of(x: Turn) -> int:
    """[x] = max{k in Z : k <= x}, exact for rationals and surds."""
    if isinstance(x, SurdTurn):
        return x.floor()
    if isinstance(x, SurdSum):
        return x.floor()
    if isinstance(x, int):
        return x
    return x.numerator // x.denominator


def ceil_of(x: Turn) -> int:
    """E(x) = min{k in Z : k >= x}."""
    if isinstance(x, SurdTurn):
        return x.floor() + 1  # irrational, never integral
    if isinstance(x, SurdSum):
        return x.ceil()
    if isinstance(x, int):
        return x
    return -((-x.numerator) // x.denominator)


def phi_of(x: Turn) -> int:
    """phi(x) = E(x) - [x]: 0 on integers, 1 otherwise."""
    if isinstance(x, SurdTurn):
        return 1
    if isinstance(x, int):
        return 0
    if isinstance(x, SurdSum):
        return 0 if x.is_integer() else 1
    return 0 if x.denominator == 1 else 1


def scale(t: Turn, m: int) -> Turn:
    """Exact m*t for a positive integer m, staying in the same family."""
    if m < 1:
        raise ValueError("scale expects m >= 1")
    if isinstance(t, SurdTurn):
        return t.scaled(m)
    if isinstance(t, SurdSum):
        return t * m
    out = Fraction(t) * m
    return out


def is_rational_turn(t: Turn) -> bool:
    return not isinstance(t, (SurdTurn, SurdSum))


class SurdSum:
    """Exact element of Q(sqrt(d1), ..., sqrt(dk)): a rational linear
    combination of square roots of distinct square-free integers.

    Used for mean indices and identity arithmetic, where several rotation
    angles contribute different radicals.  Key facts exploited: distinct
    square-free radicals are linearly independent over Q, so an element is
    rational iff every radical coefficient vanishes, and sign determination
    by interval refinement terminates on every nonzero element.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[int, Fraction] | None = None):
        clean: dict[int, Fraction] = {}
        for d, q in (terms or {}).items():
            q = Fraction(q)
            if q == 0:
                continue
            s, d0 = squarefree_part(d)
            clean[d0] = clean.get(d0, Fraction(0)) + q * s
        self.terms = {d: q for d, q in sorted(clean.items()) if q != 0}

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_value(cls, x) -> "SurdSum":
        if isinstance(x, SurdSum):
            return x
        if isinstance(x, SurdTurn):
            return x.as_sum()
        return cls({1: Fraction(x)})

    # -- structure ----------------------------------------------------------

    def rational_part(self) -> Fraction:
        return self.terms.get(1, Fraction(0))

    def irrational_terms(self) -> dict[int, Fraction]:
        return {d: q for d, q in self.terms.items() if d != 1}

    def is_rational(self) -> bool:
        return not self.irrational_terms()

    def is_integer(self) -> bool:
        return self.is_rational() and self.rational_part().denominator == 1

    def is_zero(self) -> bool:
        return not self.terms

    # -- ring operations ----------------------------------------------------

    def __add__(self, other) -> "SurdSum":
        other = SurdSum.from_value(other)
        out = dict(self.terms)
        for d, q in other.terms.items():
            out[d] = out.get(d, Fraction(0)) + q
        return SurdSum(out)

    __radd__ = __add__

    def __neg__(self) -> "SurdSum":
        return SurdSum({d: -q for d, q in self.terms.items()})

    def __sub__(self, other) -> "SurdSum":
        return self + (-SurdSum.from_value(other))

    def __rsub__(self, other) -> "SurdSum":
        return (-self) + SurdSum.from_value(other)

    def __mul__(self, other) -> "SurdSum":
        other = SurdSum.from_value(other)
        out: dict[int, Fraction] = {}
        for d1, q1 in self.terms.items():
            for d2, q2 in other.terms.items():
                g = math.gcd(d1, d2)
                d = (d1 // g) * (d2 // g)
                out[d] = out.get(d, Fraction(0)) + q1 * q2 * g
        return SurdSum(out)

    __rmul__ = __mul__

    def inverse(self) -> "SurdSum":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return SurdSum({1: 1 / self.rational_part()})
        # rationalize with respect to one prime dividing some radical
        p = self._any_radical_prime()
        lo: dict[int, Fraction] = {}
        hi: dict[int, Fraction] = {}
        for d, q in self.terms.items():
            if d % p == 0:
                hi[d // p] = q
            else:
                lo[d] = q
        a, b = SurdSum(lo), SurdSum(hi)
        # self = a + sqrt(p)*b ; conjugate and recurse on fewer primes
        denom = a * a - SurdSum({1: Fraction(p)}) * b * b
        inv_denom = denom.inverse()
        return (a - SurdSum({p: Fraction(1)}) * b) * inv_denom

    def __truediv__(self, other) -> "SurdSum":
        return self * SurdSum.from_value(other).inverse()

    def __rtruediv__(self, other) -> "SurdSum":
        return SurdSum.from_value(other) * self.inverse()

    def _any_radical_prime(self) -> int:
        d = next(d for d in self.terms if d != 1)
        if d % 2 == 0:
            return 2
        f = 3
        while f * f <= d:
            if d % f == 0:
                return f
            f += 2
        return d

    # -- certified comparisons ----------------------------------------------

    def _bounds(self, bits: int) -> tuple[Fraction, Fraction]:
        lo = Fraction(0)
        hi = Fraction(0)
        unit = Fraction(1, 1 << bits)
        for d, q in self.terms.items():
            if d == 1:
                lo += q
                hi += q
                continue
            f = _floor_sqrt_scaled(d, q.numerator, bits)
            lo += Fraction(f, q.denominator) * unit
            hi += Fraction(f + 1, q.denominator) * unit
        return lo, hi

    def sign(self) -> int:
        if self.is_zero():
            return 0
        if self.is_rational():
            q = self.rational_part()
            return -1 if q < 0 else 1
        bits = 32
        cap = _max_precision_bits()
        while bits <= cap:
            lo, hi = self._bounds(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2
        raise PrecisionError(
            f"sign undecided at {cap} bits for {self!r}; raise GEODEX_MAX_PRECISION")

    def floor(self) -> int:
        if self.is_rational():
            q = self.rational_part()
            return q.numerator // q.denominator
        bits = 32
        cap = _max_precision_bits()
        while bits <= cap:
            lo, hi = self._bounds(bits)
            flo = lo.numerator // lo.denominator
            fhi = hi.numerator // hi.denominator
            if flo == fhi:
                return flo
            bits *= 2
        raise PrecisionError(
            f"floor undecided at {cap} bits for {self!r}; raise GEODEX_MAX_PRECISION")

    def ceil(self) -> int:
        if self.is_rational():
            q = self.rational_part()
            return -((-q.numerator) // q.denominator)
        return self.floor() + 1

    def _cmp(self, other) -> int:
        return (self - other).sign()

    def __eq__(self, other) -> bool:
        if isinstance(other, (SurdSum, SurdTurn, int, Fraction)):
            return (self - other).is_zero()
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    # -- presentation ---------------------------------------------------------

    def approx(self) -> float:
        return float(sum(float(q) * math.sqrt(d) for d, q in self.terms.items()))

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for d, q in self.terms.items():
            if d == 1:
                parts.append(str(q))
            elif q == 1:
                parts.append(f"sqrt({d})")
            elif q == -1:
                parts.append(f"-sqrt({d})")
            else:
                parts.append(f"{q}*sqrt({d})")
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def __repr__(self):
        return f"SurdSum({self.terms!r})"


def exact_sum(values: Iterable) -> SurdSum:
    total = SurdSum()
    for v in values:
        total = total + SurdSum.from_value(v)
    return total


# -- turn literals ------------------------------------------------------------

_RAT_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")
_SURD_RE = re.compile(r"^\((-?\d+)([+-]\d+)\*sqrt\((\d+)\)\)/(\d+)$")


def parse_turn(text: str) -> Turn:
    """Parse 'r/s' or '(a+b*sqrt(d))/c'.  Strict: anything else is an error."""
    if not isinstance(text, str):
        raise ParseError(f"turn literal must be a string, got {type(text).__name__}")
    s = text.strip()
    m = _RAT_RE.match(s)
    if m:
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) else 1
        if den == 0:
            raise ParseError(f"zero denominator in turn literal {text!r}")
        return Fraction(num, den)
    m = _SURD_RE.match(s)
    if m:
        a, b, d, c = int(m.group(1)), int(m.group(2)), int(m.group(3)), int(m.group(4))
        if c == 0:
            raise ParseError(f"zero denominator in turn literal {text!r}")
        if b == 0:
            raise ParseError(f"surd literal with zero sqrt coefficient: {text!r}")
        try:
            return SurdTurn(a, b, c, d)
        except ValueError as exc:
            raise ParseError(f"bad surd literal {text!r}: {exc}") from None
    raise ParseError(f"malformed turn literal {text!r}")


def format_turn(t: Turn) -> str:
    if isinstance(t, SurdTurn):
        return str(t)
    if isinstance(t, SurdSum):
        return str(t)
    f = Fraction(t)
    return f"{f.numerator}/{f.denominator}"


def turn_approx(t: Turn) -> float:
    if isinstance(t, (SurdTurn, SurdSum)):
        return t.approx()
    return float(t)
