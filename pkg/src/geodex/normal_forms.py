"""Basic-normal-form decompositions of linearized Poincare maps and their
spectral summaries: elliptic height, nullity at eigenvalue 1, splitting
defect, and the denominators of the rational part of the spectrum.

Block zoo (all symplectic): the four 2x2 Jordan-type blocks at eigenvalue
+1/-1, the identity pairs, plane rotations R(2*pi*t), 4x4 twisted rotation
blocks (trivial / non-trivial), and an eigenvalue-free hyperbolic part.

A rotation with turn 1 is literally the identity pair and one with turn 1/2
is literally minus the identity; the derived counts normalize them into the
corresponding buckets so every downstream formula sees the true spectrum.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

from .exact_numbers import (
    ParseError,
    SurdTurn,
    Turn,
    format_turn,
    is_rational_turn,
    parse_turn,
    turn_approx,
)

K_N1_PP = "N1(1,1)"
K_I2 = "I2"
K_N1_PM = "N1(1,-1)"
K_N1_MP = "N1(-1,1)"
K_MINUS_I2 = "-I2"
K_N1_MM = "N1(-1,-1)"
K_ROT = "rotation"
K_N2_NONTRIV = "N2_nontrivial"
K_N2_TRIV = "N2_trivial"
K_HYP = "hyperbolic"

_TURN_KINDS = {K_ROT, K_N2_NONTRIV, K_N2_TRIV}
_PLAIN_KINDS = {K_N1_PP, K_I2, K_N1_PM, K_N1_MP, K_MINUS_I2, K_N1_MM}

# index parity forced by a single block: True = odd initial index
_ODD_FORCING = {K_N1_PP, K_I2, K_N1_MP, K_MINUS_I2, K_N1_MM, K_ROT}

# per-block 2*S^+(1) - nu(.,1); nonzero only for blocks with eigenvalue 1.
# The two entries not pinned by the splitting bounds in the sources we
# replicate (the (1,1) block and the identity pair) come from the standard
# splitting-number table and must not change silently.
_SPLITTING = {K_N1_PP: 1, K_I2: 0, K_N1_PM: -1}


@dataclass(frozen=True)
class BasicBlock:
    kind: str
    turn: Optional[Turn] = None
    dim: Optional[int] = None

    def real_dim(self) -> int:
        if self.kind == K_HYP:
            return self.dim or 0
        if self.kind in (K_N2_NONTRIV, K_N2_TRIV):
            return 4
        return 2

    def __str__(self):
        if self.kind in _TURN_KINDS:
            return f"{self.kind}[{format_turn(self.turn)}]"
        if self.kind == K_HYP:
            return f"{self.kind}[{self.dim}]"
        return self.kind


N1_PLUS_PLUS = BasicBlock(K_N1_PP)
IDENTITY_PAIR = BasicBlock(K_I2)
N1_PLUS_MINUS = BasicBlock(K_N1_PM)
N1_MINUS_PLUS = BasicBlock(K_N1_MP)
MINUS_IDENTITY_PAIR = BasicBlock(K_MINUS_I2)
N1_MINUS_MINUS = BasicBlock(K_N1_MM)


def rotation(turn: Union[Turn, str, int]) -> BasicBlock:
    t = parse_turn(turn) if isinstance(turn, str) else turn
    if not isinstance(t, SurdTurn):
        t = Fraction(t)
    return BasicBlock(K_ROT, turn=t)


def n2_nontrivial(turn: Union[Turn, str]) -> BasicBlock:
    t = parse_turn(turn) if isinstance(turn, str) else turn
    if not isinstance(t, SurdTurn):
        t = Fraction(t)
    return BasicBlock(K_N2_NONTRIV, turn=t)


def n2_trivial(turn: Union[Turn, str]) -> BasicBlock:
    t = parse_turn(turn) if isinstance(turn, str) else turn
    if not isinstance(t, SurdTurn):
        t = Fraction(t)
    return BasicBlock(K_N2_TRIV, turn=t)


def hyperbolic(dim: int) -> BasicBlock:
    return BasicBlock(K_HYP, dim=dim)


def _is_one(t: Turn) -> bool:
    return is_rational_turn(t) and Fraction(t) == 1


def _is_half(t: Turn) -> bool:
    return is_rational_turn(t) and Fraction(t) == Fraction(1, 2)


@dataclass(frozen=True)
class Counts:
    """Derived tallies of a decomposition, in normalized buckets."""

    p_minus: int
    p_zero: int
    p_plus: int
    q_minus: int
    q_zero: int
    q_plus: int
    rotations: tuple       # rotation turns with the half/full turns folded out
    nontrivial_angles: tuple
    trivial_angles: tuple
    hyperbolic_dim: int


@dataclass(frozen=True)
class Decomposition:
    n: int
    blocks: tuple

    def __init__(self, n: int, blocks: Iterable[BasicBlock]):
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "blocks", tuple(blocks))

    # -- derived counts (recomputed, never stored) -------------------------

    def counts(self) -> Counts:
        p_minus = p_zero = p_plus = q_minus = q_zero = q_plus = h = 0
        rots, nt, tv = [], [], []
        for b in self.blocks:
            k = b.kind
            if k == K_N1_PP:
                p_minus += 1
            elif k == K_I2:
                p_zero += 1
            elif k == K_N1_PM:
                p_plus += 1
            elif k == K_N1_MP:
                q_minus += 1
            elif k == K_MINUS_I2:
                q_zero += 1
            elif k == K_N1_MM:
                q_plus += 1
            elif k == K_ROT:
                if _is_one(b.turn):
                    p_zero += 1
                elif _is_half(b.turn):
                    q_zero += 1
                else:
                    rots.append(b.turn)
            elif k == K_N2_NONTRIV:
                nt.append(b.turn)
            elif k == K_N2_TRIV:
                tv.append(b.turn)
            elif k == K_HYP:
                h += b.dim or 0
        return Counts(p_minus, p_zero, p_plus, q_minus, q_zero, q_plus,
                      tuple(rots), tuple(nt), tuple(tv), h)

    def total_dim(self) -> int:
        return sum(b.real_dim() for b in self.blocks)

    # -- operations ---------------------------------------------------------

    def validate(self) -> list[str]:
        """All invariant violations, as data; empty list means valid."""
        bad = []
        if not isinstance(self.n, int) or self.n < 3:
            bad.append(f"sphere dimension n must be an integer >= 3, got {self.n!r}")
            return bad
        want = 2 * (self.n - 1)
        got = self.total_dim()
        if got != want:
            bad.append(f"blocks span dimension {got}, expected {want}")
        for b in self.blocks:
            if b.kind in _TURN_KINDS:
                t = b.turn
                if t is None:
                    bad.append(f"{b.kind} block missing its turn")
                    continue
                if isinstance(t, SurdTurn):
                    lo_ok = t > 0
                    hi_ok = t < 1
                    is_half = False
                else:
                    f = Fraction(t)
                    lo_ok = f > 0
                    hi_ok = f < 1 or (b.kind == K_ROT and f == 1)
                    is_half = f == Fraction(1, 2)
                if not (lo_ok and hi_ok):
                    bad.append(f"turn of {b} outside its admissible range")
                if b.kind in (K_N2_NONTRIV, K_N2_TRIV) and is_half:
                    bad.append(f"turn 1/2 not admissible for {b.kind}")
            elif b.kind == K_HYP:
                if not b.dim or b.dim <= 0 or b.dim % 2:
                    bad.append(f"hyperbolic block needs a positive even dim, got {b.dim!r}")
            elif b.kind not in _PLAIN_KINDS:
                bad.append(f"unknown block kind {b.kind!r}")
        return bad

    def is_valid(self) -> bool:
        return not self.validate()

    def elliptic_height(self) -> int:
        """Total algebraic multiplicity of unit-circle eigenvalues."""
        return sum(b.real_dim() for b in self.blocks if b.kind != K_HYP)

    def is_elliptic(self) -> bool:
        return self.elliptic_height() == 2 * (self.n - 1)

    def nullity_at_one(self) -> int:
        c = self.counts()
        return c.p_minus + 2 * c.p_zero + c.p_plus

    def splitting_defect(self) -> int:
        """sigma = 2*S^+(1) - nu(., 1), summed over blocks."""
        c = self.counts()
        sigma = 0
        for b in self.blocks:
            if b.kind == K_ROT and _is_one(b.turn):
                sigma += _SPLITTING[K_I2]
            else:
                sigma += _SPLITTING.get(b.kind, 0)
        assert sigma >= -(self.n - 1), (sigma, self.n, c)
        return sigma

    def rational_spectrum_denominators(self) -> list[int]:
        """Multiset of s for unit-circle eigenvalues exp(+-2*pi*i*r/s)."""
        out = []
        for b in self.blocks:
            k = b.kind
            if k in (K_N1_PP, K_I2, K_N1_PM):
                out.append(1)
            elif k in (K_N1_MP, K_MINUS_I2, K_N1_MM):
                out.append(2)
            elif k in _TURN_KINDS:
                if is_rational_turn(b.turn):
                    out.append(Fraction(b.turn).denominator)
        return sorted(out)

    def parity_constraint(self) -> Optional[int]:
        """Forced parity of the initial index (0 even, 1 odd), or None when a
        hyperbolic part leaves it unconstrained."""
        if any(b.kind == K_HYP for b in self.blocks):
            return None
        odd = sum(1 for b in self.blocks if b.kind in _ODD_FORCING)
        return odd % 2

    # -- serialization --------------------------------------------------------

    def to_dict(self) -> dict:
        items = []
        for b in self.blocks:
            entry: dict = {"kind": b.kind}
            if b.kind in _TURN_KINDS:
                entry["turn"] = format_turn(b.turn)
            if b.kind == K_HYP:
                entry["dim"] = b.dim
            items.append(entry)
        return {"n": self.n, "blocks": items}

    @classmethod
    def from_dict(cls, data: dict) -> "Decomposition":
        if not isinstance(data, dict) or "n" not in data or "blocks" not in data:
            raise ParseError("decomposition object needs 'n' and 'blocks'")
        blocks = []
        for item in data["blocks"]:
            kind = item.get("kind")
            if kind in _TURN_KINDS:
                if "turn" not in item:
                    raise ParseError(f"{kind} block missing 'turn'")
                t = parse_turn(item["turn"])
                blocks.append(BasicBlock(kind, turn=t if isinstance(t, SurdTurn) else Fraction(t)))
            elif kind == K_HYP:
                if "dim" not in item:
                    raise ParseError("hyperbolic block missing 'dim'")
                blocks.append(BasicBlock(kind, dim=int(item["dim"])))
            elif kind in _PLAIN_KINDS:
                blocks.append(BasicBlock(kind))
            else:
                raise ParseError(f"unknown block kind {kind!r}")
        return cls(int(data["n"]), blocks)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "Decomposition":
        return cls.from_dict(json.loads(text))

    def __str__(self):
        inner = " <> ".join(str(b) for b in self.blocks)
        return f"Sp({2 * (self.n - 1)}): {inner}"


def validate(d: Decomposition) -> list[str]:
    return d.validate()


def block_approx_angles(d: Decomposition) -> list[float]:
    """Float previews of all turn-bearing blocks, for report sidecars only."""
    return [turn_approx(b.turn) for b in d.blocks if b.kind in _TURN_KINDS]
