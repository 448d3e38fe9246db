"""Iterated Morse indices and nullities of closed geodesics from the basic
normal form of the linearized Poincare map.

Everything reduces to the closed iteration formulas: writing p = p- + p0,
Q = q- + 2*q0 + q+ and letting t_j run over the rotation turns,

  i(c^m)  = m*(i(c) + p - r) + 2*sum_j E(m*t_j) - (r + p)
            - [m even]*(q0 + q+) - 2*#{rational non-trivial twist angles
                                       whose denominator divides m}
  nu(c^m) = nu(c) + [m even]*Q + 2*#{rational angles whose denominator
                                     divides m}

with E the exact ceiling.  Surd angles never hit an integer, so their
floor/ceiling corrections are constant and fold into the constants above.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Optional

from . import _kernels
from .exact_numbers import SurdSum, ceil_of, exact_sum, is_rational_turn, scale
from .normal_forms import Decomposition

MAX_PROFILE_ROWS = 10 ** 7
_EXACT_CHECK_ROWS = 10 ** 5


@dataclass(frozen=True)
class GeodesicModel:
    decomposition: Decomposition
    initial_index: int
    label: str = ""

    @property
    def n(self) -> int:
        return self.decomposition.n

    def to_dict(self) -> dict:
        out = self.decomposition.to_dict()
        out["index"] = self.initial_index
        if self.label:
            out["label"] = self.label
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "GeodesicModel":
        dec = Decomposition.from_dict(data)
        return cls(dec, int(data["index"]), str(data.get("label", "")))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "GeodesicModel":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class _Coeffs:
    k_lin: int
    k_const: int
    k_even: int
    rotations: tuple            # all rotation turns (rational and surd)
    nu_one: int
    q_weight: int
    null_dens: tuple            # denominators of every rational angle
    phi_dens: tuple             # denominators of rational non-trivial twists
    all_rational: bool


@lru_cache(maxsize=512)
def _coeffs(g: GeodesicModel) -> _Coeffs:
    c = g.decomposition.counts()
    r = len(c.rotations)
    p = c.p_minus + c.p_zero
    null_dens = []
    all_rational = True
    for t in c.rotations:
        if is_rational_turn(t):
            null_dens.append(Fraction(t).denominator)
        else:
            all_rational = False
    phi_dens = []
    for t in c.nontrivial_angles:
        if is_rational_turn(t):
            s = Fraction(t).denominator
            phi_dens.append(s)
            null_dens.append(s)
    for t in c.trivial_angles:
        if is_rational_turn(t):
            null_dens.append(Fraction(t).denominator)
    return _Coeffs(
        k_lin=g.initial_index + p - r,
        k_const=-(r + p),
        k_even=-(c.q_zero + c.q_plus),
        rotations=c.rotations,
        nu_one=c.p_minus + 2 * c.p_zero + c.p_plus,
        q_weight=c.q_minus + 2 * c.q_zero + c.q_plus,
        null_dens=tuple(null_dens),
        phi_dens=tuple(phi_dens),
        all_rational=all_rational,
    )


def index_at(g: GeodesicModel, m: int) -> int:
    """Exact Morse index of the m-th iterate."""
    if m < 1:
        raise ValueError("iterate count must be >= 1")
    co = _coeffs(g)
    acc = m * co.k_lin + co.k_const
    for t in co.rotations:
        acc += 2 * ceil_of(scale(t, m))
    if m % 2 == 0:
        acc += co.k_even
    for s in co.phi_dens:
        if m % s == 0:
            acc -= 2
    return acc


def nullity_at(g: GeodesicModel, m: int) -> int:
    """Exact nullity of the m-th iterate; always in [0, 2(n-1)]."""
    if m < 1:
        raise ValueError("iterate count must be >= 1")
    co = _coeffs(g)
    nv = co.nu_one
    if m % 2 == 0:
        nv += co.q_weight
    for s in co.null_dens:
        if m % s == 0:
            nv += 2
    return nv


def iteration_table(g: GeodesicModel, mmax: int) -> tuple[list[int], list[int]]:
    """(index, nullity) for m = 1..mmax, through the compiled kernel when the
    model is rational and the run fits int64, else the exact path."""
    if mmax < 1:
        raise ValueError("mmax must be >= 1")
    co = _coeffs(g)
    if co.all_rational:
        nums = [Fraction(t).numerator for t in co.rotations]
        dens = [Fraction(t).denominator for t in co.rotations]
        if _kernels.table_fits_int64(mmax, co.k_lin, nums, co.q_weight):
            return _kernels.rational_iteration_table(
                mmax, co.k_lin, co.k_const, co.k_even, nums, dens,
                co.nu_one, co.q_weight, list(co.null_dens), list(co.phi_dens))
    idx = [0] * mmax
    nul = [0] * mmax
    for m in range(1, mmax + 1):
        idx[m - 1] = index_at(g, m)
        nul[m - 1] = nullity_at(g, m)
    return idx, nul


def mean_index(g: GeodesicModel) -> SurdSum:
    """Exact mean index: i(c) + p- + p0 - r + sum_j 2*t_j."""
    c = g.decomposition.counts()
    base = g.initial_index + c.p_minus + c.p_zero - len(c.rotations)
    return exact_sum([base] + [scale(t, 2) for t in c.rotations])


def beta_at(g: GeodesicModel, m: int) -> int:
    """Orientation sign (-1)**(i(c^m) - i(c)) of the m-th iterate."""
    return -1 if (index_at(g, m) - g.initial_index) % 2 else 1


def parity_check(g: GeodesicModel) -> Optional[str]:
    """None when the initial index has the parity the blocks force."""
    want = g.decomposition.parity_constraint()
    if want is None or g.initial_index % 2 == want:
        return None
    return (f"initial index {g.initial_index} has the wrong parity: "
            f"blocks force {'odd' if want else 'even'}")


@lru_cache(maxsize=512)
def minimal_period(g: GeodesicModel) -> int:
    """Least T with nullity T-periodic and all index jumps over T even."""
    dens = g.decomposition.rational_spectrum_denominators()
    t0 = 1
    for s in dens:
        t0 = lcm(t0, s)
    idx, _ = iteration_table(g, 2 * t0)
    if any((idx[p - 1 + t0] - idx[p - 1]) % 2 for p in range(1, t0 + 1)):
        return 2 * t0
    return t0


@dataclass(frozen=True)
class IndexProfile:
    label: str
    n: int
    rows: tuple                      # (m, index, nullity)
    mean_index: SurdSum
    elliptic_height: int
    period: int

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "n": self.n,
            "mean_index": str(self.mean_index),
            "mean_index_approx": self.mean_index.approx(),
            "elliptic_height": self.elliptic_height,
            "T": self.period,
            "rows": [{"m": m, "index": i, "nullity": nu} for m, i, nu in self.rows],
        }


def index_profile(g: GeodesicModel, m_max: int) -> IndexProfile:
    """Tabulate iterates 1..m_max; enforces |i(c^m) - m*ihat| <= n-1."""
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    if m_max > MAX_PROFILE_ROWS:
        raise ValueError(f"m_max {m_max} exceeds the profile cap {MAX_PROFILE_ROWS}; "
                         f"use streaming evaluation instead")
    idx, nul = iteration_table(g, m_max)
    ihat = mean_index(g)
    bound = g.n - 1
    if ihat.is_rational():
        u = ihat.rational_part().numerator
        v = ihat.rational_part().denominator
        for m in range(1, m_max + 1):
            if abs(idx[m - 1] * v - m * u) > bound * v:
                raise AssertionError(
                    f"mean-index drift bound broken at m={m} for {g.label!r}")
    else:
        step = max(1, m_max // _EXACT_CHECK_ROWS)
        for m in list(range(1, m_max + 1, step)) + [m_max]:
            drift = SurdSum.from_value(idx[m - 1]) - ihat * m
            if drift > bound or drift < -bound:
                raise AssertionError(
                    f"mean-index drift bound broken at m={m} for {g.label!r}")
    rows = tuple((m, idx[m - 1], nul[m - 1]) for m in range(1, m_max + 1))
    return IndexProfile(g.label, g.n, rows, ihat,
                        g.decomposition.elliptic_height(), minimal_period(g))


def model_from_turns(n: int, turns, initial_index: int, label: str = "") -> GeodesicModel:
    """Convenience: an all-rotation model on S^n from a list of turns."""
    from .normal_forms import rotation

    dec = Decomposition(n, [rotation(t) for t in turns])
    return GeodesicModel(dec, initial_index, label)
