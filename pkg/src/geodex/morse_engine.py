"""Critical type numbers, local critical-module dimensions, Euler
characteristics and their period averages, Morse counts against the
loop-space Betti numbers, and the mean index identity.

Type-number bookkeeping.  For a geodesic with minimal period T, the graded
type tuple of an iterate c^m depends only on g = gcd(m, T) (iterates with
the same divisor signature share nullities, hence share local data).  A
dressed geodesic therefore stores one tuple per *degenerate divisor class*
g | T; nondegenerate iterates are forced: (1) on even index jumps, (0) on
odd ones.

Admissibility of a tuple (k_0, ..., k_nu) for orientation sign beta:
  * k_0, k_nu in {0, 1}; k_0 = 0 when beta = -1; all entries >= 0;
  * nu = 0 forces exactly (1) for beta = +1 and (0) for beta = -1;
  * k_0 = 1 forces the rest to vanish;
  * k_nu = 1 forces the lower entries to vanish;
  * an interior nonzero entry forces k_0 = k_nu = 0.
Interior entries have no a-priori upper bound; enumeration uses a
configurable cap (default 2) and reports when it saturates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Mapping, Optional, Sequence

from .exact_numbers import SurdSum, exact_sum
from .index_iteration import GeodesicModel, index_at, minimal_period, nullity_at
from .loop_homology import betti, constant_B

DEFAULT_INTERIOR_CAP = 2

TypeTuple = tuple


class TypeNumberError(ValueError):
    """Missing or inadmissible critical type data."""


def admissibility_violations(nu: int, beta: int, tup: Sequence[int]) -> list[str]:
    bad = []
    tup = tuple(tup)
    if len(tup) != nu + 1:
        return [f"tuple for nullity {nu} must have {nu + 1} entries, got {len(tup)}"]
    if any(k < 0 for k in tup):
        bad.append("negative entry")
    if nu == 0:
        want = (1,) if beta == 1 else (0,)
        if tup != want:
            bad.append(f"nondegenerate class with sign {beta:+d} forces {want}")
        return bad
    if tup[0] not in (0, 1):
        bad.append("k_0 must be 0 or 1")
    if tup[-1] not in (0, 1):
        bad.append("top entry must be 0 or 1")
    if beta == -1 and tup[0] != 0:
        bad.append("k_0 vanishes on odd-jump classes")
    interior = tup[1:-1]
    if tup[0] == 1 and any(tup[1:]):
        bad.append("k_0 = 1 excludes all higher entries")
    if tup[-1] == 1 and any(tup[:-1]):
        bad.append("top entry 1 excludes all lower entries")
    if any(interior) and (tup[0] or tup[-1]):
        bad.append("an interior entry excludes both ends")
    return bad


def enumerate_admissible_types(nu: int, beta: int,
                               interior_cap: int = DEFAULT_INTERIOR_CAP) -> list[TypeTuple]:
    """Every admissible tuple for the given nullity and sign, duplicate-free.

    Interior entries range over 0..interior_cap; tuples whose interior hits
    the cap are still returned (the cap is an enumeration budget, not an
    invariant).
    """
    if nu < 0:
        raise ValueError("nullity must be >= 0")
    if beta not in (1, -1):
        raise ValueError("beta must be +1 or -1")
    if nu == 0:
        return [(1,)] if beta == 1 else [(0,)]
    out = [tuple([0] * (nu + 1))]
    if beta == 1:
        out.append(tuple([1] + [0] * nu))
    out.append(tuple([0] * nu + [1]))
    if nu >= 2:
        interiors = [[]]
        for _ in range(nu - 1):
            interiors = [cur + [v] for cur in interiors for v in range(interior_cap + 1)]
        for inner in interiors:
            if any(inner):
                out.append(tuple([0] + inner + [0]))
    return out


@dataclass(frozen=True)
class DressedGeodesic:
    """A geodesic model plus graded type tuples for its degenerate classes.

    ``types`` maps a canonical class g (a divisor of the minimal period with
    nullity_at(g) > 0) to its tuple (k_0, ..., k_nu).  Tuples keyed by a
    non-canonical m are accepted and resolved through gcd(m, T).
    """

    model: GeodesicModel
    types: Mapping[int, TypeTuple] = None

    def __post_init__(self):
        object.__setattr__(self, "types", dict(self.types or {}))

    @property
    def label(self) -> str:
        return self.model.label

    def period(self) -> int:
        return minimal_period(self.model)


def degenerate_classes(model: GeodesicModel) -> dict[int, dict]:
    """Divisor classes g | T with positive nullity: g -> {nu, beta}."""
    t = minimal_period(model)
    out = {}
    for g in range(1, t + 1):
        if t % g:
            continue
        nu = nullity_at(model, g)
        if nu > 0:
            out[g] = {"nu": nu, "beta": beta_sign(model, g)}
    return out


def beta_sign(model: GeodesicModel, m: int) -> int:
    return -1 if (index_at(model, m) - model.initial_index) % 2 else 1


def type_tuple_at(dg: DressedGeodesic, m: int) -> TypeTuple:
    """Graded tuple of the m-th iterate; forced for nondegenerate iterates."""
    nu = nullity_at(dg.model, m)
    beta = beta_sign(dg.model, m)
    if nu == 0:
        return (1,) if beta == 1 else (0,)
    t = minimal_period(dg.model)
    g = gcd(m, t)
    tup = dg.types.get(g)
    if tup is None:
        tup = dg.types.get(m)
    if tup is None:
        raise TypeNumberError(
            f"no type tuple for degenerate class m={m} (canonical {g}) of "
            f"{dg.label or dg.model!r}")
    return tuple(tup)


def validate_types(dg: DressedGeodesic) -> list[str]:
    """Violations of the type-number calculus for the supplied tuples."""
    bad = []
    model = dg.model
    t = minimal_period(model)
    classes = degenerate_classes(model)
    canon: dict[int, TypeTuple] = {}
    for key in dg.types:
        g = gcd(key, t)
        if g not in classes:
            bad.append(f"class {key} (canonical {g}) is nondegenerate; its "
                       f"tuple is forced and must not be supplied")
            continue
        tup = tuple(dg.types[key])
        if g in canon and canon[g] != tup:
            bad.append(f"classes {key} and {g} share gcd {g} but disagree")
        canon[g] = tup
    for g, info in classes.items():
        tup = canon.get(g)
        if tup is None:
            bad.append(f"missing type tuple for degenerate class {g} "
                       f"(nullity {info['nu']})")
            continue
        for v in admissibility_violations(info["nu"], info["beta"], tup):
            bad.append(f"class {g}: {v}")
    # monotonicity across nested classes: a top local maximum at g forces the
    # lower entries of every class dividing g to vanish
    for g, info in classes.items():
        tup = canon.get(g)
        if not tup or tup[-1] != 1:
            continue
        for g2, info2 in classes.items():
            if g2 != g and g % g2 == 0:
                low = canon.get(g2)
                if low and any(low[:-1]):
                    bad.append(f"class {g} is a top local maximum, so class "
                               f"{g2} must vanish below its top entry")
    return bad


def critical_dim(dg: DressedGeodesic, m: int, q: int) -> int:
    """dim of the degree-q local critical module of the m-th iterate."""
    i = index_at(dg.model, m)
    nu = nullity_at(dg.model, m)
    if nu == 0:
        even_jump = (i - dg.model.initial_index) % 2 == 0
        return 1 if (even_jump and q == i) else 0
    j = q - i
    if j < 0 or j > nu:
        return 0
    return type_tuple_at(dg, m)[j]


def euler_char(dg: DressedGeodesic, m: int) -> int:
    """chi(c^m) = sum_l (-1)^(i + l) k_l, over the graded tuple."""
    i = index_at(dg.model, m)
    tup = type_tuple_at(dg, m)
    sign = 1 if i % 2 == 0 else -1
    total = 0
    for l, k in enumerate(tup):
        total += (sign if l % 2 == 0 else -sign) * k
    return total


def average_euler(dg: DressedGeodesic) -> Fraction:
    """Period average of the Euler characteristics, an exact rational."""
    t = minimal_period(dg.model)
    return Fraction(sum(euler_char(dg, m) for m in range(1, t + 1)), t)


@dataclass(frozen=True)
class IdentityReport:
    lhs: SurdSum
    rhs: Fraction
    holds: bool
    residue: SurdSum
    per_geodesic: tuple

    def to_dict(self) -> dict:
        return {
            "lhs": str(self.lhs),
            "lhs_approx": self.lhs.approx(),
            "rhs": str(self.rhs),
            "holds": self.holds,
            "residue": str(self.residue),
            "terms": [
                {"label": lab, "chi_hat": str(ch), "mean_index": str(ih),
                 "ratio": str(ratio)}
                for lab, ch, ih, ratio in self.per_geodesic
            ],
        }


def mean_index_identity(config: Sequence[DressedGeodesic], n: int,
                        chi_hat_override: Optional[Mapping[str, Fraction]] = None,
                        ) -> IdentityReport:
    """Exact test of  sum_j chi_hat(c_j) / ihat(c_j) = B(n, 1).

    Surd mean indices are handled symbolically; the report carries the exact
    residue so a caller can see how the irrational parts failed to cancel.
    """
    from .index_iteration import mean_index

    terms = []
    lhs = SurdSum()
    for dg in config:
        ih = mean_index(dg.model)
        if ih.sign() <= 0:
            raise ValueError(f"mean index of {dg.label or dg.model!r} is not positive")
        if chi_hat_override and dg.label in chi_hat_override:
            ch = Fraction(chi_hat_override[dg.label])
        else:
            ch = average_euler(dg)
        ratio = SurdSum.from_value(ch) / ih
        terms.append((dg.label, ch, ih, ratio))
        lhs = lhs + ratio
    rhs = constant_B(n)
    residue = lhs - rhs
    return IdentityReport(lhs, rhs, residue.is_zero(), residue, tuple(terms))


def _window_range(window, label: str) -> tuple[int, int]:
    if isinstance(window, int):
        return 1, window
    if isinstance(window, (tuple, list)) and len(window) == 2:
        return int(window[0]), int(window[1])
    raise ValueError(f"window for {label!r} must be an int bound or (lo, hi)")


def morse_count(config: Sequence[DressedGeodesic], q: int, windows) -> int:
    """M_q over per-geodesic iterate windows (energy sublevels are out of
    scope; windows are iterate ranges)."""
    total = 0
    for dg in config:
        key = dg.label
        w = windows[key] if isinstance(windows, Mapping) else windows
        lo, hi = _window_range(w, key)
        for m in range(max(lo, 1), hi + 1):
            total += critical_dim(dg, m, q)
    return total


@dataclass(frozen=True)
class MorseReport:
    rows: tuple              # (q, M_q, b_q, rank_ok, alt_ok)
    ok: bool
    first_violation: Optional[dict]

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "first_violation": self.first_violation,
            "rows": [{"q": q, "M": M, "b": b, "rank_ok": r, "alternating_ok": a}
                     for q, M, b, r, a in self.rows],
        }


def morse_inequalities(config: Sequence[DressedGeodesic], n: int, q_max: int,
                       windows) -> MorseReport:
    """Rank and alternating Morse inequalities up to q_max over the windows.

    A violated instance certifies that no geodesic system realizes the
    configuration with these windows.
    """
    ms = [morse_count(config, q, windows) for q in range(q_max + 1)]
    bs = [betti(n, q) for q in range(q_max + 1)]
    rows = []
    ok = True
    first = None
    alt_m = 0
    alt_b = 0
    for q in range(q_max + 1):
        alt_m = ms[q] - alt_m
        alt_b = bs[q] - alt_b
        rank_ok = ms[q] >= bs[q]
        alt_ok = alt_m >= alt_b
        rows.append((q, ms[q], bs[q], rank_ok, alt_ok))
        if not (rank_ok and alt_ok) and ok:
            ok = False
            first = {"q": q, "M": ms[q], "b": bs[q],
                     "kind": "rank" if not rank_ok else "alternating",
                     "alt_M": alt_m, "alt_b": alt_b}
    return MorseReport(tuple(rows), ok, first)


def lemma75_bridge(m_values: Sequence[int], b_values: Sequence[int],
                   k: int) -> Optional[tuple[int, int]]:
    """Given M_k = b_k, both truncated alternating sums at k and k-1 must
    agree; returns their residues (Morse side minus Betti side), which vanish
    for a consistent configuration.  None when the precondition fails.
    """
    if k < 0 or k >= len(m_values) or k >= len(b_values):
        raise ValueError("k outside the supplied tables")
    if m_values[k] != b_values[k]:
        return None

    def alt(values, top):
        total = 0
        sign = 1
        for q in range(top, -1, -1):
            total += sign * values[q]
            sign = -sign
        return total

    res_k = alt(m_values, k) - alt(b_values, k)
    res_k1 = (alt(m_values, k - 1) - alt(b_values, k - 1)) if k >= 1 else 0
    return res_k, res_k1


def nondegenerate_dressed(model: GeodesicModel) -> DressedGeodesic:
    """Dress a model that has no degenerate iterate classes."""
    dg = DressedGeodesic(model, {})
    missing = degenerate_classes(model)
    if missing:
        raise TypeNumberError(
            f"{model.label or model!r} has degenerate classes {sorted(missing)}; "
            f"supply type tuples")
    return dg
