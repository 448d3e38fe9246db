"""Mechanical replay of the two-geodesic elimination arguments on S^3,
plus the structural filters used on general spheres.

Given a hypothetical pair (c1, c2) of prime closed geodesics with c1 a pair
of irrational rotations, the eliminator

  1. finds a common index jump certificate whose level pins the top class
     carried by c1 (i(c1^{2m1}) + nu = 2N + 2);
  2. scans, with exact arithmetic, every iterate whose local critical
     modules can touch the degree window [2N-3, 2N+2] or the low degrees;
  3. enumerates every admissible assignment of critical type tuples to the
     degenerate iterate classes of both curves; and
  4. demands that each branch violate a Morse inequality (rank or
     alternating) or the exact mean index identity.

A branch that survives everything is surfaced as a witness, which would
indicate either an implementation bug or a genuine gap.

The one-step index estimate i(c^{m+1}) >= i(c^m) + nu(c^m), valid here
because every admitted model has initial index at least its half elliptic
height, makes i and i + nu nondecreasing in m, so the window scans are
finite and their complements provably cannot contribute.
"""

from __future__ import annotations

import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .exact_numbers import SurdSum, SurdTurn, format_turn, is_rational_turn, parse_turn
from .index_iteration import (
    GeodesicModel,
    index_at,
    mean_index,
    minimal_period,
    model_from_turns,
    nullity_at,
    parity_check,
)
from .index_jump import JumpCertificate, find_jump, jump_checks
from .loop_homology import betti, constant_B
from .morse_engine import enumerate_admissible_types
from .normal_forms import (
    BasicBlock,
    Decomposition,
    K_HYP,
    K_I2,
    K_MINUS_I2,
    K_N1_MM,
    K_N1_MP,
    K_N1_PM,
    K_N1_PP,
    K_N2_NONTRIV,
    K_N2_TRIV,
    K_ROT,
    N1_MINUS_PLUS,
    N1_PLUS_MINUS,
    hyperbolic,
    n2_nontrivial,
    n2_trivial,
    rotation,
)

# citation tags attached to derived facts and contradictions; they key the
# elimination playbook steps for cross-referencing in reports
CITE_MEAN_INDEX_GATE = "Lemma 7.1"
CITE_TOP_CLASS = "(7.15)"
CITE_LEVEL_PIN = {"case1": "(7.28)", "case2": "(7.59)", "case3": "(7.59)",
                  "case4": "(7.59)", "case5": "(7.77)", "case6": "(7.77)"}
CITE_IDENTITY = {"case1": "(7.46)", "case2": "(7.69)", "case3": "(7.76)",
                 "case5": "(7.46)", "case6": "(7.46)"}
CITE_BETTI_EXCESS = "(7.78)"
CITE_RANK_WINDOW = "(7.20)"
CITE_LOW_ALTERNATING = "(7.33)"
CITE_WINDOW_ALTERNATING = "(7.39)"
CITE_BRIDGE = {1: "(7.41)", 2: "(7.50)"}
CITE_BRIDGE_ONESIDED = "(7.64)"
CITE_HALF_PERIOD = "(7.55)"
CITE_RATIO_BOUND = "(7.42)"

LOW_DEGREE_MAX = 6
MAX_BRANCHES = 200_000


class CaseError(ValueError):
    pass


def fold_for_classification(block: BasicBlock):
    """(kind, turn) with the +-identity-like blocks folded into rotations."""
    if block.kind in (K_N1_PP, K_I2):
        return (K_ROT, Fraction(1))
    if block.kind in (K_N1_MM, K_MINUS_I2):
        return (K_ROT, Fraction(1, 2))
    if block.kind == K_ROT:
        return (K_ROT, block.turn)
    return (block.kind, block.turn)


def classify_case(c2: GeodesicModel) -> str:
    """Which of the six S^3 shapes the second curve falls into."""
    dec = c2.decomposition
    if dec.n != 3:
        raise CaseError("case classification is specific to S^3")
    bad = dec.validate()
    if bad:
        raise CaseError(f"invalid decomposition: {bad}")
    folded = [fold_for_classification(b) for b in dec.blocks]
    rots = [t for k, t in folded if k == K_ROT]
    rat_rots = [t for t in rots if is_rational_turn(t)]
    others = [k for k, _ in folded if k != K_ROT]
    if len(rots) == 2:
        if len(rat_rots) == 2:
            return "case1"
        if len(rat_rots) == 1:
            return "case5"
        return "case6"
    if len(rots) == 1 and rat_rots:
        other = others[0]
        if other == K_N1_MP:
            return "case2"
        if other == K_N1_PM:
            return "case3"
        if other == K_HYP:
            return "case4"
        return "case6"
    return "case6"


def claim3_filter(d: Decomposition) -> dict:
    """Structural predicates for the elliptic-with-irrational-rotation claim;
    the type-number clause is homological and reported as not applicable."""
    c = d.counts()
    surd_rots = [t for t in c.rotations if not is_rational_turn(t)]
    no_pair = True
    for t in surd_rots:
        mirror = SurdTurn(t.c - t.a, -t.b, t.c, t.d)
        if sum(1 for u in surd_rots if u == mirror):
            no_pair = False
            break
    return {
        "i": d.elliptic_height() == 2 * (d.n - 1),
        "ii": c.p_minus == 0 and c.q_plus == 0 and len(c.nontrivial_angles) == 0,
        "iii": all(is_rational_turn(t) for t in c.trivial_angles),
        "iv": no_pair,
        "v": None,
        "vi": bool(surd_rots),
    }


def elliptic_parabolic_test(g: GeodesicModel) -> bool:
    """True when every block is a rotation, an eigenvalue +-1 block, or a
    trivial twist block with rational angle; no hyperbolic part."""
    for b in g.decomposition.blocks:
        if b.kind == K_HYP or b.kind == K_N2_NONTRIV:
            return False
        if b.kind == K_N2_TRIV and not is_rational_turn(b.turn):
            return False
    return True


def hingston_applicable(g: GeodesicModel, types: Sequence[int],
                        m_check: int = 1000) -> bool:
    """Iterate growth cap i + nu <= m(i(c) + nu(c)) - (n-1)(m-1) together
    with a nonvanishing top type number of the prime curve.

    For models built only from identity pairs and N1(1,-1) blocks spanning
    the full dimension the cap is an identity for every m, detected
    symbolically; otherwise the first m_check iterates are checked exactly.
    """
    tup = tuple(types)
    nu1 = nullity_at(g, 1)
    if len(tup) != nu1 + 1:
        raise ValueError(f"type tuple must have {nu1 + 1} entries")
    if tup[-1] == 0:
        return False
    c = g.decomposition.counts()
    n = g.n
    jordan_family = (
        not c.rotations and not c.nontrivial_angles and not c.trivial_angles
        and c.hyperbolic_dim == 0 and c.p_minus == 0
        and c.q_minus == c.q_zero == c.q_plus == 0
        and c.p_zero + c.p_plus == n - 1
    )
    if jordan_family:
        return True
    i1 = g.initial_index
    from .index_iteration import iteration_table

    idx, nul = iteration_table(g, m_check)
    cap0 = i1 + nu1
    for m in range(1, m_check + 1):
        if idx[m - 1] + nul[m - 1] > m * cap0 - (n - 1) * (m - 1):
            return False
    return True


# ---------------------------------------------------------------------------
# elimination engine
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EliminationOptions:
    eps: Fraction = Fraction(1, 8)
    n_bound: int = 10 ** 6
    interior_cap: int = 2
    allow_any_c1: bool = False


@dataclass
class EliminationReport:
    case_label: str
    status: str                      # eliminated | not-eliminated
    reason: str = ""
    derived_facts: list = field(default_factory=list)   # (name, exact str, cite)
    contradiction: Optional[dict] = None
    branch_total: int = 0
    kill_counts: dict = field(default_factory=dict)
    witness: Optional[dict] = None
    certificate: Optional[dict] = None

    @property
    def eliminated(self) -> bool:
        return self.status == "eliminated"

    def to_dict(self) -> dict:
        return {
            "case": self.case_label,
            "status": self.status,
            "reason": self.reason,
            "derived_facts": [
                {"name": n, "value": v, "cite": c} for n, v, c in self.derived_facts
            ],
            "contradiction": self.contradiction,
            "branches": self.branch_total,
            "kills": self.kill_counts,
            "witness": self.witness,
            "certificate": self.certificate,
        }


@dataclass(frozen=True)
class _ClassKey:
    who: int           # 0 = c1, 1 = c2
    g: int             # canonical divisor class


class _GeoData:
    """Branch-independent scan data for one geodesic."""

    def __init__(self, who: int, model: GeodesicModel, n_value: int, m_j: int,
                 interior_cap: int):
        self.who = who
        self.model = model
        self.t = minimal_period(model)
        self.i1 = model.initial_index
        lo_q = 2 * n_value - 3
        hi_q = 2 * n_value + 2
        # period profile: per m in 1..T the class key (None if forced) and
        # the data needed for chi
        self.profile = []
        for m in range(1, self.t + 1):
            i_m = index_at(model, m)
            nu_m = nullity_at(model, m)
            cls = _ClassKey(who, gcd(m, self.t)) if nu_m else None
            self.profile.append((cls, i_m % 2, (i_m - self.i1) % 2 == 0))
        # window scan around 2 m_j
        self.window = self._scan(max(1, 2 * m_j), lo_q, hi_q, anchor=2 * m_j)
        self.window_prefix = self.window[0][0] - 1 if self.window else 2 * m_j
        # low-degree scan from m = 1
        self.low = []
        m = 1
        while True:
            i_m = index_at(model, m)
            if i_m > LOW_DEGREE_MAX:
                break
            self.low.append((m, i_m, nullity_at(model, m),
                             _ClassKey(who, gcd(m, self.t)) if nullity_at(model, m) else None))
            m += 1
        # admissible tuple menu per degenerate class
        self.class_info = {}
        for g in range(1, self.t + 1):
            if self.t % g:
                continue
            nu_g = nullity_at(model, g)
            if nu_g:
                beta = 1 if (index_at(model, g) - self.i1) % 2 == 0 else -1
                self.class_info[_ClassKey(who, g)] = {
                    "nu": nu_g, "beta": beta,
                    "menu": enumerate_admissible_types(nu_g, beta, interior_cap),
                }

    def _scan(self, start: int, lo_q: int, hi_q: int, anchor: int):
        rows = {}
        m = anchor
        while m >= 1:
            i_m = index_at(self.model, m)
            rows[m] = (i_m, nullity_at(self.model, m))
            if i_m < lo_q:
                break
            m -= 1
        m = anchor + 1
        while True:
            i_m = index_at(self.model, m)
            if i_m > hi_q:
                break
            rows[m] = (i_m, nullity_at(self.model, m))
            m += 1
        out = []
        for m in sorted(rows):
            i_m, nu_m = rows[m]
            cls = _ClassKey(self.who, gcd(m, self.t)) if nu_m else None
            out.append((m, i_m, nu_m, cls))
        return out

    def max_chi_hat(self) -> Fraction:
        """Largest period-average Euler characteristic any admissible
        assignment of type tuples can realize for this curve."""
        total = 0
        for cls, parity, even_jump in self.profile:
            sign = 1 if parity == 0 else -1
            if cls is None:
                total += sign if even_jump else 0
            else:
                menu = self.class_info[cls]["menu"]
                total += max(sign * sum((k if l % 2 == 0 else -k)
                                        for l, k in enumerate(tup))
                             for tup in menu)
        return Fraction(total, self.t)

    # -- branch-dependent evaluations ---------------------------------------

    def chi_list(self, branch) -> list[int]:
        out = []
        for cls, parity, even_jump in self.profile:
            sign = 1 if parity == 0 else -1
            if cls is None:
                out.append(sign if even_jump else 0)
            else:
                tup = branch[cls]
                out.append(sign * sum((k if l % 2 == 0 else -k)
                                      for l, k in enumerate(tup)))
        return out

    def chi_prefix(self, branch, upto: int, chis: list[int]) -> int:
        if upto <= 0:
            return 0
        total = sum(chis)
        full, rem = divmod(upto, self.t)
        return full * total + sum(chis[:rem])


def _contribution(rows, branch, q, i1) -> int:
    """M_q over the scanned iterates."""
    total = 0
    for m, i_m, nu_m, cls in rows:
        if nu_m == 0:
            if q == i_m and (i_m - i1) % 2 == 0:
                total += 1
        else:
            l = q - i_m
            if 0 <= l <= nu_m:
                total += branch[cls][l]
    return total


def _w_sum(rows, branch, q, i1) -> int:
    """sum_m sum_{q' <= q} (-1)^{q'} dim C_{q'}(c^m) over scanned iterates."""
    total = 0
    for m, i_m, nu_m, cls in rows:
        if i_m > q:
            continue
        sign = 1 if i_m % 2 == 0 else -1
        if nu_m == 0:
            if (i_m - i1) % 2 == 0:
                total += sign
        else:
            tup = branch[cls]
            top = min(nu_m, q - i_m)
            acc = 0
            for l in range(top + 1):
                acc += (sign if l % 2 == 0 else -sign) * tup[l]
            total += acc
    return total


def _betti_alt(n: int, q: int) -> int:
    total = 0
    sign = 1
    for q2 in range(q, -1, -1):
        total += sign * betti(n, q2)
        sign = -sign
    return total


def _prune_2_7(assignment) -> bool:
    """Top local maxima propagate down divisor chains (graded projection)."""
    for key, tup in assignment.items():
        if tup[-1] != 1:
            continue
        for key2, tup2 in assignment.items():
            if key2.who == key.who and key2.g != key.g and key.g % key2.g == 0:
                if any(tup2[:-1]):
                    return False
    return True


def _not_eliminated(case: str, reason_kind: str, message: str,
                    facts=None, witness=None, cert=None) -> EliminationReport:
    return EliminationReport(
        case_label=case, status="not-eliminated",
        reason=f"{reason_kind}: {message}",
        derived_facts=facts or [], witness=witness, certificate=cert)


def eliminate(c1: GeodesicModel, c2: GeodesicModel,
              options: EliminationOptions = EliminationOptions(),
              ) -> EliminationReport:
    """Run the full elimination pipeline on a hypothetical pair (c1, c2)."""
    case = classify_case(c2)
    facts: list = []

    for g, name in ((c1, "c1"), (c2, "c2")):
        bad = g.decomposition.validate()
        if bad:
            return _not_eliminated(case, "precondition", f"{name} invalid: {bad}")
        msg = parity_check(g)
        if msg:
            return _not_eliminated(case, "precondition", f"{name}: {msg}")
        if g.initial_index < g.n - 1:
            return _not_eliminated(case, "precondition",
                                   f"{name}: initial index below n-1")

    c1_counts = c1.decomposition.counts()
    c1_standard = (len(c1_counts.rotations) == 2
                   and all(not is_rational_turn(t) for t in c1_counts.rotations))
    if not c1_standard and not options.allow_any_c1:
        return _not_eliminated(case, "precondition",
                               "c1 must be a pair of irrational rotations")
    if not c1_standard:
        facts.append(("c1_shape_override", "enabled", CITE_TOP_CLASS))

    ih1, ih2 = mean_index(c1), mean_index(c2)
    for ih, name in ((ih1, "c1"), (ih2, "c2")):
        if not ih > 2:
            return _not_eliminated(
                case, "precondition",
                f"{name} mean index {ih} is not above 2",
                facts=[(f"mean_index_{name}", str(ih), CITE_MEAN_INDEX_GATE)])

    def pins_top_class(cert: JumpCertificate) -> bool:
        m1 = cert.entry(c1.label).m
        return (index_at(c1, 2 * m1) + nullity_at(c1, 2 * m1)
                == 2 * cert.n_value + 2)

    cert = find_jump([c1, c2], 3, eps=options.eps, n_bound=options.n_bound,
                     extra_check=pins_top_class)
    if cert is None:
        return _not_eliminated(case, "budget",
                               f"no pinned jump certificate up to N = {options.n_bound}")

    n_value = cert.n_value
    m1, m2 = cert.entry(c1.label).m, cert.entry(c2.label).m
    facts.extend([
        ("N", str(n_value), "(6.7)"),
        ("m1", str(m1), "(6.7)"),
        ("m2", str(m2), "(6.7)"),
        ("mean_index_c1", str(ih1), CITE_MEAN_INDEX_GATE),
        ("mean_index_c2", str(ih2), CITE_MEAN_INDEX_GATE),
        ("i_c1_2m1", str(index_at(c1, 2 * m1)), CITE_TOP_CLASS),
        ("i_c2_2m2", str(index_at(c2, 2 * m2)), CITE_LEVEL_PIN[case]),
        ("nu_c2_2m2", str(nullity_at(c2, 2 * m2)), CITE_LEVEL_PIN[case]),
    ])

    t2 = minimal_period(c2)
    facts.append(("T_c2", str(t2), "(5.2)"))
    if ih2.is_rational():
        half = ih2.rational_part() * t2 / 2
        if half.denominator != 1:
            return _not_eliminated(case, "internal",
                                   f"half-period product {half} not integral")
        facts.append(("half_period_product", str(half.numerator), CITE_HALF_PERIOD))
        assert half.numerator >= t2 + 1
    inv1 = ih1.inverse()
    inv2 = ih2.inverse()
    ratio1_small = (SurdSum.from_value(1) * inv1) < Fraction(1, 2)
    if ratio1_small:
        facts.append(("chi_over_ihat_c1_below_half", "true", CITE_RATIO_BOUND))

    geos = [_GeoData(0, c1, n_value, m1, options.interior_cap),
            _GeoData(1, c2, n_value, m2, options.interior_cap)]

    class_keys = []
    menus = []
    for gd in geos:
        for key, info in sorted(gd.class_info.items(), key=lambda kv: (kv[0].who, kv[0].g)):
            class_keys.append(key)
            menus.append(info["menu"])
    branch_total = 1
    for menu in menus:
        branch_total *= len(menu)
    if branch_total > MAX_BRANCHES:
        return _not_eliminated(case, "budget",
                               f"{branch_total} type-number branches exceed the cap")

    lo_q, hi_q = 2 * n_value - 3, 2 * n_value + 2
    check_qs = sorted(set(range(0, LOW_DEGREE_MAX + 1))
                      | set(range(lo_q, hi_q + 1)))
    b_of = {q: betti(3, q) for q in check_qs}
    b_alt = {q: _betti_alt(3, q) for q in check_qs}
    rhs = constant_B(3)

    kill_counts: dict = {}
    witness = None
    top_chi_values = set()

    for combo in itertools.product(*menus):
        branch = dict(zip(class_keys, combo))
        if not _prune_2_7(branch):
            continue
        kill = _check_branch(geos, branch, n_value, lo_q, hi_q, check_qs,
                             b_of, b_alt, inv1, inv2, rhs)
        if kill is None:
            witness = {str(k): list(v) for k, v in branch.items()}
            break
        kill_counts[kill["kind"]] = kill_counts.get(kill["kind"], 0) + 1
        if kill["kind"] == "identity":
            top_chi_values.add(kill["chi_top"])

    # branches that pass every Morse check realize these Euler values on the
    # full-period class of c2; they are the window-forced relations
    for bv in sorted(top_chi_values):
        cite = CITE_BRIDGE.get(bv, CITE_BRIDGE_ONESIDED) if case == "case1" \
            else CITE_BRIDGE_ONESIDED
        facts.append(("chi_c2_full_period", str(bv), cite))

    if witness is not None:
        return _not_eliminated(case, "witness",
                               "a type-number branch survives all checks",
                               facts=facts, witness=witness,
                               cert=cert.to_dict())

    # exact identity deficit: the largest B-sum any admissible branch can
    # realize; when it falls short of B(3,1) the identity can never hold
    max_lhs = (SurdSum.from_value(geos[0].max_chi_hat()) * inv1
               + SurdSum.from_value(geos[1].max_chi_hat()) * inv2)
    identity_deficit = max_lhs < rhs
    if identity_deficit:
        facts.append(("max_identity_sum", str(max_lhs),
                      CITE_IDENTITY.get(case, "(7.46)")))

    contradiction = _pick_contradiction(case, c2, kill_counts, identity_deficit,
                                        max_lhs, rhs)
    return EliminationReport(
        case_label=case, status="eliminated", reason="all branches contradict",
        derived_facts=facts, contradiction=contradiction,
        branch_total=branch_total, kill_counts=kill_counts,
        certificate=cert.to_dict())


def _pick_contradiction(case: str, c2: GeodesicModel, kill_counts: dict,
                        identity_deficit: bool, max_lhs, rhs) -> dict:
    """The final blow, chosen the way the playbook argues each case: the
    rotation-pair cases end on the mean index identity, the mixed cases on
    the Betti-excess squeeze at the jump level."""
    morse_cites = {"rank@2N": CITE_BETTI_EXCESS, "rank-window": CITE_RANK_WINDOW,
                   "window-alternating": CITE_WINDOW_ALTERNATING,
                   "rank-low": "(3.6)", "low-alternating": CITE_LOW_ALTERNATING}
    identity_cite = CITE_IDENTITY.get(case, "(7.46)")
    if case == "case4":
        identity_cite = "(7.69)" if c2.initial_index % 2 == 0 else "(7.76)"
    squeeze = {"kind": "rank@2N", "cite": CITE_BETTI_EXCESS,
               "statement": "no admissible branch lets the configuration "
                            "carry both classes at the jump level"}
    deficit = {"kind": "identity", "cite": identity_cite,
               "statement": f"largest achievable identity sum {max_lhs} "
                            f"falls short of B(3,1) = {rhs}"}
    if case in ("case5", "case6"):
        if "rank@2N" in kill_counts:
            return squeeze
        if identity_deficit or "identity" in kill_counts:
            return deficit
    else:
        if identity_deficit or "identity" in kill_counts:
            return deficit
        if "rank@2N" in kill_counts:
            return squeeze
    stage_order = ["rank@2N", "rank-window", "window-alternating",
                   "rank-low", "low-alternating", "identity"]
    deepest = max(kill_counts, key=lambda k: stage_order.index(k)) \
        if kill_counts else "vacuous"
    return {"kind": deepest, "cite": morse_cites.get(deepest, "(3.6)"),
            "statement": "every type-number branch violates a Morse "
                         "inequality in the checked window"}


def _check_branch(geos, branch, n_value, lo_q, hi_q, check_qs, b_of, b_alt,
                  inv1, inv2, rhs) -> Optional[dict]:
    """First failed constraint for this branch (in playbook order: jump
    window squeeze, window alternating sums, low-degree counts, exact mean
    index identity), or None if the branch survives everything."""
    window_qs = [q for q in check_qs if q >= lo_q]
    low_qs = [q for q in check_qs if q <= LOW_DEGREE_MAX and q < lo_q]
    for q in window_qs:
        m_q = sum(_contribution(gd.window, branch, q, gd.i1) for gd in geos)
        if m_q < b_of[q]:
            return {"kind": "rank@2N" if q == 2 * n_value else "rank-window",
                    "q": q, "M": m_q, "b": b_of[q]}
    chis = [gd.chi_list(branch) for gd in geos]
    for q in window_qs:
        total = 0
        for gd, chi in zip(geos, chis):
            total += gd.chi_prefix(branch, gd.window_prefix, chi)
            total += _w_sum(gd.window, branch, q, gd.i1)
        alt_m = total if q % 2 == 0 else -total
        if alt_m < b_alt[q]:
            return {"kind": "window-alternating", "q": q,
                    "alt_M": alt_m, "alt_b": b_alt[q]}
    for q in low_qs:
        m_q = sum(_contribution(gd.low, branch, q, gd.i1) for gd in geos)
        if m_q < b_of[q]:
            return {"kind": "rank-low", "q": q, "M": m_q, "b": b_of[q]}
    for q in low_qs:
        total = sum(_w_sum(gd.low, branch, q, gd.i1) for gd in geos)
        alt_m = total if q % 2 == 0 else -total
        if alt_m < b_alt[q]:
            return {"kind": "low-alternating", "q": q,
                    "alt_M": alt_m, "alt_b": b_alt[q]}
    chi_hats = [Fraction(sum(chi), gd.t) for gd, chi in zip(geos, chis)]
    lhs = SurdSum.from_value(chi_hats[0]) * inv1 + SurdSum.from_value(chi_hats[1]) * inv2
    if not (lhs - rhs).is_zero():
        return {"kind": "identity", "lhs": str(lhs), "rhs": str(rhs),
                "chi_top": chis[1][-1]}
    return None


# ---------------------------------------------------------------------------
# sweeps over configuration space
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepGrid:
    """A finite slice of second-curve configuration space on S^3."""

    rational_turns: tuple
    surd_turns: tuple
    indices: tuple
    c1_turns: tuple
    c1_index: int = 2
    cases: Optional[tuple] = None
    eps: Fraction = Fraction(1, 8)
    n_bound: int = 10 ** 6
    jobs: int = 1

    @classmethod
    def from_dict(cls, data: dict) -> "SweepGrid":
        grid = data.get("grid", {})
        if "rational_turns" in grid:
            rats = tuple(Fraction(parse_turn(t)) for t in grid["rational_turns"])
        else:
            dmax = int(grid.get("denominator_max", 7))
            rats = tuple(Fraction(a, b) for b in range(1, dmax + 1)
                         for a in range(1, b + 1) if gcd(a, b) == 1)
        surds = tuple(parse_turn(t) for t in grid.get("surd_turns", []))
        for s in surds:
            if is_rational_turn(s):
                raise ValueError(f"surd turn list contains a rational: {s}")
        c1 = data.get("c1", {})
        c1_turns = tuple(parse_turn(t) for t in c1.get(
            "turns", ["(0+1*sqrt(2))/2", "(0+1*sqrt(3))/2"]))
        budget = data.get("budget", {})
        eps = Fraction(parse_turn(str(budget.get("eps", "1/8"))))
        cases = grid.get("cases")
        return cls(
            rational_turns=rats,
            surd_turns=surds,
            indices=tuple(int(i) for i in grid.get("indices", (2, 3, 4, 5))),
            c1_turns=c1_turns,
            c1_index=int(c1.get("index", 2)),
            cases=tuple(cases) if cases else None,
            eps=eps,
            n_bound=int(budget.get("n_bound", 10 ** 6)),
            jobs=int(budget.get("jobs", 1)),
        )


def _grid_shapes(grid: SweepGrid):
    """Deterministic catalog of candidate second curves (pre-validation)."""
    rats = sorted(grid.rational_turns)
    surds = list(grid.surd_turns)
    shapes = []
    for i, t1 in enumerate(rats):
        for t2 in rats[i:]:
            shapes.append((f"RR[{t1},{t2}]", [rotation(t1), rotation(t2)]))
    for t in rats:
        for s in surds:
            shapes.append((f"RS[{t},{format_turn(s)}]", [rotation(t), rotation(s)]))
        shapes.append((f"RNm[{t}]", [rotation(t), N1_MINUS_PLUS]))
        shapes.append((f"RNp[{t}]", [rotation(t), N1_PLUS_MINUS]))
        shapes.append((f"RH[{t}]", [rotation(t), hyperbolic(2)]))
        shapes.append((f"N2t[{t}]", [n2_trivial(t)] if t not in (1, Fraction(1, 2)) else None))
        shapes.append((f"N2n[{t}]", [n2_nontrivial(t)] if t not in (1, Fraction(1, 2)) else None))
    for i, s1 in enumerate(surds):
        for s2 in surds[i:]:
            shapes.append((f"SS[{format_turn(s1)},{format_turn(s2)}]",
                           [rotation(s1), rotation(s2)]))
        shapes.append((f"SNm[{format_turn(s1)}]", [rotation(s1), N1_MINUS_PLUS]))
        shapes.append((f"SNp[{format_turn(s1)}]", [rotation(s1), N1_PLUS_MINUS]))
        shapes.append((f"SH[{format_turn(s1)}]", [rotation(s1), hyperbolic(2)]))
        shapes.append((f"N2ts[{format_turn(s1)}]", [n2_trivial(s1)]))
        shapes.append((f"N2ns[{format_turn(s1)}]", [n2_nontrivial(s1)]))
    shapes.extend([
        ("NpNp", [N1_PLUS_MINUS, N1_PLUS_MINUS]),
        ("NpNm", [N1_PLUS_MINUS, N1_MINUS_PLUS]),
        ("NmNm", [N1_MINUS_PLUS, N1_MINUS_PLUS]),
        ("NpH", [N1_PLUS_MINUS, hyperbolic(2)]),
        ("NmH", [N1_MINUS_PLUS, hyperbolic(2)]),
        ("H4", [hyperbolic(4)]),
    ])
    return [(key, blocks) for key, blocks in shapes if blocks is not None]


def generate_cells(grid: SweepGrid):
    """(key, model) cells plus a list of (key, reason) exclusions.

    Cells must parse as valid decompositions with the right index parity;
    cells whose mean index is not above 2 are excluded by the mean-index
    gate rather than eliminated, mirroring the pinching hypothesis.
    """
    cells = []
    excluded = []
    for key, blocks in _grid_shapes(grid):
        dec = Decomposition(3, blocks)
        if dec.validate():
            continue
        want = dec.parity_constraint()
        for i0 in grid.indices:
            if want is not None and i0 % 2 != want:
                continue
            model = GeodesicModel(dec, i0, "c2")
            cell_key = f"{key}i{i0}"
            if grid.cases and classify_case(model) not in grid.cases:
                continue
            if not mean_index(model) > 2:
                excluded.append((cell_key, "mean index not above 2"))
                continue
            cells.append((cell_key, model))
    return cells, excluded


def _sweep_worker(packed):
    cell_key, c2_dict, c1_dict, eps_str, n_bound, cap = packed
    c1 = GeodesicModel.from_dict(c1_dict)
    c2 = GeodesicModel.from_dict(c2_dict)
    opts = EliminationOptions(eps=Fraction(eps_str), n_bound=n_bound,
                              interior_cap=cap)
    try:
        rep = eliminate(c1, c2, opts)
        return cell_key, rep.to_dict()
    except Exception as exc:  # isolate per-cell failures
        return cell_key, {"case": "?", "status": "error", "reason": repr(exc),
                          "kills": {}, "contradiction": None,
                          "derived_facts": [], "witness": None,
                          "branches": 0, "certificate": None}


@dataclass
class SweepSummary:
    total: int
    eliminated: int
    not_eliminated: list
    errors: list
    excluded: list
    by_case: dict
    by_cite: dict
    reports: dict

    def to_dict(self, include_reports: bool = True) -> dict:
        out = {
            "total": self.total,
            "eliminated": self.eliminated,
            "not_eliminated": self.not_eliminated,
            "errors": self.errors,
            "excluded": [{"cell": k, "reason": r} for k, r in self.excluded],
            "by_case": self.by_case,
            "by_cite": self.by_cite,
        }
        if include_reports:
            out["reports"] = self.reports
        return out


def sweep(grid: SweepGrid, interior_cap: int = 2) -> SweepSummary:
    """Classify and eliminate every cell of the grid; order-independent."""
    cells, excluded = generate_cells(grid)
    c1 = model_from_turns(3, list(grid.c1_turns), grid.c1_index, "c1")
    packed = [(key, model.to_dict(), c1.to_dict(), str(grid.eps),
               grid.n_bound, interior_cap) for key, model in cells]
    if grid.jobs > 1 and len(packed) > 1:
        with ProcessPoolExecutor(max_workers=grid.jobs) as pool:
            results = list(pool.map(_sweep_worker, packed, chunksize=8))
    else:
        results = [_sweep_worker(p) for p in packed]
    by_case: dict = {}
    by_cite: dict = {}
    not_eliminated = []
    errors = []
    reports = {}
    eliminated = 0
    for cell_key, rep in results:
        reports[cell_key] = rep
        by_case[rep["case"]] = by_case.get(rep["case"], 0) + 1
        if rep["status"] == "eliminated":
            eliminated += 1
            cite = (rep.get("contradiction") or {}).get("cite", "?")
            by_cite[cite] = by_cite.get(cite, 0) + 1
        elif rep["status"] == "error":
            errors.append(cell_key)
        else:
            not_eliminated.append(cell_key)
    return SweepSummary(
        total=len(cells), eliminated=eliminated,
        not_eliminated=sorted(not_eliminated), errors=sorted(errors),
        excluded=excluded, by_case=by_case, by_cite=by_cite, reports=reports)


# ---------------------------------------------------------------------------
# the non-elliptic off-by-one contradiction on S^n
# ---------------------------------------------------------------------------


def step_one_check(config, n: int, chi_hats: Optional[dict] = None) -> dict:
    """Replay the global counting contradiction for a hypothetical set of
    non-elliptic curves: the full alternating Morse count up to degree
    2N + n - 2 must equal 2*N*B(n,1) (granting the mean index identity),
    while the Betti side comes out one closer to zero, so the top-degree
    alternating Morse inequality fails by exactly one.

    config is a list of DressedGeodesic; chi_hats may override the averaged
    Euler characteristics (required when type data is absent).
    """
    from .loop_homology import alternating_sum
    from .morse_engine import average_euler

    violations = []
    models = []
    for dg in config:
        g = dg.model
        models.append(g)
        e = g.decomposition.elliptic_height()
        if e > 2 * n - 4:
            violations.append(f"{g.label}: elliptic height {e} exceeds 2n-4")
        if g.initial_index < n - 1:
            violations.append(f"{g.label}: initial index below n-1")
        if g.decomposition.n != n:
            violations.append(f"{g.label}: sphere dimension mismatch")
    if violations:
        return {"status": "precondition-error", "violations": violations}

    chi = {}
    for dg in config:
        if chi_hats and dg.label in chi_hats:
            chi[dg.label] = Fraction(chi_hats[dg.label])
        else:
            chi[dg.label] = average_euler(dg)

    cert = find_jump(models, n, chi_hats=chi)
    if cert is None:
        return {"status": "budget", "violations": ["no jump certificate found"]}

    checks = []
    for g in models:
        entry = cert.entry(g.label)
        t_g = minimal_period(g)
        ok_period = (2 * entry.m) % t_g == 0
        prod = 2 * entry.m * chi[g.label]
        ok_integral = prod.denominator == 1
        checks.append({"label": g.label, "m": entry.m,
                       "doubled_iterate_in_period_lattice": ok_period,
                       "weighted_count": str(prod),
                       "weighted_count_integral": ok_integral})

    b = constant_B(n)
    claim1 = 2 * cert.n_value * b
    assert claim1.denominator == 1
    signed_morse = claim1.numerator
    top = 2 * cert.n_value + n - 2
    signed_betti = alternating_sum(n, top)
    if n % 2:
        k = (n - 1) // 2
        m_param = cert.n_value // k
        family = {"parity": "odd", "k": k, "m": m_param,
                  "morse_form": f"{m_param}*(k+1)", "betti_form": f"{m_param}*(k+1)-1"}
    else:
        k = n // 2
        m_param = cert.n_value // (2 * k - 1)
        family = {"parity": "even", "k": k, "m": m_param,
                  "morse_form": f"-2*{m_param}*k", "betti_form": f"-2*{m_param}*k+1"}
    # top-degree alternating Morse inequality, oriented as at the top degree
    sign = 1 if top % 2 == 0 else -1
    lhs = sign * signed_morse
    rhs = sign * signed_betti
    return {
        "status": "contradiction" if lhs < rhs else "consistent",
        "n": n,
        "N": cert.n_value,
        "family": family,
        "signed_morse": signed_morse,
        "signed_betti": signed_betti,
        "top_degree": top,
        "inequality": {"lhs": lhs, "rhs": rhs, "holds": lhs >= rhs},
        "off_by_one": rhs - lhs == 1,
        "iterate_checks": checks,
        "certificate": cert.to_dict(),
    }
